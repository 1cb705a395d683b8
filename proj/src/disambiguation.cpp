#include "rpyskit/disambiguation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "rpyskit/parallel.hpp"

namespace rpys {

void MatchConfig::validate() const {
  if (!(string_sim_threshold >= 0.0 && string_sim_threshold <= 1.0))
    throw std::invalid_argument("string_sim_threshold must lie in [0, 1]");
  if (weights.author < 0 || weights.source < 0 || weights.volume < 0 || weights.page < 0)
    throw std::invalid_argument("similarity weights must be non-negative");
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

double levenshtein_ratio(std::string_view a, std::string_view b) {
  std::size_t m = std::max(a.size(), b.size());
  if (m == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(m);
}

namespace {

struct FieldScore {
  double value = 0.0;
  bool full = true;

  void text(std::string_view a, std::string_view b, double w) {
    if (a.empty() && b.empty()) {
      value += w;
    } else if (a.empty() || b.empty()) {
      value += 0.5 * w;
      full = false;
    } else {
      double r = levenshtein_ratio(a, b);
      value += w * r;
      full = full && r == 1.0;
    }
  }

  void exact(const std::optional<std::string> &a, const std::optional<std::string> &b, double w) {
    std::string da = a ? digits_only(*a) : std::string{};
    std::string db = b ? digits_only(*b) : std::string{};
    if (da.empty() && db.empty()) {
      value += w;
    } else if (da.empty() || db.empty()) {
      value += 0.5 * w;
      full = false;
    } else if (da == db) {
      value += w;
    } else {
      full = false;
    }
  }
};

double total_weight(const SimilarityWeights &w) { return w.author + w.source + w.volume + w.page; }

// Upper bound on the text part of the score from string lengths alone.
double length_bound(std::size_t la, std::size_t lb) {
  std::size_t m = std::max(la, lb);
  if (m == 0 || la == 0 || lb == 0) return 1.0;
  return 1.0 - static_cast<double>(m - std::min(la, lb)) / static_cast<double>(m);
}

struct Key {
  std::string author, source, volume, page, doi;
  auto tie() const { return std::tie(author, source, volume, page, doi); }
  bool operator<(const Key &o) const { return tie() < o.tie(); }
};

Key key_of(const RawCitedRef &r) {
  return {r.first_author, r.source, r.volume ? digits_only(*r.volume) : std::string{},
          r.first_page ? digits_only(*r.first_page) : std::string{}, r.doi.value_or("")};
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), doi_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void set_doi(std::size_t x, std::string doi) { doi_[x] = std::move(doi); }

  // Refuses to join components that carry different DOIs.
  bool unite(std::size_t a, std::size_t b, bool doi_cannot_link) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    if (doi_cannot_link && !doi_[a].empty() && !doi_[b].empty() && doi_[a] != doi_[b]) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    if (doi_[a].empty()) doi_[a] = std::move(doi_[b]);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::string> doi_;
};

bool member_less(const RawCitedRef &a, const RawCitedRef &b) {
  return std::tie(a.original, a.parent_record_id) < std::tie(b.original, b.parent_record_id);
}

RefCluster make_cluster(std::vector<RawCitedRef> members) {
  std::sort(members.begin(), members.end(), member_less);
  RefCluster c;
  c.ref_year = members.front().ref_year;
  c.representative = pick_representative(members);
  c.members = std::move(members);
  return c;
}

// Clusters one year block. Identical keys always score 1, so they are
// collapsed before the pairwise pass.
std::vector<RefCluster> cluster_block(const std::vector<RawCitedRef> &refs, const std::vector<std::size_t> &idx,
                                      const MatchConfig &cfg) {
  std::map<Key, std::vector<std::size_t>> groups;
  for (std::size_t i : idx) groups[key_of(refs[i])].push_back(i);

  std::vector<const RawCitedRef *> reps;
  std::vector<const std::vector<std::size_t> *> members;
  reps.reserve(groups.size());
  for (const auto &[key, m] : groups) {
    reps.push_back(&refs[m.front()]);
    members.push_back(&m);
  }

  const std::size_t u = reps.size();
  const double thr = cfg.string_sim_threshold;
  const auto &w = cfg.weights;
  struct Edge {
    double score;
    std::size_t a, b;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < u; ++i) {
    for (std::size_t j = i + 1; j < u; ++j) {
      const auto &x = *reps[i];
      const auto &y = *reps[j];
      bool doi_pair = cfg.doi_overrides && x.doi && y.doi;
      if (!doi_pair) {
        double bound = w.author * length_bound(x.first_author.size(), y.first_author.size()) +
                       w.source * length_bound(x.source.size(), y.source.size()) + w.volume + w.page;
        if (bound + 1e-12 < thr) continue;
      }
      double s = similarity(x, y, cfg);
      if (s >= thr) edges.push_back({s, i, j});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge &p, const Edge &q) {
    if (p.score != q.score) return p.score > q.score;
    return std::tie(p.a, p.b) < std::tie(q.a, q.b);
  });

  DisjointSets sets(u);
  for (std::size_t i = 0; i < u; ++i)
    if (reps[i]->doi) sets.set_doi(i, *reps[i]->doi);
  for (const auto &e : edges) sets.unite(e.a, e.b, cfg.doi_overrides);

  std::map<std::size_t, std::vector<RawCitedRef>> comps;
  for (std::size_t i = 0; i < u; ++i) {
    auto &dst = comps[sets.find(i)];
    for (std::size_t r : *members[i]) dst.push_back(refs[r]);
  }
  std::vector<RefCluster> out;
  out.reserve(comps.size());
  for (auto &[root, m] : comps) out.push_back(make_cluster(std::move(m)));
  return out;
}

std::size_t populated_fields(const RawCitedRef &r) {
  return !r.first_author.empty() + r.ref_year.has_value() + !r.source.empty() + r.volume.has_value() +
         r.first_page.has_value() + r.doi.has_value();
}

void sort_and_number(std::vector<RefCluster> &clusters) {
  std::sort(clusters.begin(), clusters.end(), [](const RefCluster &a, const RefCluster &b) {
    bool ua = !a.ref_year, ub = !b.ref_year;
    if (ua != ub) return ub;
    if (a.ref_year != b.ref_year) return *a.ref_year < *b.ref_year;
    if (a.representative.original != b.representative.original)
      return a.representative.original < b.representative.original;
    return std::lexicographical_compare(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                                        member_less);
  });
  for (std::size_t i = 0; i < clusters.size(); ++i) clusters[i].cluster_id = i;
}

}  // namespace

double similarity(const RawCitedRef &a, const RawCitedRef &b, const MatchConfig &cfg) {
  if (cfg.doi_overrides && a.doi && b.doi) return *a.doi == *b.doi ? 1.0 : 0.0;
  if (cfg.require_year_block && a.ref_year != b.ref_year) return 0.0;
  const auto &w = cfg.weights;
  FieldScore fs;
  fs.text(a.first_author, b.first_author, w.author);
  fs.text(a.source, b.source, w.source);
  fs.exact(a.volume, b.volume, w.volume);
  fs.exact(a.first_page, b.first_page, w.page);
  if (fs.full) return 1.0;
  double total = total_weight(w);
  if (total <= 0) return 0.0;
  return std::clamp(fs.value / total, 0.0, 1.0);
}

const RawCitedRef &pick_representative(const std::vector<RawCitedRef> &members) {
  if (members.empty()) throw std::invalid_argument("pick_representative: empty member list");
  const RawCitedRef *best = &members.front();
  for (const auto &m : members) {
    auto pm = populated_fields(m), pb = populated_fields(*best);
    if (pm > pb || (pm == pb && m.original < best->original)) best = &m;
  }
  return *best;
}

std::vector<RefCluster> cluster_refs(const std::vector<RawCitedRef> &refs, const MatchConfig &cfg,
                                     unsigned threads) {
  cfg.validate();
  std::map<int, std::vector<std::size_t>> blocks;
  std::vector<RefCluster> out;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (refs[i].ref_year) blocks[*refs[i].ref_year].push_back(i);
    else out.push_back(make_cluster({refs[i]}));
  }

  std::vector<const std::vector<std::size_t> *> block_list;
  for (const auto &[year, idx] : blocks) block_list.push_back(&idx);
  std::vector<std::vector<RefCluster>> per_block(block_list.size());
  parallel_for(block_list.size(), threads,
               [&](std::size_t b) { per_block[b] = cluster_block(refs, *block_list[b], cfg); });

  for (auto &blk : per_block)
    for (auto &c : blk) out.push_back(std::move(c));
  sort_and_number(out);
  return out;
}

std::vector<RefCluster> clusters_without_dedup(const std::vector<RawCitedRef> &refs) {
  std::map<std::pair<std::optional<int>, std::string>, std::vector<RawCitedRef>> groups;
  std::vector<RefCluster> out;
  for (const auto &r : refs) {
    if (r.ref_year) groups[{r.ref_year, r.original}].push_back(r);
    else out.push_back(make_cluster({r}));
  }
  for (auto &[k, m] : groups) out.push_back(make_cluster(std::move(m)));
  sort_and_number(out);
  return out;
}

}  // namespace rpys
