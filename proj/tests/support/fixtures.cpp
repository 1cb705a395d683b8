#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace rpys::fixtures {

namespace {

std::size_t below(std::mt19937_64 &rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

std::string syllables(std::mt19937_64 &rng, std::size_t n) {
  static const char *cons = "bcdfghklmnprstvz";
  static const char *vow = "aeiou";
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    s += cons[below(rng, 16)];
    s += vow[below(rng, 5)];
  }
  s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string make_ref(const std::string &author, int year, const std::string &source, int vol, int page) {
  return author + ", " + std::to_string(year) + ", " + source + ", V" + std::to_string(vol) + ", P" +
         std::to_string(page);
}

/// One substitution, insertion or deletion at a letter past the first.
std::string mutate(std::string s, std::mt19937_64 &rng) {
  std::vector<std::size_t> pos;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::islower(static_cast<unsigned char>(s[i]))) pos.push_back(i);
  if (pos.empty()) return s + "x";
  std::size_t p = pos[below(rng, pos.size())];
  char c = static_cast<char>('a' + below(rng, 26));
  switch (below(rng, 3)) {
    case 0:
      if (c == s[p]) c = c == 'z' ? 'a' : static_cast<char>(c + 1);
      s[p] = c;
      break;
    case 1: s.insert(s.begin() + static_cast<std::ptrdiff_t>(p), c); break;
    default: s.erase(p, 1); break;
  }
  return s;
}

struct Work {
  std::string author, source;
  int year = 0, vol = 0, page = 0;
  std::string ref() const { return make_ref(author, year, source, vol, page); }
  std::string key() const { return author + "|" + std::to_string(year) + "|" + source; }
};

Work random_work(std::mt19937_64 &rng, int year) {
  return {random_author(rng), random_source(rng), year, 1 + static_cast<int>(below(rng, 300)),
          1 + static_cast<int>(below(rng, 3000))};
}

std::string wos_id(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "WOS:%015zu", n);
  return buf;
}

}  // namespace

std::string random_author(std::mt19937_64 &rng) {
  std::string a = syllables(rng, 3 + below(rng, 2)) + " ";
  std::size_t initials = 1 + below(rng, 2);
  for (std::size_t i = 0; i < initials; ++i) a += static_cast<char>('A' + below(rng, 26));
  return a;
}

std::string random_source(std::mt19937_64 &rng) {
  static const char *tail[] = {"Res", "Lett", "Rev", "Sci", "Med", "Biol", "Stud"};
  return "J " + syllables(rng, 3 + below(rng, 2)) + " " + tail[below(rng, 7)];
}

std::string to_tagged(const std::vector<CitingRecord> &records) {
  std::string out = "FN Clarivate Analytics Web of Science\nVR 1.0\n";
  for (const auto &r : records) {
    out += "PT J\nAU Synthetic, A\n";
    out += "TI " + r.title + "\n";
    out += "SO " + r.source + "\n";
    if (r.pub_year) out += "PY " + std::to_string(*r.pub_year) + "\n";
    for (std::size_t i = 0; i < r.cited_refs.size(); ++i) out += (i ? "   " : "CR ") + r.cited_refs[i] + "\n";
    out += "UT " + r.record_id + "\nER\n\n";
  }
  out += "EF\n";
  return out;
}

std::string to_tabular(const std::vector<CitingRecord> &records) {
  std::string out = "PT\tAU\tTI\tSO\tPY\tCR\tUT\n";
  for (const auto &r : records) {
    std::string crs;
    for (std::size_t i = 0; i < r.cited_refs.size(); ++i) crs += (i ? "; " : "") + r.cited_refs[i];
    out += "J\tSynthetic, A\t" + r.title + "\t" + r.source + "\t" + (r.pub_year ? std::to_string(*r.pub_year) : "") +
           "\t" + crs + "\t" + r.record_id + "\n";
  }
  return out;
}

PlantedFixture make_planted_fixture(std::uint64_t seed) {
  constexpr int kFirstCiting = 1990, kLastCiting = 2015;
  constexpr std::size_t kRecordsPerSegment = 22, kWorksPerYear = 12, kSearches = 4;
  constexpr double kBase = 25.0;
  constexpr double kTypoRate = 0.03;

  std::mt19937_64 rng(seed);
  PlantedFixture fx;
  fx.planted_years = {1827, 1859, 1895, 1920, 1937, 1950, 1959, 1963, 1968,
                      1980, 1987, 1990, 1993, 1996, 2000, 2004, 2009, 2012};
  const std::set<int> planted(fx.planted_years.begin(), fx.planted_years.end());
  const std::set<int> with_secondary{1996, 2009};
  const int low_year = 2004, low_segment = 2010, unboosted_year = 1975, absent_year = 1985;

  // Background works: several per year wherever the base curve is non-zero.
  const int first_year = fx.planted_years.front();
  std::map<int, std::vector<Work>> base;
  for (int y = first_year; y <= kLastCiting; ++y)
    for (std::size_t j = 0; j < kWorksPerYear; ++j) base[y].push_back(random_work(rng, y));
  std::map<int, Work> primary, secondary;
  for (int y : fx.planted_years) {
    primary[y] = random_work(rng, y);
    if (with_secondary.contains(y)) secondary[y] = random_work(rng, y);
  }
  Work low = random_work(rng, low_year);
  Work absent = random_work(rng, absent_year);

  auto base_count = [&](int c, int y) -> int {
    if (y > c) return 0;
    int lag = c - y;
    double g = lag <= 2 ? 1.0 : std::exp(-(lag - 2) / 8.0);
    return static_cast<int>(std::lround(kBase * g));
  };

  // Per segment: ordered list of (work, count) before shuffling into records.
  struct Cite {
    const Work *work;
    bool typo_ok;
  };
  std::map<int, std::vector<Cite>> segment_cites;
  for (int c = kFirstCiting; c <= kLastCiting; ++c) {
    auto &cites = segment_cites[c];
    std::map<int, int> spike;
    int max_other = 0;
    for (std::size_t i = 0; i < fx.planted_years.size(); ++i) {
      int y = fx.planted_years[i];
      if (y > c || y == fx.dominant_year) continue;
      spike[y] = 3 * base_count(c, y) + 6 + static_cast<int>((i * 5) % 15);
      max_other = std::max(max_other, spike[y] + base_count(c, y));
    }
    spike[fx.dominant_year] = max_other + 8;

    for (int y = first_year; y <= c; ++y) {
      int b = base_count(c, y);
      for (int i = 0; i < b; ++i) cites.push_back({&base[y][static_cast<std::size_t>(c + i) % kWorksPerYear], true});
      if (auto it = spike.find(y); it != spike.end()) {
        int s = it->second;
        int first = with_secondary.contains(y) ? static_cast<int>(std::lround(0.7 * s)) : s;
        for (int i = 0; i < first; ++i) cites.push_back({&primary[y], true});
        for (int i = first; i < s; ++i) cites.push_back({&secondary[y], true});
      }
    }
    if (c == low_segment) cites.push_back({&low, false});
  }

  // Each search replays the same segments with its own record ids, typos and
  // record assignment.
  for (std::size_t s = 0; s < kSearches; ++s) {
    Corpus corpus;
    for (int c = kFirstCiting; c <= kLastCiting; ++c) {
      std::vector<CitingRecord> recs(kRecordsPerSegment);
      for (std::size_t k = 0; k < recs.size(); ++k) {
        recs[k].record_id = wos_id(s * 100000 + static_cast<std::size_t>(c) * 100 + k);
        recs[k].pub_year = c;
        recs[k].title = "Synthetic record " + std::to_string(s) + "-" + std::to_string(c) + "-" + std::to_string(k);
        recs[k].source = "J SYNTH STUD";
      }
      auto cites = segment_cites[c];
      std::shuffle(cites.begin(), cites.end(), rng);
      for (std::size_t i = 0; i < cites.size(); ++i) {
        const Work &w = *cites[i].work;
        std::string ref = w.ref();
        if (cites[i].typo_ok && std::uniform_real_distribution<double>(0, 1)(rng) < kTypoRate)
          ref = make_ref(mutate(w.author, rng), w.year, w.source, w.vol, w.page);
        recs[i % recs.size()].cited_refs.push_back(std::move(ref));
      }
      for (auto &r : recs) corpus.records.push_back(std::move(r));
    }
    corpus.provenance.push_back({"search_" + std::string(1, static_cast<char>('A' + s)), ExportFormat::Tagged,
                                 corpus.records.size()});
    fx.searches.push_back(std::move(corpus));
  }
  fx.combined = corpus_union(fx.searches);

  // Milestones: every planted primary and secondary article is captured by
  // construction; the low-count, unboosted and absent articles and the
  // undocumented entry are not.
  for (int y : fx.planted_years) {
    MilestoneEntry e{y, "planted " + std::to_string(y), {parse_article_key(primary[y].key())}};
    if (secondary.contains(y)) e.articles.push_back(parse_article_key(secondary[y].key()));
    fx.milestones.push_back(std::move(e));
  }
  fx.milestones.push_back({low_year, "rarely cited work in a peak year", {parse_article_key(low.key())}});
  fx.milestones.push_back(
      {unboosted_year, "background work in a year without a peak", {parse_article_key(base[unboosted_year][0].key())}});
  fx.milestones.push_back({absent_year, "never cited", {parse_article_key(absent.key())}});
  fx.milestones.push_back({1992, "milestone without a referenced document", {}});
  fx.expected_captured = fx.planted_years.size() + with_secondary.size();
  fx.expected_slots = fx.expected_captured + 4;
  return fx;
}

std::vector<std::vector<CitingRecord>> make_overlapping_searches(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Work> works;
  for (int i = 0; i < 600; ++i) works.push_back(random_work(rng, 1950 + static_cast<int>(below(rng, 60))));
  std::vector<CitingRecord> pool(1948);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    auto &r = pool[i];
    r.record_id = wos_id(500000 + i);
    r.pub_year = 1990 + static_cast<int>(below(rng, 26));
    r.title = "Pool record " + std::to_string(i);
    r.source = "J SYNTH STUD";
    for (int k = 0; k < 6; ++k) r.cited_refs.push_back(works[below(rng, works.size())].ref());
  }
  auto slice = [&](std::size_t from, std::size_t to) {
    return std::vector<CitingRecord>(pool.begin() + static_cast<std::ptrdiff_t>(from),
                                     pool.begin() + static_cast<std::ptrdiff_t>(to));
  };
  auto a = slice(0, 1148);
  auto b = slice(0, 244);
  auto c = slice(998, 1916);   // 150 shared with A, 768 new
  auto d = slice(1088, 1148);  // 60 shared with A ...
  auto d_new = slice(1916, 1948);  // ... and 32 new
  d.insert(d.end(), d_new.begin(), d_new.end());
  return {a, b, c, d};
}

DedupFixture make_dedup_fixture(std::size_t works, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DedupFixture fx;
  fx.canonical_count = works;
  for (std::size_t i = 0; i < works; ++i) {
    Work w = random_work(rng, 1950 + static_cast<int>(below(rng, 66)));
    std::size_t canon = fx.refs.size();
    fx.refs.push_back(parse_cited_ref(w.ref(), "CANON"));
    fx.canonical.push_back(canon);
    // One author variant and one source variant, each one or two edits away.
    std::string author = mutate(w.author, rng);
    if (below(rng, 2)) author = mutate(author, rng);
    fx.refs.push_back(parse_cited_ref(make_ref(author, w.year, w.source, w.vol, w.page), "VAR"));
    fx.canonical.push_back(canon);
    std::string source = mutate(w.source, rng);
    if (below(rng, 2)) source = mutate(source, rng);
    fx.refs.push_back(parse_cited_ref(make_ref(w.author, w.year, source, w.vol, w.page), "VAR"));
    fx.canonical.push_back(canon);
  }
  return fx;
}

}  // namespace rpys::fixtures
