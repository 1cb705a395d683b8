#include "rpyskit/validation.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rpyskit/csv.hpp"

namespace rpys {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

std::optional<int> parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty() || s.size() > 6) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

void check_year(int year, std::size_t row) {
  if (!is_valid_year(year)) throw MilestoneError("year " + std::to_string(year) + " out of range", row);
}

std::vector<ArticleKey> parse_key_list(std::string_view cell, std::size_t row) {
  std::vector<ArticleKey> keys;
  for (auto part : split(cell, ';')) {
    if (part.empty()) continue;
    try {
      keys.push_back(parse_article_key(part));
    } catch (const std::invalid_argument &e) {
      throw MilestoneError(e.what(), row);
    }
  }
  return keys;
}

}  // namespace

std::string ArticleKey::to_string() const {
  std::string s = author + "|" + std::to_string(year) + "|" + source;
  if (doi) s += "|" + *doi;
  return s;
}

RawCitedRef ArticleKey::as_cited_ref() const {
  RawCitedRef r;
  r.original = to_string();
  r.first_author = normalize_text(author);
  r.ref_year = year;
  r.source = normalize_text(source);
  if (doi) r.doi = normalize_doi(*doi);
  return r;
}

ArticleKey parse_article_key(std::string_view text) {
  auto parts = split(text, '|');
  if (parts.size() < 3 || parts.size() > 4)
    throw std::invalid_argument("article key '" + std::string(text) + "' is not author|year|source[|doi]");
  ArticleKey k;
  k.author = std::string(parts[0]);
  auto y = parse_int(parts[1]);
  if (!y || !is_valid_year(*y)) throw std::invalid_argument("article key '" + std::string(text) + "' has a bad year");
  k.year = *y;
  k.source = std::string(parts[2]);
  if (k.author.empty()) throw std::invalid_argument("article key '" + std::string(text) + "' has no author");
  if (parts.size() == 4 && !parts[3].empty()) {
    k.doi = normalize_doi(parts[3]);
    if (!k.doi) throw std::invalid_argument("article key '" + std::string(text) + "' has a malformed DOI");
  }
  return k;
}

std::vector<MilestoneEntry> parse_milestones_csv(std::string_view text) {
  std::vector<csv::Row> rows;
  try {
    rows = csv::parse(text);
  } catch (const std::runtime_error &e) {
    throw MilestoneError(e.what(), 0);
  }
  std::vector<MilestoneEntry> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto &r = rows[i];
    if (i == 0 && !r.cells.empty() && trim(r.cells[0]) == "year") continue;
    if (r.cells.size() < 2 || r.cells.size() > 3)
      throw MilestoneError("expected 3 columns (year, description, article_keys), found " +
                               std::to_string(r.cells.size()),
                           r.line);
    auto y = parse_int(r.cells[0]);
    if (!y) throw MilestoneError("year '" + r.cells[0] + "' is not an integer", r.line);
    check_year(*y, r.line);
    MilestoneEntry e;
    e.year = *y;
    e.description = std::string(trim(r.cells[1]));
    if (r.cells.size() == 3) e.articles = parse_key_list(r.cells[2], r.line);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<MilestoneEntry> parse_milestones_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw MilestoneError(std::string("invalid JSON: ") + e.what(), 0);
  }
  if (doc.is_object() && doc.contains("milestones")) doc = doc["milestones"];
  if (!doc.is_array()) throw MilestoneError("expected a JSON array of milestone entries", 0);
  std::vector<MilestoneEntry> out;
  std::size_t row = 0;
  for (const auto &item : doc) {
    ++row;
    if (!item.is_object() || !item.contains("year") || !item["year"].is_number_integer())
      throw MilestoneError("entry needs an integer 'year'", row);
    MilestoneEntry e;
    e.year = item["year"].get<int>();
    check_year(e.year, row);
    e.description = item.value("description", "");
    if (item.contains("articles")) {
      if (!item["articles"].is_array()) throw MilestoneError("'articles' must be an array", row);
      for (const auto &a : item["articles"]) {
        try {
          if (a.is_string()) {
            e.articles.push_back(parse_article_key(a.get<std::string>()));
          } else if (a.is_object()) {
            std::string key = a.value("author", "") + "|" + std::to_string(a.value("year", 0)) + "|" +
                              a.value("source", "");
            if (a.contains("doi") && a["doi"].is_string()) key += "|" + a["doi"].get<std::string>();
            e.articles.push_back(parse_article_key(key));
          } else {
            throw std::invalid_argument("article must be a key string or object");
          }
        } catch (const std::invalid_argument &ex) {
          throw MilestoneError(ex.what(), row);
        }
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<MilestoneEntry> load_milestones(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MilestoneError("cannot open milestone file: " + path, 0);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return parse_milestones_json(text);
  return parse_milestones_csv(text);
}

std::vector<int> distinct_milestone_years(const std::vector<MilestoneEntry> &milestones) {
  std::set<int> ys;
  for (const auto &m : milestones) ys.insert(m.year);
  return {ys.begin(), ys.end()};
}

std::size_t article_key_count(const std::vector<MilestoneEntry> &milestones) {
  std::size_t n = 0;
  for (const auto &m : milestones) n += m.articles.size();
  return n;
}

std::size_t article_slot_count(const std::vector<MilestoneEntry> &milestones) {
  std::size_t n = 0;
  for (const auto &m : milestones) n += std::max<std::size_t>(1, m.articles.size());
  return n;
}

YearEvaluation evaluate_years(const std::vector<int> &candidates, const std::vector<MilestoneEntry> &milestones,
                              std::optional<std::pair<int, int>> span) {
  auto years = distinct_milestone_years(milestones);
  YearEvaluation ev;
  ev.milestone_years = years.size();
  if (span) {
    if (span->first > span->second) throw std::invalid_argument("evaluate_years: span bounds out of order");
    if (!years.empty() && (years.front() < span->first || years.back() > span->second))
      throw std::invalid_argument("evaluate_years: span does not cover every milestone year");
    ev.span = *span;
  } else if (!years.empty()) {
    ev.span = {years.front(), years.back()};
  }
  std::set<int> ms(years.begin(), years.end());
  std::size_t hits = 0;
  for (int c : candidates) {
    bool hit = ms.contains(c);
    hits += hit;
    ev.hits.push_back({c, hit});
  }
  if (!candidates.empty()) ev.hit_rate = static_cast<double>(hits) / static_cast<double>(candidates.size());
  if (!years.empty())
    ev.chance_baseline = static_cast<double>(years.size()) / static_cast<double>(ev.span.second - ev.span.first + 1);
  return ev;
}

std::string_view to_string(ArticleStatus s) {
  switch (s) {
    case ArticleStatus::Captured: return "captured";
    case ArticleStatus::NoPeak: return "no_peak";
    case ArticleStatus::NotInTopN: return "not_in_top_n";
    case ArticleStatus::Absent: return "absent";
    case ArticleStatus::Undocumented: return "undocumented";
  }
  return "absent";
}

namespace {

struct SearchIndex {
  const SearchArtifacts *search;
  std::set<int> peaks;
};

SearchOutcome evaluate_one(const SearchIndex &idx, int milestone_year, const ArticleKey &key,
                           const ArticleMatchOptions &opts) {
  const auto &s = *idx.search;
  SearchOutcome out;
  out.label = s.label;
  out.peak_present = idx.peaks.contains(milestone_year);

  RawCitedRef probe = key.as_cited_ref();
  std::vector<std::size_t> matches;
  for (const auto &c : s.clusters) {
    if (c.ref_year != key.year) continue;
    double best = 0.0;
    for (const auto &m : c.members) {
      best = std::max(best, similarity(probe, m, opts.match));
      if (best >= opts.threshold) break;
    }
    if (best >= opts.threshold) matches.push_back(c.cluster_id);
  }
  out.matching_clusters = matches.size();
  out.ambiguous = matches.size() > 1;
  if (matches.empty()) {
    out.status = ArticleStatus::Absent;
    return out;
  }

  auto top = top_references(s.clusters, key.year, opts.top_n);
  std::size_t listed = 0;
  for (std::size_t id : matches) {
    for (const auto &e : top.entries) {
      if (e.cluster->cluster_id != id) continue;
      ++listed;
      out.rank = out.rank ? std::min(*out.rank, e.rank) : e.rank;
    }
  }
  bool in_top = listed == matches.size();
  if (!out.peak_present) out.status = ArticleStatus::NoPeak;
  else if (in_top) out.status = ArticleStatus::Captured;
  else out.status = ArticleStatus::NotInTopN;
  return out;
}

}  // namespace

ValidationReport evaluate_articles(const std::vector<SearchArtifacts> &searches,
                                   const std::vector<MilestoneEntry> &milestones, const ArticleMatchOptions &opts) {
  ValidationReport rep;
  std::vector<SearchIndex> index;
  for (const auto &s : searches) {
    rep.search_labels.push_back(s.label);
    auto p = detect_peaks(s.spectrum);
    index.push_back({&s, {p.begin(), p.end()}});
  }

  for (std::size_t ei = 0; ei < milestones.size(); ++ei) {
    const auto &m = milestones[ei];
    if (m.articles.empty()) {
      ArticleResult r{ei, m.year, m.description, std::nullopt, {}, false};
      for (const auto &idx : index) {
        SearchOutcome o;
        o.label = idx.search->label;
        o.peak_present = idx.peaks.contains(m.year);
        o.status = ArticleStatus::Undocumented;
        r.searches.push_back(std::move(o));
      }
      rep.articles.push_back(std::move(r));
      continue;
    }
    for (const auto &key : m.articles) {
      ArticleResult r{ei, m.year, m.description, key, {}, false};
      for (const auto &idx : index) {
        r.searches.push_back(evaluate_one(idx, m.year, key, opts));
        r.captured = r.captured || r.searches.back().status == ArticleStatus::Captured;
      }
      rep.articles.push_back(std::move(r));
    }
  }
  rep.article_slots = rep.articles.size();
  rep.captured = static_cast<std::size_t>(
      std::count_if(rep.articles.begin(), rep.articles.end(), [](const ArticleResult &a) { return a.captured; }));
  if (rep.article_slots)
    rep.article_capture_rate = static_cast<double>(rep.captured) / static_cast<double>(rep.article_slots);
  return rep;
}

std::string format_validation_table(const ValidationReport &report) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Milestone", "Milestone Article", "Peak"};
  for (const auto &l : report.search_labels) header.push_back(l);
  header.push_back("Captured");
  rows.push_back(header);
  for (const auto &a : report.articles) {
    std::vector<std::string> row;
    row.push_back(std::to_string(a.milestone_year) + ": " + a.description);
    row.push_back(a.key ? a.key->to_string() : "No Document Referenced");
    bool any_peak = std::any_of(a.searches.begin(), a.searches.end(), [](const SearchOutcome &o) { return o.peak_present; });
    row.push_back(any_peak ? "Yes" : "No");
    for (const auto &o : a.searches) {
      if (o.peak_present && o.rank) row.push_back(std::to_string(*o.rank));
      else row.push_back("");
    }
    row.push_back(a.captured ? "yes" : "no");
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto &r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  std::ostringstream os;
  for (const auto &r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << r[i];
      if (i + 1 < r.size()) os << std::string(width[i] - r[i].size() + 2, ' ');
    }
    os << '\n';
  }
  os << "captured " << report.captured << " of " << report.article_slots << " milestone articles";
  if (report.article_capture_rate) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " (%.1f%%)", 100.0 * *report.article_capture_rate);
    os << buf;
  }
  os << '\n';
  if (report.years) {
    const auto &y = *report.years;
    os << "milestone years " << y.milestone_years << " over span " << y.span.first << "-" << y.span.second;
    char buf[64];
    std::snprintf(buf, sizeof buf, ", chance baseline %.4f", y.chance_baseline);
    os << buf;
    if (y.hit_rate) {
      std::snprintf(buf, sizeof buf, ", candidate hit rate %.2f", *y.hit_rate);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace rpys
