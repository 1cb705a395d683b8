#include "rpyskit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "rpyskit/csv.hpp"

namespace rpys::io {

namespace {

constexpr const char *kCorpusSchema = "rpyskit.corpus/1";
constexpr const char *kClustersSchema = "rpyskit.clusters/1";
constexpr const char *kMatrixSchema = "rpyskit.matrix/1";

json opt_int(const std::optional<int> &v) { return v ? json(*v) : json(nullptr); }
json opt_str(const std::optional<std::string> &v) { return v ? json(*v) : json(nullptr); }

template <class T>
T require(const json &j, const char *key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception &e) {
    throw SchemaError(std::string("field '") + key + "': " + e.what());
  }
}

std::optional<int> opt_int_field(const json &j, const char *key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return require<int>(j, key);
}

void check_schema(const json &j, const char *expected) {
  if (!j.is_object()) throw SchemaError("expected a JSON object");
  auto it = j.find("schema");
  if (it == j.end() || !it->is_string() || it->get<std::string>() != expected)
    throw SchemaError(std::string("expected schema '") + expected + "'");
}

RawCitedRef ref_from_json(const json &j) {
  auto original = require<std::string>(j, "original");
  std::string parent = j.contains("parent_record_id") ? require<std::string>(j, "parent_record_id") : std::string{};
  return parse_cited_ref(original, parent);
}

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 9e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
    return buf;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string &path, const std::string &content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path);
  }
  std::filesystem::rename(tmp, p);
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

json ref_to_json(const RawCitedRef &r) {
  json j;
  j["original"] = r.original;
  j["first_author"] = r.first_author;
  j["ref_year"] = opt_int(r.ref_year);
  j["source"] = r.source;
  j["volume"] = opt_str(r.volume);
  j["first_page"] = opt_str(r.first_page);
  j["doi"] = opt_str(r.doi);
  return j;
}

json corpus_to_json(const Corpus &c) {
  json j;
  j["schema"] = kCorpusSchema;
  json prov = json::array();
  for (const auto &p : c.provenance)
    prov.push_back({{"path", p.path}, {"format", std::string(to_string(p.format))}, {"record_count", p.record_count}});
  j["provenance"] = std::move(prov);
  json recs = json::array();
  for (const auto &r : c.records) {
    json jr;
    jr["record_id"] = r.record_id;
    jr["pub_year"] = opt_int(r.pub_year);
    jr["title"] = r.title;
    jr["source"] = r.source;
    json refs = json::array();
    for (const auto &cr : r.cited_refs) refs.push_back(ref_to_json(parse_cited_ref(cr, r.record_id)));
    jr["cited_refs"] = std::move(refs);
    recs.push_back(std::move(jr));
  }
  j["records"] = std::move(recs);
  return j;
}

Corpus corpus_from_json(const json &j) {
  check_schema(j, kCorpusSchema);
  Corpus c;
  for (const auto &p : require<json>(j, "provenance")) {
    c.provenance.push_back({require<std::string>(p, "path"),
                            export_format_from_string(require<std::string>(p, "format")),
                            require<std::size_t>(p, "record_count")});
  }
  std::set<std::string> ids;
  for (const auto &jr : require<json>(j, "records")) {
    CitingRecord r;
    r.record_id = require<std::string>(jr, "record_id");
    if (r.record_id.empty()) throw SchemaError("record with empty record_id");
    if (!ids.insert(r.record_id).second) throw SchemaError("duplicate record_id " + r.record_id);
    r.pub_year = opt_int_field(jr, "pub_year");
    r.title = require<std::string>(jr, "title");
    r.source = require<std::string>(jr, "source");
    for (const auto &cr : require<json>(jr, "cited_refs")) {
      if (cr.is_string()) r.cited_refs.push_back(cr.get<std::string>());
      else r.cited_refs.push_back(require<std::string>(cr, "original"));
    }
    c.records.push_back(std::move(r));
  }
  return c;
}

json clusters_to_json(const std::vector<RefCluster> &clusters) {
  json j;
  j["schema"] = kClustersSchema;
  json arr = json::array();
  for (const auto &c : clusters) {
    json jc;
    jc["cluster_id"] = c.cluster_id;
    jc["ref_year"] = opt_int(c.ref_year);
    jc["count"] = c.count();
    jc["representative"] = ref_to_json(c.representative);
    json members = json::array();
    for (const auto &m : c.members) members.push_back({{"original", m.original}, {"parent_record_id", m.parent_record_id}});
    jc["members"] = std::move(members);
    arr.push_back(std::move(jc));
  }
  j["clusters"] = std::move(arr);
  return j;
}

std::vector<RefCluster> clusters_from_json(const json &j) {
  check_schema(j, kClustersSchema);
  std::vector<RefCluster> out;
  for (const auto &jc : require<json>(j, "clusters")) {
    RefCluster c;
    c.cluster_id = require<std::size_t>(jc, "cluster_id");
    c.ref_year = opt_int_field(jc, "ref_year");
    for (const auto &m : require<json>(jc, "members")) c.members.push_back(ref_from_json(m));
    if (c.members.empty()) throw SchemaError("cluster " + std::to_string(c.cluster_id) + " has no members");
    for (const auto &m : c.members)
      if (m.ref_year != c.ref_year)
        throw SchemaError("cluster " + std::to_string(c.cluster_id) + " mixes reference years");
    c.representative = pick_representative(c.members);
    out.push_back(std::move(c));
  }
  return out;
}

std::string clusters_csv(const std::vector<RefCluster> &clusters) {
  std::string out = "cluster_id,ref_year,count,first_author,source,volume,first_page,doi,representative,members\n";
  for (const auto &c : clusters) {
    const auto &r = c.representative;
    std::string members;
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      if (i) members += '|';
      members += c.members[i].original;
    }
    out += csv::join_row({std::to_string(c.cluster_id), c.ref_year ? std::to_string(*c.ref_year) : "",
                          std::to_string(c.count()), r.first_author, r.source, r.volume.value_or(""),
                          r.first_page.value_or(""), r.doi.value_or(""), r.original, members});
    out += '\n';
  }
  return out;
}

std::string spectrum_csv(const Spectrum &s, const std::vector<int> &peaks) {
  std::set<int> pk(peaks.begin(), peaks.end());
  std::string out = "year,count,median5,deviation,is_peak\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    int y = s.year_at(i);
    out += std::to_string(y) + ',' + std::to_string(s.count[i]) + ',' + format_number(s.median5[i]) + ',' +
           format_number(s.deviation[i]) + ',' + (pk.contains(y) ? "1" : "0") + '\n';
  }
  return out;
}

json spectrum_to_json(const Spectrum &s) {
  json j;
  j["first_year"] = s.first_year;
  j["counts"] = s.count;
  return j;
}

Spectrum spectrum_from_json(const json &j) {
  auto counts = require<std::vector<std::int64_t>>(j, "counts");
  if (counts.empty()) return {};
  int first = require<int>(j, "first_year");
  std::map<int, std::int64_t> m;
  for (std::size_t i = 0; i < counts.size(); ++i) m[first + static_cast<int>(i)] = counts[i];
  return spectrum_from_counts(m);
}

json ranked_list_to_json(const RankedRefList &list) {
  json arr = json::array();
  for (const auto &e : list.entries) {
    arr.push_back({{"rank", e.rank},
                   {"count", e.count},
                   {"cluster_id", e.cluster->cluster_id},
                   {"representative", e.cluster->representative.original}});
  }
  return arr;
}

json peaks_to_json(const Spectrum &s, const std::vector<int> &peaks, const std::vector<RefCluster> &clusters,
                   std::size_t top_n) {
  json j;
  j["peaks"] = peaks;
  json tops = json::array();
  for (int y : peaks) {
    std::size_t i = s.index_of(y);
    tops.push_back({{"year", y},
                    {"count", s.count[i]},
                    {"deviation", s.deviation[i]},
                    {"top_references", ranked_list_to_json(top_references(clusters, y, top_n))}});
  }
  j["top_n"] = top_n;
  j["peak_details"] = std::move(tops);
  return j;
}

std::string matrix_long_csv(const MultiRpysMatrix &m) {
  std::string out = "citing_year,cited_year,rank\n";
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m.rank[i][j])
        out += std::to_string(m.citing_years[i]) + ',' + std::to_string(m.cited_years[j]) + ',' +
               format_number(*m.rank[i][j]) + '\n';
  return out;
}

json matrix_to_json(const MultiRpysMatrix &m, const std::vector<SegmentSpectrum> &segments) {
  json j;
  j["schema"] = kMatrixSchema;
  j["citing_years"] = m.citing_years;
  j["cited_years"] = m.cited_years;
  j["segment_sizes"] = m.segment_sizes;
  json rows = json::array();
  for (const auto &row : m.rank) {
    json r = json::array();
    for (const auto &v : row) r.push_back(v ? json(*v) : json(nullptr));
    rows.push_back(std::move(r));
  }
  j["rank"] = std::move(rows);
  json segs = json::array();
  for (const auto &s : segments) {
    json js = spectrum_to_json(s.spectrum);
    js["citing_year"] = s.citing_year;
    js["records"] = s.records;
    segs.push_back(std::move(js));
  }
  j["segments"] = std::move(segs);
  return j;
}

std::vector<SegmentSpectrum> segments_from_json(const json &j) {
  check_schema(j, kMatrixSchema);
  std::vector<SegmentSpectrum> out;
  for (const auto &js : require<json>(j, "segments"))
    out.push_back({require<int>(js, "citing_year"), require<std::size_t>(js, "records"), spectrum_from_json(js)});
  return out;
}

MultiRpysMatrix matrix_from_json(const json &j) {
  check_schema(j, kMatrixSchema);
  if (j.contains("segments") && !j.at("segments").empty()) return matrix_from_segment_spectra(segments_from_json(j));
  MultiRpysMatrix m;
  m.citing_years = require<std::vector<int>>(j, "citing_years");
  m.cited_years = require<std::vector<int>>(j, "cited_years");
  m.segment_sizes = require<std::vector<std::size_t>>(j, "segment_sizes");
  for (const auto &row : require<json>(j, "rank")) {
    std::vector<std::optional<double>> r;
    for (const auto &v : row) r.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
    if (r.size() != m.cited_years.size()) throw SchemaError("matrix row width does not match cited_years");
    m.rank.push_back(std::move(r));
  }
  if (m.rank.size() != m.citing_years.size()) throw SchemaError("matrix row count does not match citing_years");
  return m;
}

json stats_to_json(const EffectsReport &report, const std::vector<int> &selected) {
  json j;
  const auto &a = report.anova;
  j["anova"] = {{"f_stat", a.f_stat},
                {"df_between", a.df_between},
                {"df_within", a.df_within},
                {"p_value", a.p_value},
                {"grand_mean", a.grand_mean},
                {"ss_between", a.ss_between},
                {"ss_within", a.ss_within},
                {"ms_within", a.ms_within},
                {"n_obs", a.n_obs}};
  j["alpha"] = report.alpha;
  j["q_crit"] = report.q_crit;
  json eff = json::array();
  for (const auto &e : report.effects) {
    eff.push_back({{"cited_year", e.cited_year},
                   {"ls_mean", e.ls_mean},
                   {"effect", e.effect},
                   {"n_obs", e.n_obs},
                   {"hsd_half_width", e.hsd_half_width},
                   {"significant", e.significant_vs_grand}});
  }
  j["effects"] = std::move(eff);
  j["selected_years"] = selected;
  return j;
}

std::string stats_table(const EffectsReport &report, const std::vector<int> &selected) {
  std::ostringstream os;
  const auto &a = report.anova;
  os << "One-way ANOVA by cited year: F = " << fixed(a.f_stat, 2) << "; df = " << a.df_between << ", "
     << a.df_within << "; p = ";
  if (a.p_value < 1e-4) os << "< 0.0001";
  else os << fixed(a.p_value, 4);
  os << "\nTukey q(" << fixed(report.alpha, 2) << ", " << report.effects.size() << ", " << a.df_within
     << ") = " << fixed(report.q_crit, 4) << "\n\n";
  os << "rank  year   ls_mean    effect   n  hsd_half  sig\n";
  for (std::size_t i = 0; i < selected.size(); ++i) {
    for (const auto &e : report.effects) {
      if (e.cited_year != selected[i]) continue;
      char buf[128];
      std::snprintf(buf, sizeof buf, "%4zu  %4d  %8.3f  %8.3f  %2zu  %8.3f  %s\n", i + 1, e.cited_year, e.ls_mean,
                    e.effect, e.n_obs, e.hsd_half_width, e.significant_vs_grand ? "*" : "");
      os << buf;
    }
  }
  return os.str();
}

json year_evaluation_to_json(const YearEvaluation &ev) {
  json j;
  json hits = json::array();
  for (const auto &h : ev.hits) hits.push_back({{"year", h.year}, {"hit", h.hit}});
  j["candidates"] = std::move(hits);
  j["hit_rate"] = ev.hit_rate ? json(*ev.hit_rate) : json(nullptr);
  j["milestone_years"] = ev.milestone_years;
  j["span"] = {ev.span.first, ev.span.second};
  j["span_years"] = ev.span.second - ev.span.first + 1;
  j["chance_baseline"] = ev.chance_baseline;
  return j;
}

json validation_to_json(const ValidationReport &report) {
  json j;
  j["searches"] = report.search_labels;
  json arts = json::array();
  for (const auto &a : report.articles) {
    json ja;
    ja["milestone_year"] = a.milestone_year;
    ja["description"] = a.description;
    ja["article"] = a.key ? json(a.key->to_string()) : json(nullptr);
    json per = json::array();
    for (const auto &o : a.searches) {
      per.push_back({{"search", o.label},
                     {"peak_present", o.peak_present},
                     {"rank", o.rank ? json(*o.rank) : json(nullptr)},
                     {"matching_clusters", o.matching_clusters},
                     {"ambiguous", o.ambiguous},
                     {"status", std::string(to_string(o.status))}});
    }
    ja["searches"] = std::move(per);
    ja["captured"] = a.captured;
    arts.push_back(std::move(ja));
  }
  j["articles"] = std::move(arts);
  j["article_slots"] = report.article_slots;
  j["captured"] = report.captured;
  j["capture_rate"] = report.article_capture_rate ? json(*report.article_capture_rate) : json(nullptr);
  if (report.years) j["years"] = year_evaluation_to_json(*report.years);
  return j;
}

}  // namespace rpys::io
