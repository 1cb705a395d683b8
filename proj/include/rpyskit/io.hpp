#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rpyskit/corpus.hpp"
#include "rpyskit/disambiguation.hpp"
#include "rpyskit/multi_rpys.hpp"
#include "rpyskit/spectrum.hpp"
#include "rpyskit/stats.hpp"
#include "rpyskit/validation.hpp"

namespace rpys::io {

using json = nlohmann::ordered_json;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path);
/// Writes through a temporary file and renames it into place.
void write_file(const std::string &path, const std::string &content);
std::string dump(const json &j);

// Corpus: {"schema": "rpyskit.corpus/1", "provenance": [...], "records": [...]}.
// Cited refs are stored parsed, with the verbatim string under "original";
// only "original" is read back.
json ref_to_json(const RawCitedRef &r);
json corpus_to_json(const Corpus &c);
Corpus corpus_from_json(const json &j);

json clusters_to_json(const std::vector<RefCluster> &clusters);
std::vector<RefCluster> clusters_from_json(const json &j);
/// cluster_id, ref_year, count, first_author, source, volume, first_page, doi,
/// representative, members (originals joined by '|').
std::string clusters_csv(const std::vector<RefCluster> &clusters);

/// year, count, median5, deviation, is_peak
std::string spectrum_csv(const Spectrum &s, const std::vector<int> &peaks);
json spectrum_to_json(const Spectrum &s);
Spectrum spectrum_from_json(const json &j);

json peaks_to_json(const Spectrum &s, const std::vector<int> &peaks, const std::vector<RefCluster> &clusters,
                   std::size_t top_n);
json ranked_list_to_json(const RankedRefList &list);

/// citing_year, cited_year, rank for every non-missing cell.
std::string matrix_long_csv(const MultiRpysMatrix &m);
/// Dense ranks plus the per-segment counts that rebuild them.
json matrix_to_json(const MultiRpysMatrix &m, const std::vector<SegmentSpectrum> &segments);
std::vector<SegmentSpectrum> segments_from_json(const json &j);
MultiRpysMatrix matrix_from_json(const json &j);

json stats_to_json(const EffectsReport &report, const std::vector<int> &selected);
std::string stats_table(const EffectsReport &report, const std::vector<int> &selected);

json year_evaluation_to_json(const YearEvaluation &ev);
json validation_to_json(const ValidationReport &report);

/// Shortest decimal text for a half-integer-valued double ("12", "12.5").
std::string format_number(double v);

}  // namespace rpys::io
