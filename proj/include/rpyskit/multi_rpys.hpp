#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "rpyskit/corpus.hpp"
#include "rpyskit/spectrum.hpp"

namespace rpys {

struct SegmentSpec {
  std::size_t min_segment_records = 1;
  std::optional<std::pair<int, int>> citing_year_range;  // inclusive

  void validate() const;
};

struct Segment {
  int citing_year = 0;
  std::vector<std::size_t> record_indices;  // into Corpus::records, ascending
};

/// One segment per citing year that has at least min_segment_records records.
/// Records without a publication year are skipped.
std::vector<Segment> segment_by_citing_year(const Corpus &corpus, const SegmentSpec &spec = {});

/// Ascending average ranks: the largest value gets the largest rank, ties
/// share the mean of the positions they span. Empty or non-finite entries stay
/// empty.
std::vector<std::optional<double>> rank_transform(const std::vector<std::optional<double>> &values);
std::map<int, double> rank_transform(const std::map<int, double> &values);

struct SegmentSpectrum {
  int citing_year = 0;
  std::size_t records = 0;
  Spectrum spectrum;
};

/// Citing-year x cited-year grid of per-row ranked deviations. A cell is
/// empty when the cited year lies outside the span that row's segment cites.
struct MultiRpysMatrix {
  std::vector<int> citing_years;
  std::vector<int> cited_years;
  std::vector<std::vector<std::optional<double>>> rank;
  std::vector<std::size_t> segment_sizes;

  std::size_t rows() const { return citing_years.size(); }
  std::size_t cols() const { return cited_years.size(); }
  bool empty() const { return citing_years.empty() || cited_years.empty(); }
};

/// Per-segment spectra built from the clusters' members that each segment's
/// records cite.
std::vector<SegmentSpectrum> segment_spectra(const Corpus &corpus, const std::vector<RefCluster> &clusters,
                                             const SegmentSpec &spec = {}, unsigned threads = 0);

/// Assembles the matrix; the column axis spans every segment spectrum densely.
MultiRpysMatrix matrix_from_segment_spectra(const std::vector<SegmentSpectrum> &segments);

MultiRpysMatrix build_matrix(const Corpus &corpus, const std::vector<RefCluster> &clusters,
                             const SegmentSpec &spec = {}, unsigned threads = 0);

}  // namespace rpys
