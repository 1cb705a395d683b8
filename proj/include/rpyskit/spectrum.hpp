#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rpyskit/disambiguation.hpp"

namespace rpys {

/// Per-reference-year citation counts over a dense year axis, with the
/// five-year median baseline and the deviation from it.
///
/// Windows are clipped to the axis, so the first and last two years take the
/// median of three or four values; an even-sized window uses the mean of the
/// two central values.
struct Spectrum {
  int first_year = 0;
  std::vector<std::int64_t> count;
  std::vector<double> median5;
  std::vector<double> deviation;

  bool empty() const { return count.empty(); }
  std::size_t size() const { return count.size(); }
  int last_year() const { return first_year + static_cast<int>(count.size()) - 1; }
  int year_at(std::size_t i) const { return first_year + static_cast<int>(i); }
  bool contains(int year) const { return !empty() && year >= first_year && year <= last_year(); }
  std::size_t index_of(int year) const { return static_cast<std::size_t>(year - first_year); }
  std::vector<int> years() const;
  std::int64_t total() const;
};

/// Builds a spectrum from year -> count pairs (gaps zero-filled).
Spectrum spectrum_from_counts(const std::map<int, std::int64_t> &counts);

/// Sums cluster counts per ref_year; unknown-year clusters are skipped.
Spectrum build_spectrum(const std::vector<RefCluster> &clusters);

/// Median of at most five values, mean of the central pair when even.
double window_median(std::vector<std::int64_t> values);

/// Years whose deviation is positive and strictly above each existing neighbour.
std::vector<int> detect_peaks(const Spectrum &s);

struct RankedEntry {
  const RefCluster *cluster = nullptr;
  std::size_t count = 0;
  std::size_t rank = 0;  // 1-based; ties share the smallest position
};

struct RankedRefList {
  int year = 0;
  std::vector<RankedEntry> entries;
};

/// The n most cited clusters of a year, by count then representative.original.
RankedRefList top_references(const std::vector<RefCluster> &clusters, int year, std::size_t n = 10);

}  // namespace rpys
