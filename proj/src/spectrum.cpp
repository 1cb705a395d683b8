#include "rpyskit/spectrum.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rpys {

std::vector<int> Spectrum::years() const {
  std::vector<int> ys(count.size());
  std::iota(ys.begin(), ys.end(), first_year);
  return ys;
}

std::int64_t Spectrum::total() const { return std::accumulate(count.begin(), count.end(), std::int64_t{0}); }

double window_median(std::vector<std::int64_t> values) {
  if (values.empty()) throw std::invalid_argument("window_median: empty window");
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n % 2 == 1) return static_cast<double>(values[n / 2]);
  return (static_cast<double>(values[n / 2 - 1]) + static_cast<double>(values[n / 2])) / 2.0;
}

Spectrum spectrum_from_counts(const std::map<int, std::int64_t> &counts) {
  Spectrum s;
  if (counts.empty()) return s;
  s.first_year = counts.begin()->first;
  int last = counts.rbegin()->first;
  std::size_t n = static_cast<std::size_t>(last - s.first_year + 1);
  s.count.assign(n, 0);
  for (const auto &[y, c] : counts) {
    if (c < 0) throw std::invalid_argument("spectrum counts must be non-negative");
    s.count[s.index_of(y)] = c;
  }
  s.median5.resize(n);
  s.deviation.resize(n);
  std::vector<std::int64_t> window;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i >= 2 ? i - 2 : 0;
    std::size_t hi = std::min(n - 1, i + 2);
    window.assign(s.count.begin() + static_cast<std::ptrdiff_t>(lo), s.count.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    s.median5[i] = window_median(window);
    s.deviation[i] = static_cast<double>(s.count[i]) - s.median5[i];
  }
  return s;
}

Spectrum build_spectrum(const std::vector<RefCluster> &clusters) {
  std::map<int, std::int64_t> counts;
  for (const auto &c : clusters)
    if (c.ref_year) counts[*c.ref_year] += static_cast<std::int64_t>(c.count());
  return spectrum_from_counts(counts);
}

std::vector<int> detect_peaks(const Spectrum &s) {
  std::vector<int> peaks;
  const auto &d = s.deviation;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0)) continue;
    if (i > 0 && !(d[i] > d[i - 1])) continue;
    if (i + 1 < d.size() && !(d[i] > d[i + 1])) continue;
    peaks.push_back(s.year_at(i));
  }
  return peaks;
}

RankedRefList top_references(const std::vector<RefCluster> &clusters, int year, std::size_t n) {
  if (n == 0) throw std::invalid_argument("top_references: n must be at least 1");
  RankedRefList out;
  out.year = year;
  std::vector<const RefCluster *> in_year;
  for (const auto &c : clusters)
    if (c.ref_year == year) in_year.push_back(&c);
  std::sort(in_year.begin(), in_year.end(), [](const RefCluster *a, const RefCluster *b) {
    if (a->count() != b->count()) return a->count() > b->count();
    if (a->representative.original != b->representative.original)
      return a->representative.original < b->representative.original;
    return a->cluster_id < b->cluster_id;
  });
  std::size_t take = std::min(n, in_year.size());
  for (std::size_t i = 0; i < take; ++i) {
    std::size_t rank = i + 1;
    if (i > 0 && in_year[i]->count() == out.entries.back().count) rank = out.entries.back().rank;
    out.entries.push_back({in_year[i], in_year[i]->count(), rank});
  }
  return out;
}

}  // namespace rpys
