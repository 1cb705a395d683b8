#include "rpyskit/multi_rpys.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "rpyskit/parallel.hpp"

namespace rpys {

void SegmentSpec::validate() const {
  if (min_segment_records < 1) throw std::invalid_argument("min_segment_records must be at least 1");
  if (citing_year_range && citing_year_range->first > citing_year_range->second)
    throw std::invalid_argument("citing_year_range bounds are out of order");
}

std::vector<Segment> segment_by_citing_year(const Corpus &corpus, const SegmentSpec &spec) {
  spec.validate();
  std::map<int, std::vector<std::size_t>> by_year;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    const auto &y = corpus.records[i].pub_year;
    if (!y) continue;
    if (spec.citing_year_range && (*y < spec.citing_year_range->first || *y > spec.citing_year_range->second))
      continue;
    by_year[*y].push_back(i);
  }
  std::vector<Segment> out;
  for (auto &[year, idx] : by_year)
    if (idx.size() >= spec.min_segment_records) out.push_back({year, std::move(idx)});
  return out;
}

std::vector<std::optional<double>> rank_transform(const std::vector<std::optional<double>> &values) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] && std::isfinite(*values[i])) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return *values[a] < *values[b]; });

  std::vector<std::optional<double>> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && *values[order[j + 1]] == *values[order[i]]) ++j;
    // positions i..j (0-based) share rank mean(i+1 .. j+1)
    double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

std::map<int, double> rank_transform(const std::map<int, double> &values) {
  std::vector<int> keys;
  std::vector<std::optional<double>> vals;
  for (const auto &[k, v] : values) {
    keys.push_back(k);
    vals.emplace_back(v);
  }
  auto ranks = rank_transform(vals);
  std::map<int, double> out;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (ranks[i]) out[keys[i]] = *ranks[i];
  return out;
}

std::vector<SegmentSpectrum> segment_spectra(const Corpus &corpus, const std::vector<RefCluster> &clusters,
                                             const SegmentSpec &spec, unsigned threads) {
  auto segments = segment_by_citing_year(corpus, spec);
  std::unordered_map<std::string_view, std::size_t> segment_of;
  for (std::size_t s = 0; s < segments.size(); ++s)
    for (std::size_t r : segments[s].record_indices) segment_of.emplace(corpus.records[r].record_id, s);

  std::vector<std::map<int, std::int64_t>> counts(segments.size());
  for (const auto &c : clusters) {
    if (!c.ref_year) continue;
    for (const auto &m : c.members) {
      auto it = segment_of.find(m.parent_record_id);
      if (it != segment_of.end()) ++counts[it->second][*c.ref_year];
    }
  }

  std::vector<SegmentSpectrum> out(segments.size());
  parallel_for(segments.size(), threads, [&](std::size_t s) {
    out[s] = {segments[s].citing_year, segments[s].record_indices.size(), spectrum_from_counts(counts[s])};
  });
  return out;
}

MultiRpysMatrix matrix_from_segment_spectra(const std::vector<SegmentSpectrum> &segments) {
  MultiRpysMatrix m;
  std::vector<const SegmentSpectrum *> sorted;
  for (const auto &s : segments) sorted.push_back(&s);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SegmentSpectrum *a, const SegmentSpectrum *b) { return a->citing_year < b->citing_year; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i]->citing_year == sorted[i - 1]->citing_year)
      throw std::invalid_argument("duplicate citing year " + std::to_string(sorted[i]->citing_year));

  std::optional<int> lo, hi;
  for (const auto *s : sorted) {
    if (s->spectrum.empty()) continue;
    lo = lo ? std::min(*lo, s->spectrum.first_year) : s->spectrum.first_year;
    hi = hi ? std::max(*hi, s->spectrum.last_year()) : s->spectrum.last_year();
  }
  if (lo) {
    m.cited_years.resize(static_cast<std::size_t>(*hi - *lo + 1));
    std::iota(m.cited_years.begin(), m.cited_years.end(), *lo);
  }
  for (const auto *s : sorted) {
    m.citing_years.push_back(s->citing_year);
    m.segment_sizes.push_back(s->records);
    std::vector<std::optional<double>> devs(m.cited_years.size());
    const auto &sp = s->spectrum;
    for (std::size_t i = 0; i < sp.size(); ++i) devs[static_cast<std::size_t>(sp.year_at(i) - *lo)] = sp.deviation[i];
    m.rank.push_back(rank_transform(devs));
  }
  return m;
}

MultiRpysMatrix build_matrix(const Corpus &corpus, const std::vector<RefCluster> &clusters, const SegmentSpec &spec,
                             unsigned threads) {
  return matrix_from_segment_spectra(segment_spectra(corpus, clusters, spec, threads));
}

}  // namespace rpys
