#pragma once

// Deliberately naive reference implementations. They share no code with the
// library and trade speed for obviousness.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace rpys::oracle {

/// Twice the windowed median, so even windows stay in integers.
inline std::vector<std::int64_t> doubled_medians(const std::vector<std::int64_t> &counts) {
  const long n = static_cast<long>(counts.size());
  std::vector<std::int64_t> out;
  for (long i = 0; i < n; ++i) {
    std::vector<std::int64_t> w;
    for (long j = i - 2; j <= i + 2; ++j)
      if (j >= 0 && j < n) w.push_back(counts[static_cast<std::size_t>(j)]);
    std::sort(w.begin(), w.end());
    std::size_t m = w.size();
    out.push_back(m % 2 ? 2 * w[m / 2] : w[m / 2 - 1] + w[m / 2]);
  }
  return out;
}

/// Twice the deviation, exact in integers.
inline std::vector<std::int64_t> doubled_deviations(const std::vector<std::int64_t> &counts) {
  auto med = doubled_medians(counts);
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < counts.size(); ++i) out.push_back(2 * counts[i] - med[i]);
  return out;
}

/// {i : d[i] > 0 and d[i] > each existing neighbour}.
inline std::vector<std::size_t> naive_peaks(const std::vector<std::int64_t> &d) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    bool left = i == 0 || d[i] > d[i - 1];
    bool right = i + 1 == d.size() || d[i] > d[i + 1];
    if (d[i] > 0 && left && right) out.push_back(i);
  }
  return out;
}

/// Average ranks by counting: rank = (#less) + (#equal + 1) / 2.
inline std::vector<double> counting_ranks(const std::vector<double> &v) {
  std::vector<double> out;
  for (double x : v) {
    double less = 0, equal = 0;
    for (double y : v) {
      if (y < x) ++less;
      if (y == x) ++equal;
    }
    out.push_back(less + (equal + 1) / 2.0);
  }
  return out;
}

struct Anova {
  double f = 0;
  int df_between = 0;
  int df_within = 0;
};

/// Textbook sums of squares over the non-empty groups.
inline Anova direct_anova(const std::vector<std::vector<double>> &groups) {
  double total = 0;
  std::size_t n = 0, k = 0;
  for (const auto &g : groups) {
    if (g.empty()) continue;
    ++k;
    for (double x : g) total += x, ++n;
  }
  double grand = total / static_cast<double>(n);
  double ssb = 0, ssw = 0;
  for (const auto &g : groups) {
    if (g.empty()) continue;
    double s = 0;
    for (double x : g) s += x;
    double mean = s / static_cast<double>(g.size());
    ssb += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
    for (double x : g) ssw += (x - mean) * (x - mean);
  }
  Anova a;
  a.df_between = static_cast<int>(k) - 1;
  a.df_within = static_cast<int>(n - k);
  a.f = (ssb / a.df_between) / (ssw / a.df_within);
  return a;
}

}  // namespace rpys::oracle
