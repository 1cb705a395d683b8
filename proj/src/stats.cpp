#include "rpyskit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rpyskit/distributions.hpp"

namespace rpys {

namespace {

double mean_of(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Effects without the significance pass.
std::vector<YearEffect> raw_effects(const CitedYearGroups &g, double grand_mean) {
  std::vector<YearEffect> out;
  out.reserve(g.years.size());
  for (std::size_t i = 0; i < g.years.size(); ++i) {
    double ls = mean_of(g.values[i]);
    out.push_back({g.years[i], ls, ls - grand_mean, g.values[i].size(), 0.0, false});
  }
  std::stable_sort(out.begin(), out.end(), [](const YearEffect &a, const YearEffect &b) {
    if (a.effect != b.effect) return a.effect > b.effect;
    return a.cited_year < b.cited_year;
  });
  return out;
}

}  // namespace

AnovaResult one_way_anova(const std::vector<std::vector<double>> &groups) {
  std::size_t k = 0, n = 0;
  double total = 0.0;
  for (const auto &g : groups) {
    if (g.empty()) continue;
    ++k;
    n += g.size();
    for (double x : g) total += x;
  }
  if (k < 2) throw StatsError("ANOVA needs at least two groups with observations");
  if (n <= k) throw StatsError("ANOVA needs at least one group with two or more observations");

  AnovaResult r;
  r.n_obs = n;
  r.grand_mean = total / static_cast<double>(n);
  r.df_between = static_cast<int>(k - 1);
  r.df_within = static_cast<int>(n - k);
  for (const auto &g : groups) {
    if (g.empty()) continue;
    double m = mean_of(g);
    double d = m - r.grand_mean;
    r.ss_between += static_cast<double>(g.size()) * d * d;
    for (double x : g) r.ss_within += (x - m) * (x - m);
  }
  r.ms_within = r.ss_within / r.df_within;
  double ms_between = r.ss_between / r.df_between;
  if (r.ss_within == 0.0) {
    if (r.ss_between == 0.0) {
      r.f_stat = 0.0;
      r.p_value = 1.0;
    } else {
      r.f_stat = std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    }
    return r;
  }
  r.f_stat = ms_between / r.ms_within;
  r.p_value = dist::f_sf(r.f_stat, r.df_between, r.df_within);
  return r;
}

CitedYearGroups groups_by_cited_year(const MultiRpysMatrix &m) {
  CitedYearGroups g;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::vector<double> col;
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (m.rank[i][j]) col.push_back(*m.rank[i][j]);
    if (col.empty()) continue;
    g.years.push_back(m.cited_years[j]);
    g.values.push_back(std::move(col));
  }
  return g;
}

AnovaResult anova_by_cited_year(const MultiRpysMatrix &m) { return one_way_anova(groups_by_cited_year(m).values); }

EffectsReport year_effects(const MultiRpysMatrix &m, double alpha) {
  auto groups = groups_by_cited_year(m);
  EffectsReport rep;
  rep.anova = one_way_anova(groups.values);
  rep.alpha = alpha;
  rep.effects = raw_effects(groups, rep.anova.grand_mean);
  rep.q_crit = dist::studentized_range_quantile(alpha, static_cast<int>(groups.years.size()), rep.anova.df_within);
  for (auto &e : rep.effects) {
    e.hsd_half_width = rep.q_crit * std::sqrt(rep.anova.ms_within / static_cast<double>(e.n_obs)) / std::sqrt(2.0);
    e.significant_vs_grand = std::fabs(e.effect) > e.hsd_half_width;
  }
  return rep;
}

std::vector<int> top_milestone_years(const MultiRpysMatrix &m, std::size_t k) {
  auto groups = groups_by_cited_year(m);
  auto anova = one_way_anova(groups.values);
  auto effects = raw_effects(groups, anova.grand_mean);
  std::vector<int> out;
  for (std::size_t i = 0; i < std::min(k, effects.size()); ++i) out.push_back(effects[i].cited_year);
  return out;
}

}  // namespace rpys
