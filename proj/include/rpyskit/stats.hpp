#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rpyskit/multi_rpys.hpp"

namespace rpys {

class StatsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AnovaResult {
  double f_stat = 0.0;
  int df_between = 0;
  int df_within = 0;
  double p_value = 1.0;
  double grand_mean = 0.0;
  double ss_between = 0.0;
  double ss_within = 0.0;
  double ms_within = 0.0;
  std::size_t n_obs = 0;
};

/// Classic one-way ANOVA. Needs at least two non-empty groups and more
/// observations than groups. All-identical data gives F = 0, p = 1.
AnovaResult one_way_anova(const std::vector<std::vector<double>> &groups);

/// Non-missing matrix cells grouped by cited year (columns with no
/// observation are dropped).
struct CitedYearGroups {
  std::vector<int> years;
  std::vector<std::vector<double>> values;
};

CitedYearGroups groups_by_cited_year(const MultiRpysMatrix &m);

AnovaResult anova_by_cited_year(const MultiRpysMatrix &m);

struct YearEffect {
  int cited_year = 0;
  double ls_mean = 0.0;
  double effect = 0.0;  // ls_mean - grand_mean
  std::size_t n_obs = 0;
  double hsd_half_width = 0.0;
  bool significant_vs_grand = false;
};

struct EffectsReport {
  AnovaResult anova;
  double alpha = 0.05;
  double q_crit = 0.0;  // studentized range quantile q(alpha, groups, df_within)
  std::vector<YearEffect> effects;  // by effect descending, ties to the earlier year
};

/// Per-year least-squares means and Tukey-Kramer significance against the
/// grand mean: |effect| > q * sqrt(MS_within / n_obs) / sqrt(2).
EffectsReport year_effects(const MultiRpysMatrix &m, double alpha = 0.05);

/// The k years with the largest effect, descending; ties to the earlier year.
std::vector<int> top_milestone_years(const MultiRpysMatrix &m, std::size_t k = 10);

}  // namespace rpys
