#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rpyskit/distributions.hpp"
#include "rpyskit/stats.hpp"

using namespace rpys;

TEST_CASE("anova: hand-computed example") {
  auto a = one_way_anova({{1, 2, 3}, {2, 3, 4}});
  CHECK(a.ss_between == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(a.ss_within == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(a.df_between == 1);
  CHECK(a.df_within == 4);
  CHECK(a.f_stat == 1.5);
  // F(1, 4) = 1.5 -> p = 0.2879 (two-sided t with 4 df, t = sqrt(1.5)).
  CHECK(a.p_value == doctest::Approx(0.28786).epsilon(1e-4));
}

TEST_CASE("anova: identical groups, translation invariance, errors") {
  auto same = one_way_anova({{1, 2, 3}, {1, 2, 3}});
  CHECK(same.f_stat == 0.0);
  CHECK(same.p_value == 1.0);

  std::vector<std::vector<double>> g{{1, 5, 2}, {7, 3, 9, 4}, {2, 2}};
  auto base = one_way_anova(g);
  for (auto &grp : g)
    for (auto &x : grp) x += 1000.0;
  CHECK(one_way_anova(g).f_stat == doctest::Approx(base.f_stat).epsilon(1e-9));

  auto separated = one_way_anova({{1, 1}, {2, 2}});
  CHECK(std::isinf(separated.f_stat));
  CHECK(separated.p_value == 0.0);

  CHECK_THROWS_AS(one_way_anova({{1, 2, 3}}), StatsError);
  CHECK_THROWS_AS(one_way_anova({{1}, {2}}), StatsError);
}

TEST_CASE("anova matches direct sums of squares on random data") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<double>> g(2 + rng() % 6);
    for (auto &grp : g) {
      grp.resize(1 + rng() % 8);
      for (auto &x : grp) x = nd(rng);
    }
    if (std::size_t(std::accumulate(g.begin(), g.end(), std::size_t{0},
                                    [](std::size_t s, const auto &v) { return s + v.size(); })) <= g.size())
      continue;
    auto got = one_way_anova(g);
    auto want = oracle::direct_anova(g);
    CHECK(got.df_between == want.df_between);
    CHECK(got.df_within == want.df_within);
    CHECK(got.f_stat == doctest::Approx(want.f).epsilon(1e-9));
  }
}

TEST_CASE("F distribution tail") {
  CHECK(dist::f_sf(1.5, 1, 4) == doctest::Approx(0.28786).epsilon(1e-4));
  CHECK(dist::f_cdf(0.0, 3, 10) == 0.0);
  // F(2, 10) critical value at 0.05 is 4.10.
  CHECK(dist::f_sf(4.1028, 2, 10) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(dist::incomplete_beta(2, 3, 0.4) == doctest::Approx(0.5248).epsilon(1e-4));
}

TEST_CASE("studentized range: published q(0.05) table") {
  struct Row {
    int k;
    double df, q;
  };
  const Row table[] = {{2, 10, 3.151}, {2, 20, 2.950}, {2, 60, 2.829}, {3, 10, 3.877}, {3, 20, 3.578},
                       {3, 60, 3.399}, {5, 10, 4.654}, {5, 20, 4.232}, {5, 60, 3.977}, {10, 10, 5.599},
                       {10, 20, 5.008}, {10, 60, 4.646}};
  for (const auto &r : table) {
    CAPTURE(r.k);
    CAPTURE(r.df);
    CHECK(std::fabs(dist::studentized_range_quantile(0.05, r.k, r.df) - r.q) < 0.01);
  }
}

TEST_CASE("studentized range with two groups equals t * sqrt(2)") {
  // t(0.975) quantiles for 10 and 30 df.
  CHECK(dist::studentized_range_quantile(0.05, 2, 10) == doctest::Approx(2.228139 * std::sqrt(2.0)).epsilon(1e-4));
  CHECK(dist::studentized_range_quantile(0.05, 2, 30) == doctest::Approx(2.042272 * std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("studentized range cdf is monotone and bounded") {
  double prev = 0;
  for (double q = 0.25; q < 8; q += 0.25) {
    double p = dist::studentized_range_cdf(q, 4, 15);
    CHECK(p >= prev);
    CHECK(p <= 1.0);
    prev = p;
  }
  CHECK(dist::studentized_range_cdf(0, 4, 15) == 0.0);
}

TEST_CASE("year effects: a dominant column has the largest effect") {
  MultiRpysMatrix m;
  m.citing_years = {2000, 2001, 2002};
  m.cited_years = {1990, 1991, 1992, 1993};
  m.segment_sizes = {1, 1, 1};
  m.rank = {{1.0, 4.0, 2.0, 3.0}, {2.0, 4.0, 1.0, 3.0}, {3.0, 4.0, 2.0, 1.0}};
  auto rep = year_effects(m);
  CHECK(rep.effects.front().cited_year == 1991);
  CHECK(rep.effects.front().ls_mean == 4.0);
  CHECK(top_milestone_years(m, 1) == std::vector<int>{1991});
  CHECK(rep.anova.df_between == 3);
  CHECK(rep.anova.df_within == 8);
  CHECK(rep.q_crit == doctest::Approx(dist::studentized_range_quantile(0.05, 4, 8)));
  const auto &e = rep.effects.front();
  CHECK(e.hsd_half_width == doctest::Approx(rep.q_crit * std::sqrt(rep.anova.ms_within / 3.0) / std::sqrt(2.0)));
  CHECK(e.significant_vs_grand == (std::fabs(e.effect) > e.hsd_half_width));
}

TEST_CASE("planted fixture: the 18 largest effects are the planted years") {
  auto fx = fixtures::make_planted_fixture();
  auto corpus = fx.searches[0];
  auto m = build_matrix(corpus, cluster_refs(extract_cited_refs(corpus)));
  auto top18 = top_milestone_years(m, 18);
  CHECK(std::set<int>(top18.begin(), top18.end()) == std::set<int>(fx.planted_years.begin(), fx.planted_years.end()));
  auto top10 = top_milestone_years(m, 10);
  CHECK(top10.size() == 10);
  for (int y : top10) CHECK(std::count(fx.planted_years.begin(), fx.planted_years.end(), y) == 1);
}
