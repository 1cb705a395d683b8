#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rpyskit/spectrum.hpp"

using namespace rpys;

namespace {

RefCluster cluster_of(const std::string &ref, std::size_t n) {
  RefCluster c;
  c.representative = parse_cited_ref(ref);
  c.ref_year = c.representative.ref_year;
  c.members.assign(n, c.representative);
  return c;
}

std::vector<std::int64_t> random_counts(std::mt19937_64 &rng, std::size_t n, std::int64_t max) {
  std::vector<std::int64_t> v(n);
  std::uniform_int_distribution<std::int64_t> d(0, max);
  for (auto &x : v) x = d(rng);
  return v;
}

Spectrum from_vector(int first, const std::vector<std::int64_t> &v) {
  std::map<int, std::int64_t> m;
  for (std::size_t i = 0; i < v.size(); ++i) m[first + static_cast<int>(i)] = v[i];
  return spectrum_from_counts(m);
}

}  // namespace

TEST_CASE("deviation: worked five-year example") {
  auto s = spectrum_from_counts({{2000, 10}, {2001, 12}, {2002, 30}, {2003, 11}, {2004, 13}});
  CHECK(s.median5[s.index_of(2002)] == 12.0);
  CHECK(s.deviation[s.index_of(2002)] == 18.0);
  // Edge windows are clipped: 2000 sees {10, 12, 30} and 2001 sees {10, 12, 30, 11}.
  CHECK(s.median5[0] == 12.0);
  CHECK(s.median5[1] == 11.5);
}

TEST_CASE("deviation: flat signal is zero") {
  auto s = from_vector(1900, std::vector<std::int64_t>(40, 7));
  for (double d : s.deviation) CHECK(d == 0.0);
  CHECK(detect_peaks(s).empty());
}

TEST_CASE("deviation matches the brute-force windowed median") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = random_counts(rng, 1 + rng() % 60, 10000);
    auto s = from_vector(1950, v);
    auto want = oracle::doubled_deviations(v);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(2.0 * s.deviation[i] == static_cast<double>(want[i]));
  }
}

TEST_CASE("gaps are zero-filled and the axis is dense") {
  auto s = spectrum_from_counts({{1990, 4}, {1995, 2}});
  CHECK(s.first_year == 1990);
  CHECK(s.size() == 6);
  CHECK(s.count[2] == 0);
  CHECK(s.total() == 6);
  CHECK(spectrum_from_counts({}).empty());
}

TEST_CASE("build_spectrum sums clusters and skips unknown years") {
  std::vector<RefCluster> cl{cluster_of("A, 1990, J X", 3), cluster_of("B, 1990, J Y", 2), cluster_of("C, 1992, J Z", 1),
                             cluster_of("ANON, UNTITLED", 5)};
  auto s = build_spectrum(cl);
  CHECK(s.first_year == 1990);
  CHECK(s.count == std::vector<std::int64_t>{5, 0, 1});
}

TEST_CASE("window_median") {
  CHECK(window_median({3, 1, 2}) == 2.0);
  CHECK(window_median({4, 1, 3, 2}) == 2.5);
  CHECK_THROWS(window_median({}));
}

TEST_CASE("detect_peaks: strict local maxima with positive deviation") {
  auto s = from_vector(2000, {0, 0, 0, 2, 20, 3, 0, 0, 0});
  CHECK(detect_peaks(s) == std::vector<int>{2004});
  // Plateaus are not strict maxima.
  auto p = from_vector(2000, {0, 0, 0, 9, 9, 0, 0, 0});
  CHECK(detect_peaks(p).empty());
}

TEST_CASE("detect_peaks equals the naive scan on random spectra") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    auto v = random_counts(rng, 1 + rng() % 80, 50);
    auto s = from_vector(1800, v);
    auto want = oracle::naive_peaks(oracle::doubled_deviations(v));
    std::vector<int> want_years;
    for (auto i : want) want_years.push_back(1800 + static_cast<int>(i));
    CHECK(detect_peaks(s) == want_years);
  }
}

TEST_CASE("top_references: ranks, ties and empty years") {
  std::vector<RefCluster> cl{cluster_of("A, 1990, J X", 5)};
  auto one = top_references(cl, 1990);
  REQUIRE(one.entries.size() == 1);
  CHECK(one.entries[0].rank == 1);
  CHECK(top_references(cl, 1991).entries.empty());

  std::vector<RefCluster> tie{cluster_of("B, 1990, J X", 3), cluster_of("A, 1990, J X", 3), cluster_of("C, 1990, J X", 1)};
  for (std::size_t i = 0; i < tie.size(); ++i) tie[i].cluster_id = i;
  auto l = top_references(tie, 1990, 2);
  REQUIRE(l.entries.size() == 2);
  CHECK(l.entries[0].cluster->representative.original == "A, 1990, J X");
  CHECK(l.entries[0].rank == 1);
  CHECK(l.entries[1].rank == 1);
  CHECK_THROWS(top_references(tie, 1990, 0));
}

TEST_CASE("planted fixture: peaks are exactly the planted years") {
  auto fx = fixtures::make_planted_fixture();
  auto refs = extract_cited_refs(fx.searches[0]);
  auto clusters = cluster_refs(refs);
  auto s = build_spectrum(clusters);
  CHECK(detect_peaks(s) == fx.planted_years);

  // The dominant year's top reference is its planted primary article.
  auto top = top_references(clusters, fx.dominant_year, 10);
  REQUIRE_FALSE(top.entries.empty());
  CHECK(top.entries[0].rank == 1);
  const auto &key = fx.milestones[9].articles.at(0);  // 1980 entry
  REQUIRE(fx.milestones[9].year == fx.dominant_year);
  // The representative may be a typo variant (ties go to the smallest string),
  // so look for the clean spelling among the members.
  const auto &members = top.entries[0].cluster->members;
  CHECK(std::any_of(members.begin(), members.end(),
                    [&](const RawCitedRef &m) { return m.first_author == normalize_text(key.author); }));
}
