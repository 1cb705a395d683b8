#pragma once

// Synthetic corpora with known ground truth, shared by the unit and
// acceptance tests.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rpyskit/cited_ref.hpp"
#include "rpyskit/corpus.hpp"
#include "rpyskit/validation.hpp"

namespace rpys::fixtures {

/// Serializes records as a field-tagged export (FN/VR header, ER/EF terminators).
std::string to_tagged(const std::vector<CitingRecord> &records);

/// Serializes records as a tab-delimited export with a header row.
std::string to_tabular(const std::vector<CitingRecord> &records);

/// "Surname AB" style name drawn from random syllables.
std::string random_author(std::mt19937_64 &rng);
std::string random_source(std::mt19937_64 &rng);

struct PlantedFixture {
  /// Years boosted in every citing-year segment. Pairwise at least 3 apart so
  /// each spike sits alone in its five-year window.
  std::vector<int> planted_years;
  int dominant_year = 1980;
  /// Four structurally identical searches (disjoint record ids).
  std::vector<Corpus> searches;
  Corpus combined;
  std::vector<MilestoneEntry> milestones;
  std::size_t expected_captured = 0;
  std::size_t expected_slots = 0;
};

/// Deterministic: citing years 1990-2015, 2,288 records in total.
PlantedFixture make_planted_fixture(std::uint64_t seed = 20160201);

/// Four exports with overlapping pools: 1148 / 244 / 918 / 92 records drawn from
/// a 1948-record pool (B inside A, C and D partly overlapping A).
std::vector<std::vector<CitingRecord>> make_overlapping_searches(std::uint64_t seed = 7);

struct DedupFixture {
  std::vector<RawCitedRef> refs;
  /// canonical[i] = index into refs of the canonical form of refs[i].
  std::vector<std::size_t> canonical;
  std::size_t canonical_count = 0;
};

/// `works` canonical references, each with typo variants at edit distance <= 2
/// in author or source.
DedupFixture make_dedup_fixture(std::size_t works = 1000, std::uint64_t seed = 99);

}  // namespace rpys::fixtures
