#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rpyskit/cited_ref.hpp"

namespace rpys {

/// Field weights of the reference similarity score.
struct SimilarityWeights {
  double author = 0.4;
  double source = 0.3;
  double volume = 0.15;
  double page = 0.15;
};

struct MatchConfig {
  double string_sim_threshold = 0.75;
  /// When false, differing years no longer force a zero score. Clustering
  /// still blocks by year regardless.
  bool require_year_block = true;
  /// Equal DOIs score 1, different DOIs score 0.
  bool doi_overrides = true;
  SimilarityWeights weights{};

  void validate() const;
};

/// A disambiguated work: every member shares ref_year.
struct RefCluster {
  std::size_t cluster_id = 0;
  std::optional<int> ref_year;
  RawCitedRef representative;
  std::vector<RawCitedRef> members;

  std::size_t count() const { return members.size(); }
};

std::size_t edit_distance(std::string_view a, std::string_view b);

/// 1 - edit_distance / max(len); two empty strings give 1.
double levenshtein_ratio(std::string_view a, std::string_view b);

/// Score in [0, 1]. A field missing on exactly one side contributes half its
/// weight; missing on both sides counts as agreement.
double similarity(const RawCitedRef &a, const RawCitedRef &b, const MatchConfig &cfg = {});

/// Partitions refs into clusters: single linkage within year blocks, merges
/// that would join two distinct DOIs are refused. Unknown-year refs stay
/// singletons. Output is sorted by (ref_year, representative.original) with
/// unknown years last, and cluster_id equals the position in that order.
std::vector<RefCluster> cluster_refs(const std::vector<RawCitedRef> &refs, const MatchConfig &cfg = {},
                                     unsigned threads = 0);

/// Member with the most populated fields, ties to the smallest original.
const RawCitedRef &pick_representative(const std::vector<RawCitedRef> &members);

/// Clusters without fuzzy matching: one cluster per distinct original string
/// within a year.
std::vector<RefCluster> clusters_without_dedup(const std::vector<RawCitedRef> &refs);

}  // namespace rpys
