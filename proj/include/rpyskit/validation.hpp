#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rpyskit/disambiguation.hpp"
#include "rpyskit/spectrum.hpp"

namespace rpys {

class MilestoneError : public std::runtime_error {
 public:
  MilestoneError(const std::string &what, std::size_t row)
      : std::runtime_error(row ? "row " + std::to_string(row) + ": " + what : what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// "author|year|source[|doi]" as written in milestone files.
struct ArticleKey {
  std::string author;
  int year = 0;
  std::string source;
  std::optional<std::string> doi;

  std::string to_string() const;
  /// The key as a cited reference, for scoring against cluster members.
  RawCitedRef as_cited_ref() const;
};

ArticleKey parse_article_key(std::string_view text);

/// An expert milestone. An empty article list marks a milestone without a
/// referenced document.
struct MilestoneEntry {
  int year = 0;
  std::string description;
  std::vector<ArticleKey> articles;
};

/// CSV columns: year, description, article_keys (keys joined by ';'). A
/// header row starting with "year" is skipped.
std::vector<MilestoneEntry> parse_milestones_csv(std::string_view text);
/// JSON: array of {year, description, articles: [key string | {author, year, source, doi}]}.
std::vector<MilestoneEntry> parse_milestones_json(std::string_view text);
/// Dispatches on a ".json" extension, otherwise CSV.
std::vector<MilestoneEntry> load_milestones(const std::string &path);

std::vector<int> distinct_milestone_years(const std::vector<MilestoneEntry> &milestones);
std::size_t article_key_count(const std::vector<MilestoneEntry> &milestones);
/// Article keys plus one slot per entry without a referenced document.
std::size_t article_slot_count(const std::vector<MilestoneEntry> &milestones);

struct YearHit {
  int year = 0;
  bool hit = false;
};

struct YearEvaluation {
  std::vector<YearHit> hits;
  std::optional<double> hit_rate;  // empty when there are no candidates
  std::size_t milestone_years = 0;
  std::pair<int, int> span{0, 0};
  double chance_baseline = 0.0;  // milestone_years / (span.second - span.first + 1)
};

/// Defaults the span to (earliest, latest) milestone year.
YearEvaluation evaluate_years(const std::vector<int> &candidates, const std::vector<MilestoneEntry> &milestones,
                              std::optional<std::pair<int, int>> span = std::nullopt);

struct SearchArtifacts {
  std::string label;
  Spectrum spectrum;
  std::vector<RefCluster> clusters;
};

enum class ArticleStatus { Captured, NoPeak, NotInTopN, Absent, Undocumented };

std::string_view to_string(ArticleStatus s);

struct SearchOutcome {
  std::string label;
  bool peak_present = false;
  std::optional<std::size_t> rank;  // best rank among matching clusters in the top list
  std::size_t matching_clusters = 0;
  bool ambiguous = false;
  ArticleStatus status = ArticleStatus::Absent;
};

struct ArticleResult {
  std::size_t entry_index = 0;
  int milestone_year = 0;
  std::string description;
  std::optional<ArticleKey> key;  // empty for milestones without a document
  std::vector<SearchOutcome> searches;
  bool captured = false;
};

struct ArticleMatchOptions {
  double threshold = 0.8;
  std::size_t top_n = 10;
  MatchConfig match{};
};

struct ValidationReport {
  std::vector<std::string> search_labels;
  std::vector<ArticleResult> articles;
  std::size_t article_slots = 0;
  std::size_t captured = 0;
  std::optional<double> article_capture_rate;
  std::optional<YearEvaluation> years;
};

/// An article counts as captured in a search when its milestone year is a
/// spectrum peak and a matching cluster sits in that year's top list. A key
/// matching several clusters is captured only if all of them are listed.
ValidationReport evaluate_articles(const std::vector<SearchArtifacts> &searches,
                                   const std::vector<MilestoneEntry> &milestones,
                                   const ArticleMatchOptions &opts = {});

/// Table-shaped text: milestone, article, peak flag and rank per search.
std::string format_validation_table(const ValidationReport &report);

}  // namespace rpys
