#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rpyskit/corpus.hpp"
#include "rpyskit/disambiguation.hpp"
#include "rpyskit/multi_rpys.hpp"
#include "rpyskit/render.hpp"
#include "rpyskit/spectrum.hpp"
#include "rpyskit/stats.hpp"
#include "rpyskit/validation.hpp"

namespace rpys {

/// A failure inside one pipeline stage; what() starts with the stage name.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string &what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string &stage() const { return stage_; }

 private:
  std::string stage_;
};

struct RunConfig {
  MatchConfig match{};
  bool dedup = true;
  SegmentSpec segments{};
  std::size_t top_n = 10;
  std::size_t top_k_years = 10;
  double alpha = 0.05;
  double article_threshold = 0.8;
  std::optional<std::string> milestones_path;
  std::string outdir = ".";
  unsigned threads = 0;
  PlotStyle style{};

  void validate() const;
};

struct PipelineResult {
  std::size_t records = 0;
  std::size_t cited_refs = 0;
  std::vector<RefCluster> clusters;
  Spectrum spectrum;
  std::vector<int> peaks;
  std::vector<SegmentSpectrum> segments;
  MultiRpysMatrix matrix;
  EffectsReport effects;
  std::vector<int> top_years;
  std::optional<ValidationReport> validation;
};

/// Runs every stage in memory.
PipelineResult run_analysis(const Corpus &corpus, const RunConfig &cfg,
                            const std::vector<MilestoneEntry> *milestones = nullptr);

/// File name -> contents for every artifact of a run.
std::map<std::string, std::string> render_outputs(const PipelineResult &r, const RunConfig &cfg);

/// Analysis plus artifacts written under cfg.outdir. On failure nothing
/// written by this call is left behind. Returns the written paths.
std::vector<std::string> run_pipeline(const Corpus &corpus, const RunConfig &cfg);

}  // namespace rpys
