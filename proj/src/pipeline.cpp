#include "rpyskit/pipeline.hpp"

#include <filesystem>
#include <system_error>

#include "rpyskit/io.hpp"

namespace rpys {

void RunConfig::validate() const {
  match.validate();
  segments.validate();
  style.validate();
  if (top_n == 0) throw std::invalid_argument("top_n must be at least 1");
  if (top_k_years == 0) throw std::invalid_argument("top_k_years must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(article_threshold > 0.0 && article_threshold <= 1.0))
    throw std::invalid_argument("article threshold must lie in (0, 1]");
  if (outdir.empty()) throw std::invalid_argument("output directory must not be empty");
}

namespace {

template <class Fn>
auto stage(const char *name, Fn &&fn) {
  try {
    return fn();
  } catch (const PipelineError &) {
    throw;
  } catch (const std::exception &e) {
    throw PipelineError(name, e.what());
  }
}

}  // namespace

PipelineResult run_analysis(const Corpus &corpus, const RunConfig &cfg,
                            const std::vector<MilestoneEntry> *milestones) {
  stage("config", [&] { cfg.validate(); return 0; });
  PipelineResult r;
  r.records = corpus.records.size();
  auto refs = stage("dedupe", [&] { return extract_cited_refs(corpus); });
  r.cited_refs = refs.size();
  r.clusters = stage("dedupe", [&] {
    return cfg.dedup ? cluster_refs(refs, cfg.match, cfg.threads) : clusters_without_dedup(refs);
  });
  r.spectrum = stage("spectrum", [&] {
    auto s = build_spectrum(r.clusters);
    if (s.empty()) throw std::runtime_error("no cited reference carries a publication year");
    return s;
  });
  r.peaks = detect_peaks(r.spectrum);
  r.segments = stage("multi", [&] { return segment_spectra(corpus, r.clusters, cfg.segments, cfg.threads); });
  r.matrix = stage("multi", [&] {
    auto m = matrix_from_segment_spectra(r.segments);
    if (m.empty()) throw std::runtime_error("no citing-year segment qualifies");
    return m;
  });
  r.effects = stage("stats", [&] { return year_effects(r.matrix, cfg.alpha); });
  for (const auto &e : r.effects.effects) {
    if (r.top_years.size() == cfg.top_k_years) break;
    r.top_years.push_back(e.cited_year);
  }
  if (milestones) {
    r.validation = stage("validate", [&] {
      ArticleMatchOptions opts;
      opts.threshold = cfg.article_threshold;
      opts.top_n = cfg.top_n;
      opts.match = cfg.match;
      auto rep = evaluate_articles({{"all", r.spectrum, r.clusters}}, *milestones, opts);
      rep.years = evaluate_years(r.top_years, *milestones);
      return rep;
    });
  }
  return r;
}

std::map<std::string, std::string> render_outputs(const PipelineResult &r, const RunConfig &cfg) {
  std::map<std::string, std::string> out;
  stage("export", [&] {
    out["clusters.csv"] = io::clusters_csv(r.clusters);
    out["clusters.json"] = io::dump(io::clusters_to_json(r.clusters));
    out["spectrum.csv"] = io::spectrum_csv(r.spectrum, r.peaks);
    out["peaks.json"] = io::dump(io::peaks_to_json(r.spectrum, r.peaks, r.clusters, cfg.top_n));
    out["matrix.csv"] = io::matrix_long_csv(r.matrix);
    out["matrix.json"] = io::dump(io::matrix_to_json(r.matrix, r.segments));
    out["stats.json"] = io::dump(io::stats_to_json(r.effects, r.top_years));
    out["stats.txt"] = io::stats_table(r.effects, r.top_years);

    io::json rep;
    rep["records"] = r.records;
    rep["cited_refs"] = r.cited_refs;
    rep["clusters"] = r.clusters.size();
    rep["spectrum_span"] = {r.spectrum.first_year, r.spectrum.last_year()};
    rep["peaks"] = r.peaks.size();
    rep["segments"] = r.segments.size();
    rep["anova"] = {{"f_stat", r.effects.anova.f_stat},
                    {"df_between", r.effects.anova.df_between},
                    {"df_within", r.effects.anova.df_within},
                    {"p_value", r.effects.anova.p_value}};
    rep["top_years"] = r.top_years;
    if (r.validation) {
      rep["validation"] = io::validation_to_json(*r.validation);
      rep["capture_rate"] = rep["validation"]["capture_rate"];
      out["validation.txt"] = format_validation_table(*r.validation);
    }
    out["report.json"] = io::dump(rep);
    return 0;
  });
  stage("plot", [&] {
    PlotStyle s = cfg.style;
    if (s.title.empty()) s.title = "Reference publication year spectrogram";
    out["spectrum.svg"] = render_spectrogram(r.spectrum, r.peaks, s);
    s = cfg.style;
    if (s.title.empty()) s.title = "Ranked deviation by citing and cited year";
    out["heatmap.svg"] = render_heatmap(r.matrix, s);
    return 0;
  });
  return out;
}

std::vector<std::string> run_pipeline(const Corpus &corpus, const RunConfig &cfg) {
  std::vector<MilestoneEntry> milestones;
  if (cfg.milestones_path)
    milestones = stage("validate", [&] { return load_milestones(*cfg.milestones_path); });
  auto result = run_analysis(corpus, cfg, cfg.milestones_path ? &milestones : nullptr);
  auto files = render_outputs(result, cfg);

  std::vector<std::string> written;
  try {
    std::filesystem::create_directories(cfg.outdir);
    for (const auto &[name, content] : files) {
      auto path = (std::filesystem::path(cfg.outdir) / name).string();
      io::write_file(path, content);
      written.push_back(path);
    }
  } catch (const std::exception &e) {
    std::error_code ec;
    for (const auto &p : written) std::filesystem::remove(p, ec);
    throw PipelineError("write", e.what());
  }
  return written;
}

}  // namespace rpys
