// rpys-kit: command-line front end. Every subcommand reads and writes plain
// files so stages can be rerun and inspected independently.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rpyskit/corpus.hpp"
#include "rpyskit/csv.hpp"
#include "rpyskit/io.hpp"
#include "rpyskit/pipeline.hpp"
#include "rpyskit/render.hpp"
#include "rpyskit/spectrum.hpp"
#include "rpyskit/stats.hpp"
#include "rpyskit/validation.hpp"

namespace fs = std::filesystem;
using namespace rpys;
using io::json;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kIoError = 2;

struct MissingInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_exists(const std::string &path) {
  if (!fs::exists(path)) throw MissingInput("no such file: " + path);
}

json load_json(const std::string &path) {
  require_exists(path);
  auto text = io::read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw io::SchemaError(path + ": " + e.what());
  }
}

Corpus load_corpus(const std::string &path) { return io::corpus_from_json(load_json(path)); }
std::vector<RefCluster> load_clusters(const std::string &path) { return io::clusters_from_json(load_json(path)); }

/// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string &path, const std::string &content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  io::write_file(path, content);
}

struct MatchFlags {
  double threshold = 0.75;
  bool no_year_block = false;
  bool no_doi = false;
  bool no_dedup = false;

  void add(CLI::App *cmd) {
    cmd->add_option("--threshold", threshold, "Similarity threshold for merging references")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_flag("--no-year-block", no_year_block, "Score pairs with differing years instead of zeroing them");
    cmd->add_flag("--no-doi", no_doi, "Ignore DOIs when scoring");
    cmd->add_flag("--no-dedup", no_dedup, "Only merge byte-identical reference strings");
  }
  MatchConfig config() const {
    MatchConfig c;
    c.string_sim_threshold = threshold;
    c.require_year_block = !no_year_block;
    c.doi_overrides = !no_doi;
    return c;
  }
};

struct SegmentFlags {
  std::size_t min_records = 1;
  std::optional<int> from, to;

  void add(CLI::App *cmd) {
    cmd->add_option("--min-segment-records", min_records, "Smallest citing-year segment kept")->capture_default_str();
    cmd->add_option("--citing-from", from, "First citing year to include");
    cmd->add_option("--citing-to", to, "Last citing year to include");
  }
  SegmentSpec spec() const {
    SegmentSpec s;
    s.min_segment_records = min_records;
    if (from || to) s.citing_year_range = std::pair{from.value_or(kMinYear), to.value_or(max_valid_year())};
    return s;
  }
};

struct StyleFlags {
  PlotStyle style;
  void add(CLI::App *cmd) {
    cmd->add_option("--width", style.width)->capture_default_str();
    cmd->add_option("--height", style.height)->capture_default_str();
    cmd->add_option("--palette", style.color_map)->capture_default_str();
    cmd->add_option("--label-step", style.axis_label_step, "Years between axis labels")->capture_default_str();
    cmd->add_option("--title", style.title);
  }
};

ExportFormat parse_format(const std::string &s) { return export_format_from_string(s); }

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Reference publication year spectroscopy toolkit"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: RPYS_KIT_THREADS or all cores)");

  // ingest
  auto *ingest = app.add_subcommand("ingest", "Parse WoS exports into a corpus file");
  std::vector<std::string> ingest_files;
  std::string ingest_format = "auto", ingest_out = "corpus.json", ingest_summary;
  ingest->add_option("files", ingest_files, "Export files")->required();
  ingest->add_option("--format", ingest_format, "auto, tagged or tabular")->capture_default_str();
  ingest->add_option("-o,--output", ingest_out)->capture_default_str();
  ingest->add_option("--summary", ingest_summary, "Also write the summary as CSV");

  // dedupe
  auto *dedupe = app.add_subcommand("dedupe", "Cluster cited-reference variants");
  std::string dedupe_in, dedupe_out = "clusters.json", dedupe_csv;
  MatchFlags dedupe_flags;
  dedupe->add_option("corpus", dedupe_in)->required();
  dedupe->add_option("-o,--output", dedupe_out)->capture_default_str();
  dedupe->add_option("--csv", dedupe_csv, "Also write a cluster table");
  dedupe_flags.add(dedupe);

  // spectrum
  auto *spectrum = app.add_subcommand("spectrum", "Yearly counts, 5-year median and deviation");
  std::string spectrum_in, spectrum_out;
  spectrum->add_option("clusters", spectrum_in)->required();
  spectrum->add_option("-o,--output", spectrum_out, "CSV path (default stdout)");

  // peaks
  auto *peaks = app.add_subcommand("peaks", "Peak years with their most cited references");
  std::string peaks_in, peaks_out;
  std::size_t peaks_top = 10;
  peaks->add_option("clusters", peaks_in)->required();
  peaks->add_option("-o,--output", peaks_out, "JSON path (default stdout)");
  peaks->add_option("--top-n", peaks_top)->capture_default_str();

  // toprefs
  auto *toprefs = app.add_subcommand("toprefs", "Most cited references of one year");
  std::string toprefs_in;
  int toprefs_year = 0;
  std::size_t toprefs_top = 10;
  toprefs->add_option("clusters", toprefs_in)->required();
  toprefs->add_option("--year", toprefs_year)->required();
  toprefs->add_option("--top-n", toprefs_top)->capture_default_str();

  // multi
  auto *multi = app.add_subcommand("multi", "Citing-year x cited-year rank matrix");
  std::string multi_corpus, multi_clusters, multi_out = "matrix.json", multi_csv;
  SegmentFlags multi_flags;
  multi->add_option("corpus", multi_corpus)->required();
  multi->add_option("clusters", multi_clusters)->required();
  multi->add_option("-o,--output", multi_out)->capture_default_str();
  multi->add_option("--csv", multi_csv, "Also write the matrix in long form");
  multi_flags.add(multi);

  // stats
  auto *stats = app.add_subcommand("stats", "ANOVA over cited years and Tukey effects");
  std::string stats_in, stats_out;
  double stats_alpha = 0.05;
  std::size_t stats_top = 10;
  stats->add_option("matrix", stats_in)->required();
  stats->add_option("-o,--output", stats_out, "JSON path (default: table on stdout)");
  stats->add_option("--alpha", stats_alpha)->check(CLI::Range(1e-6, 0.5))->capture_default_str();
  stats->add_option("--top-k", stats_top)->capture_default_str();

  // validate
  auto *validate = app.add_subcommand("validate", "Score results against expert milestones");
  std::string val_milestones, val_stats, val_out;
  std::vector<std::string> val_searches;
  std::size_t val_top = 10;
  double val_threshold = 0.8;
  validate->add_option("--milestones", val_milestones)->required();
  validate->add_option("--clusters", val_searches, "clusters.json per search, optionally LABEL=PATH");
  validate->add_option("--stats", val_stats, "stats.json whose selected years are scored");
  validate->add_option("--top-n", val_top)->capture_default_str();
  validate->add_option("--threshold", val_threshold)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  validate->add_option("-o,--output", val_out, "JSON path (default: table on stdout)");

  // plot
  auto *plot = app.add_subcommand("plot", "Render a spectrogram or heatmap as SVG");
  std::string plot_clusters, plot_matrix, plot_out;
  StyleFlags plot_style;
  auto *pc = plot->add_option("--clusters", plot_clusters, "Draw the spectrogram of these clusters");
  auto *pm = plot->add_option("--matrix", plot_matrix, "Draw the heatmap of this matrix");
  pc->excludes(pm);
  plot->add_option("-o,--output", plot_out)->required();
  plot_style.add(plot);

  // pipeline
  auto *pipeline = app.add_subcommand("pipeline", "Run every stage and write all artifacts");
  std::vector<std::string> pipe_inputs;
  std::string pipe_format = "auto";
  RunConfig run;
  MatchFlags pipe_match;
  SegmentFlags pipe_seg;
  StyleFlags pipe_style;
  std::string pipe_milestones;
  pipeline->add_option("inputs", pipe_inputs, "corpus.json, or raw export files")->required();
  pipeline->add_option("--format", pipe_format, "Export format for raw inputs")->capture_default_str();
  pipeline->add_option("--outdir", run.outdir)->capture_default_str();
  pipeline->add_option("--top-n", run.top_n)->capture_default_str();
  pipeline->add_option("--top-k", run.top_k_years)->capture_default_str();
  pipeline->add_option("--alpha", run.alpha)->capture_default_str();
  pipeline->add_option("--milestones", pipe_milestones);
  pipeline->add_option("--article-threshold", run.article_threshold)->capture_default_str();
  pipe_match.add(pipeline);
  pipe_seg.add(pipeline);
  pipe_style.add(pipeline);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      std::vector<Corpus> parts;
      std::string summary = "path,format,records,cited_refs,warnings\n";
      for (const auto &f : ingest_files) {
        require_exists(f);
        auto parsed = parse_export_file(f, parse_format(ingest_format));
        for (const auto &w : parsed.warnings) std::cerr << f << ": record " << w.row << ": " << w.message << "\n";
        const auto &p = parsed.corpus.provenance.front();
        summary += csv::join_row({f, std::string(to_string(p.format)), std::to_string(p.record_count),
                                  std::to_string(parsed.corpus.total_cited_refs()),
                                  std::to_string(parsed.warnings.size())}) +
                   "\n";
        parts.push_back(std::move(parsed.corpus));
      }
      Corpus u = corpus_union(parts);
      summary += csv::join_row({"union", "", std::to_string(u.records.size()), std::to_string(u.total_cited_refs()), ""}) + "\n";
      emit(ingest_out, io::dump(io::corpus_to_json(u)));
      if (!ingest_summary.empty()) io::write_file(ingest_summary, summary);
      std::cout << summary;
    } else if (*dedupe) {
      auto corpus = load_corpus(dedupe_in);
      auto refs = extract_cited_refs(corpus);
      auto cfg = dedupe_flags.config();
      auto clusters = dedupe_flags.no_dedup ? clusters_without_dedup(refs) : cluster_refs(refs, cfg, threads);
      emit(dedupe_out, io::dump(io::clusters_to_json(clusters)));
      if (!dedupe_csv.empty()) io::write_file(dedupe_csv, io::clusters_csv(clusters));
      std::cerr << refs.size() << " references -> " << clusters.size() << " clusters\n";
    } else if (*spectrum) {
      auto s = build_spectrum(load_clusters(spectrum_in));
      if (s.empty()) throw std::runtime_error("no dated references; nothing to count");
      emit(spectrum_out, io::spectrum_csv(s, detect_peaks(s)));
    } else if (*peaks) {
      auto clusters = load_clusters(peaks_in);
      auto s = build_spectrum(clusters);
      emit(peaks_out, io::dump(io::peaks_to_json(s, detect_peaks(s), clusters, peaks_top)));
    } else if (*toprefs) {
      auto clusters = load_clusters(toprefs_in);
      auto list = top_references(clusters, toprefs_year, toprefs_top);
      for (const auto &e : list.entries)
        std::cout << e.rank << '\t' << e.count << '\t' << e.cluster->representative.original << '\n';
    } else if (*multi) {
      auto corpus = load_corpus(multi_corpus);
      auto clusters = load_clusters(multi_clusters);
      auto segs = segment_spectra(corpus, clusters, multi_flags.spec(), threads);
      auto m = matrix_from_segment_spectra(segs);
      emit(multi_out, io::dump(io::matrix_to_json(m, segs)));
      if (!multi_csv.empty()) io::write_file(multi_csv, io::matrix_long_csv(m));
    } else if (*stats) {
      auto m = io::matrix_from_json(load_json(stats_in));
      auto report = year_effects(m, stats_alpha);
      std::vector<int> selected;
      for (const auto &e : report.effects) {
        if (selected.size() == stats_top) break;
        selected.push_back(e.cited_year);
      }
      if (stats_out.empty()) std::cout << io::stats_table(report, selected);
      else io::write_file(stats_out, io::dump(io::stats_to_json(report, selected)));
    } else if (*validate) {
      require_exists(val_milestones);
      auto milestones = load_milestones(val_milestones);
      std::vector<SearchArtifacts> searches;
      for (const auto &arg : val_searches) {
        auto eq = arg.find('=');
        std::string label = eq == std::string::npos ? fs::path(arg).stem().string() : arg.substr(0, eq);
        std::string path = eq == std::string::npos ? arg : arg.substr(eq + 1);
        auto clusters = load_clusters(path);
        auto s = build_spectrum(clusters);
        searches.push_back({label, std::move(s), std::move(clusters)});
      }
      ArticleMatchOptions opts;
      opts.threshold = val_threshold;
      opts.top_n = val_top;
      auto report = evaluate_articles(searches, milestones, opts);
      if (!val_stats.empty()) {
        auto js = load_json(val_stats);
        report.years = evaluate_years(js.at("selected_years").get<std::vector<int>>(), milestones);
      }
      if (val_out.empty()) std::cout << format_validation_table(report);
      else io::write_file(val_out, io::dump(io::validation_to_json(report)));
    } else if (*plot) {
      if (!plot_clusters.empty()) {
        auto s = build_spectrum(load_clusters(plot_clusters));
        io::write_file(plot_out, render_spectrogram(s, detect_peaks(s), plot_style.style));
      } else if (!plot_matrix.empty()) {
        io::write_file(plot_out, render_heatmap(io::matrix_from_json(load_json(plot_matrix)), plot_style.style));
      } else {
        throw std::invalid_argument("plot needs --clusters or --matrix");
      }
    } else if (*pipeline) {
      Corpus corpus;
      for (const auto &f : pipe_inputs) require_exists(f);
      if (pipe_inputs.size() == 1 && fs::path(pipe_inputs[0]).extension() == ".json") {
        corpus = load_corpus(pipe_inputs[0]);
      } else {
        std::vector<Corpus> parts;
        for (const auto &f : pipe_inputs) parts.push_back(parse_export_file(f, parse_format(pipe_format)).corpus);
        corpus = corpus_union(parts);
      }
      run.match = pipe_match.config();
      run.dedup = !pipe_match.no_dedup;
      run.segments = pipe_seg.spec();
      run.style = pipe_style.style;
      run.threads = threads;
      if (!pipe_milestones.empty()) {
        require_exists(pipe_milestones);
        run.milestones_path = pipe_milestones;
      }
      for (const auto &p : run_pipeline(corpus, run)) std::cout << p << '\n';
    }
  } catch (const MissingInput &e) {
    std::cerr << "rpys-kit: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error &e) {
    std::cerr << "rpys-kit: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception &e) {
    std::cerr << "rpys-kit: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
