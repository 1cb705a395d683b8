#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rpyskit/corpus.hpp"
#include "rpyskit/distributions.hpp"
#include "rpyskit/io.hpp"
#include "rpyskit/multi_rpys.hpp"
#include "rpyskit/pipeline.hpp"
#include "rpyskit/render.hpp"
#include "rpyskit/spectrum.hpp"
#include "rpyskit/stats.hpp"
#include "rpyskit/validation.hpp"

namespace py = pybind11;
using namespace rpys;

namespace {

MatchConfig match_config(double threshold, bool require_year_block, bool doi_overrides) {
  MatchConfig c;
  c.string_sim_threshold = threshold;
  c.require_year_block = require_year_block;
  c.doi_overrides = doi_overrides;
  return c;
}

PlotStyle plot_style(int width, int height, const std::string &palette, int label_step, const std::string &title) {
  PlotStyle s;
  s.width = width;
  s.height = height;
  s.color_map = palette;
  s.axis_label_step = label_step;
  s.title = title;
  return s;
}

py::dict effects_dict(const EffectsReport &r) {
  return py::module_::import("json").attr("loads")(io::stats_to_json(r, {}).dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reference publication year spectroscopy core";

  py::register_exception<IngestError>(m, "IngestError", PyExc_ValueError);
  py::register_exception<MilestoneError>(m, "MilestoneError", PyExc_ValueError);
  py::register_exception<RenderError>(m, "RenderError", PyExc_ValueError);
  py::register_exception<PipelineError>(m, "PipelineError", PyExc_RuntimeError);

  // --- corpus
  py::class_<CitingRecord>(m, "CitingRecord")
      .def(py::init<>())
      .def_readwrite("record_id", &CitingRecord::record_id)
      .def_readwrite("pub_year", &CitingRecord::pub_year)
      .def_readwrite("title", &CitingRecord::title)
      .def_readwrite("source", &CitingRecord::source)
      .def_readwrite("cited_refs", &CitingRecord::cited_refs)
      .def("__repr__", [](const CitingRecord &r) { return "<CitingRecord " + r.record_id + ">"; });

  py::class_<Corpus>(m, "Corpus")
      .def(py::init<>())
      .def_readwrite("records", &Corpus::records)
      .def("__len__", [](const Corpus &c) { return c.records.size(); })
      .def("total_cited_refs", &Corpus::total_cited_refs)
      .def_property_readonly("provenance",
                             [](const Corpus &c) {
                               py::list out;
                               for (const auto &p : c.provenance)
                                 out.append(py::make_tuple(p.path, std::string(to_string(p.format)), p.record_count));
                               return out;
                             })
      .def("to_json", [](const Corpus &c) { return io::dump(io::corpus_to_json(c)); })
      .def_static("from_json", [](const std::string &s) { return io::corpus_from_json(io::json::parse(s)); });

  m.def(
      "parse_export",
      [](py::bytes data, const std::string &format, const std::string &path) {
        return parse_export(std::string(data), export_format_from_string(format), path).corpus;
      },
      py::arg("data"), py::arg("format") = "auto", py::arg("path") = "");
  m.def(
      "parse_export_file",
      [](const std::string &path, const std::string &format) {
        return parse_export_file(path, export_format_from_string(format)).corpus;
      },
      py::arg("path"), py::arg("format") = "auto");
  m.def("corpus_union", &corpus_union, py::arg("corpora"));

  // --- references
  py::class_<RawCitedRef>(m, "CitedRef")
      .def_readonly("original", &RawCitedRef::original)
      .def_readonly("first_author", &RawCitedRef::first_author)
      .def_readonly("ref_year", &RawCitedRef::ref_year)
      .def_readonly("source", &RawCitedRef::source)
      .def_readonly("volume", &RawCitedRef::volume)
      .def_readonly("first_page", &RawCitedRef::first_page)
      .def_readonly("doi", &RawCitedRef::doi)
      .def_readonly("parent_record_id", &RawCitedRef::parent_record_id)
      .def("__repr__", [](const RawCitedRef &r) { return "<CitedRef '" + r.original + "'>"; });
  m.def("parse_cited_ref", [](const std::string &s) { return parse_cited_ref(s); }, py::arg("text"));
  m.def(
      "similarity",
      [](const RawCitedRef &a, const RawCitedRef &b, bool require_year_block, bool doi_overrides) {
        return similarity(a, b, match_config(0.75, require_year_block, doi_overrides));
      },
      py::arg("a"), py::arg("b"), py::arg("require_year_block") = true, py::arg("doi_overrides") = true);

  py::class_<RefCluster>(m, "RefCluster")
      .def_readonly("cluster_id", &RefCluster::cluster_id)
      .def_readonly("ref_year", &RefCluster::ref_year)
      .def_readonly("representative", &RefCluster::representative)
      .def_readonly("members", &RefCluster::members)
      .def_property_readonly("count", &RefCluster::count)
      .def("__repr__", [](const RefCluster &c) {
        return "<RefCluster " + std::to_string(c.cluster_id) + " x" + std::to_string(c.count()) + " '" +
               c.representative.original + "'>";
      });
  m.def(
      "cluster_refs",
      [](const Corpus &corpus, double threshold, bool require_year_block, bool doi_overrides, bool dedup,
         unsigned threads) {
        auto refs = extract_cited_refs(corpus);
        py::gil_scoped_release release;
        return dedup ? cluster_refs(refs, match_config(threshold, require_year_block, doi_overrides), threads)
                     : clusters_without_dedup(refs);
      },
      py::arg("corpus"), py::arg("threshold") = 0.75, py::arg("require_year_block") = true,
      py::arg("doi_overrides") = true, py::arg("dedup") = true, py::arg("threads") = 0);

  // --- spectrum
  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("first_year", &Spectrum::first_year)
      .def_readonly("count", &Spectrum::count)
      .def_readonly("median5", &Spectrum::median5)
      .def_readonly("deviation", &Spectrum::deviation)
      .def_property_readonly("years", &Spectrum::years)
      .def("__len__", &Spectrum::size);
  m.def("build_spectrum", &build_spectrum, py::arg("clusters"));
  m.def("spectrum_from_counts", &spectrum_from_counts, py::arg("counts"));
  m.def("detect_peaks", &detect_peaks, py::arg("spectrum"));
  m.def(
      "top_references",
      [](const std::vector<RefCluster> &clusters, int year, std::size_t n) {
        py::list out;
        for (const auto &e : top_references(clusters, year, n).entries)
          out.append(py::make_tuple(e.rank, e.count, e.cluster->cluster_id, e.cluster->representative.original));
        return out;
      },
      py::arg("clusters"), py::arg("year"), py::arg("n") = 10);

  // --- multi-RPYS
  py::class_<MultiRpysMatrix>(m, "Matrix")
      .def_readonly("citing_years", &MultiRpysMatrix::citing_years)
      .def_readonly("cited_years", &MultiRpysMatrix::cited_years)
      .def_readonly("rank", &MultiRpysMatrix::rank)
      .def_readonly("segment_sizes", &MultiRpysMatrix::segment_sizes)
      .def_property_readonly("shape", [](const MultiRpysMatrix &mx) { return py::make_tuple(mx.rows(), mx.cols()); });
  m.def(
      "build_matrix",
      [](const Corpus &corpus, const std::vector<RefCluster> &clusters, std::size_t min_segment_records,
         unsigned threads) {
        SegmentSpec spec;
        spec.min_segment_records = min_segment_records;
        py::gil_scoped_release release;
        return build_matrix(corpus, clusters, spec, threads);
      },
      py::arg("corpus"), py::arg("clusters"), py::arg("min_segment_records") = 1, py::arg("threads") = 0);
  m.def("rank_transform", py::overload_cast<const std::vector<std::optional<double>> &>(&rank_transform),
        py::arg("values"));

  // --- statistics
  m.def(
      "one_way_anova",
      [](const std::vector<std::vector<double>> &groups) {
        auto a = one_way_anova(groups);
        py::dict d;
        d["f_stat"] = a.f_stat;
        d["df_between"] = a.df_between;
        d["df_within"] = a.df_within;
        d["p_value"] = a.p_value;
        d["ss_between"] = a.ss_between;
        d["ss_within"] = a.ss_within;
        return d;
      },
      py::arg("groups"));
  m.def(
      "year_effects", [](const MultiRpysMatrix &mx, double alpha) { return effects_dict(year_effects(mx, alpha)); },
      py::arg("matrix"), py::arg("alpha") = 0.05);
  m.def("top_milestone_years", &top_milestone_years, py::arg("matrix"), py::arg("k") = 10);
  m.def("studentized_range_quantile", &dist::studentized_range_quantile, py::arg("alpha"), py::arg("k"),
        py::arg("df"));
  m.def("studentized_range_cdf", &dist::studentized_range_cdf, py::arg("q"), py::arg("k"), py::arg("df"));

  // --- validation
  py::class_<MilestoneEntry>(m, "Milestone")
      .def_readonly("year", &MilestoneEntry::year)
      .def_readonly("description", &MilestoneEntry::description)
      .def_property_readonly("articles", [](const MilestoneEntry &e) {
        std::vector<std::string> out;
        for (const auto &a : e.articles) out.push_back(a.to_string());
        return out;
      });
  m.def("load_milestones", &load_milestones, py::arg("path"));
  m.def("article_slot_count", &article_slot_count, py::arg("milestones"));
  m.def("distinct_milestone_years", &distinct_milestone_years, py::arg("milestones"));
  m.def(
      "evaluate_years",
      [](const std::vector<int> &candidates, const std::vector<MilestoneEntry> &ms,
         std::optional<std::pair<int, int>> span) {
        auto ev = evaluate_years(candidates, ms, span);
        return py::module_::import("json").attr("loads")(io::year_evaluation_to_json(ev).dump());
      },
      py::arg("candidates"), py::arg("milestones"), py::arg("span") = py::none());

  // --- rendering
  m.def(
      "render_spectrogram",
      [](const Spectrum &s, const std::vector<int> &peaks, int width, int height, int label_step,
         const std::string &title) {
        return render_spectrogram(s, peaks, plot_style(width, height, "viridis", label_step, title));
      },
      py::arg("spectrum"), py::arg("peaks"), py::arg("width") = 960, py::arg("height") = 480,
      py::arg("label_step") = 10, py::arg("title") = "");
  m.def(
      "render_heatmap",
      [](const MultiRpysMatrix &mx, int width, int height, const std::string &palette, int label_step,
         const std::string &title) {
        return render_heatmap(mx, plot_style(width, height, palette, label_step, title));
      },
      py::arg("matrix"), py::arg("width") = 960, py::arg("height") = 480, py::arg("palette") = "viridis",
      py::arg("label_step") = 10, py::arg("title") = "");

  // --- end to end
  m.def(
      "run_pipeline",
      [](const Corpus &corpus, const std::string &outdir, std::optional<std::string> milestones, std::size_t top_n,
         std::size_t top_k, unsigned threads) {
        RunConfig cfg;
        cfg.outdir = outdir;
        cfg.milestones_path = std::move(milestones);
        cfg.top_n = top_n;
        cfg.top_k_years = top_k;
        cfg.threads = threads;
        py::gil_scoped_release release;
        return run_pipeline(corpus, cfg);
      },
      py::arg("corpus"), py::arg("outdir"), py::arg("milestones") = py::none(), py::arg("top_n") = 10,
      py::arg("top_k") = 10, py::arg("threads") = 0);
}
