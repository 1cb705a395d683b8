"""Reference publication year spectroscopy: ingest WoS exports, disambiguate
cited references, detrend per-year counts and find milestone years."""

from . import _core
from ._core import (  # noqa: F401
    CitedRef,
    CitingRecord,
    Corpus,
    IngestError,
    Matrix,
    Milestone,
    MilestoneError,
    PipelineError,
    RefCluster,
    RenderError,
    Spectrum,
    article_slot_count,
    build_matrix,
    build_spectrum,
    cluster_refs,
    corpus_union,
    detect_peaks,
    distinct_milestone_years,
    evaluate_years,
    load_milestones,
    one_way_anova,
    parse_cited_ref,
    parse_export,
    parse_export_file,
    rank_transform,
    render_heatmap,
    render_spectrogram,
    run_pipeline,
    similarity,
    spectrum_from_counts,
    studentized_range_cdf,
    studentized_range_quantile,
    top_milestone_years,
    top_references,
    year_effects,
)

__version__ = "0.1.0"
