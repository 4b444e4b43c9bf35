"""Probabilistic interval prediction via dissimilarity-based conditional densities."""

from ._core import (
    ConditionalDistribution,
    DissimilarityResult,
    EvaluationMetrics,
    EvaluationSample,
    LinearModel,
    LorenzParams,
    OutputGrid,
    PairSet,
    PointSet,
    PredictionInterval,
    Scale,
    SolverSettings,
    SplitSizes,
    TuningEntry,
    TuningReport,
    build_output_grid,
    build_pairs,
    central_estimate,
    closed_form_gamma0,
    conditional_distribution,
    conditioned_median,
    count_exact_duplicates,
    dual_objective,
    empirical_pdf_on_grid,
    evaluate,
    fit_least_squares,
    fit_quantile_regression,
    inner_minimizer,
    interval_estimate,
    interval_from_probabilities,
    log_likelihood,
    max_threads,
    normalize,
    pinball_loss,
    predict_linear,
    probabilities_from_dissimilarities,
    read_pairs_csv,
    set_max_threads,
    simulate_lorenz,
    solve_dissimilarity,
    split,
    sweep_first_coordinate,
    tune_c,
    tune_gamma,
    tune_gamma_multi,
    write_pairs_csv,
)

__version__ = "0.1.0"
