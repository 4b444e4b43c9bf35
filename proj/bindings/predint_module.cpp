#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "predint/conditional_density.hpp"
#include "predint/dataset.hpp"
#include "predint/dissimilarity.hpp"
#include "predint/linear_models.hpp"
#include "predint/lorenz.hpp"
#include "predint/output_grid.hpp"
#include "predint/parallel.hpp"
#include "predint/pipeline.hpp"
#include "predint/point_set.hpp"
#include "predint/tuning.hpp"

namespace py = pybind11;
using namespace predint;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Probabilistic interval prediction via dissimilarity-based conditional densities";

    py::class_<PointSet>(m, "PointSet")
        .def(py::init<Eigen::MatrixXd>(), py::arg("points"),
             "points: (n, N) array, one point per column")
        .def(py::init<Eigen::MatrixXd, Eigen::VectorXd>(), py::arg("points"), py::arg("weights"))
        .def_property_readonly("dim", &PointSet::dim)
        .def_property_readonly("size", &PointSet::size)
        .def_property_readonly("points", &PointSet::points)
        .def_property_readonly("weights", &PointSet::weights)
        .def_property_readonly("mean", &PointSet::mean)
        .def("marginal", &PointSet::marginal, py::arg("first_row"), py::arg("rows"));

    py::class_<SolverSettings>(m, "SolverSettings")
        .def(py::init<>())
        .def_readwrite("primal_tolerance", &SolverSettings::primal_tolerance)
        .def_readwrite("max_iterations", &SolverSettings::max_iterations);

    py::class_<DissimilarityResult>(m, "DissimilarityResult")
        .def_readonly("value", &DissimilarityResult::value)
        .def_readonly("lambda_", &DissimilarityResult::lambda)
        .def_readonly("dual_mu", &DissimilarityResult::dual_mu)
        .def_readonly("dual_nu", &DissimilarityResult::dual_nu)
        .def_readonly("primal_residual", &DissimilarityResult::primal_residual)
        .def_readonly("iterations", &DissimilarityResult::iterations);

    m.def("solve_dissimilarity", &solve_dissimilarity, py::arg("z"), py::arg("points"),
          py::arg("gamma"), py::arg("settings") = SolverSettings{});
    m.def("closed_form_gamma0", &closed_form_gamma0, py::arg("z"), py::arg("points"));
    m.def("inner_minimizer", &inner_minimizer, py::arg("c_i"), py::arg("gamma"), py::arg("w_i"));
    m.def("dual_objective", &dual_objective, py::arg("mu"), py::arg("nu"), py::arg("z"),
          py::arg("points"), py::arg("gamma"));
    m.def("sweep_first_coordinate", &sweep_first_coordinate, py::arg("points"),
          py::arg("first_values"), py::arg("tail"), py::arg("gamma"),
          py::arg("settings") = SolverSettings{});

    py::class_<OutputGrid>(m, "OutputGrid")
        .def(py::init<std::vector<double>>(), py::arg("values"))
        .def_property_readonly("values", &OutputGrid::values)
        .def("__len__", &OutputGrid::size);
    m.def(
        "build_output_grid",
        [](const std::vector<double>& outputs, int grid_size, double padding_fraction) {
            return build_output_grid(outputs, grid_size, padding_fraction);
        },
        py::arg("outputs"), py::arg("grid_size"), py::arg("padding_fraction"));

    py::class_<ConditionalDistribution>(m, "ConditionalDistribution")
        .def_readonly("grid", &ConditionalDistribution::grid)
        .def_readonly("probs", &ConditionalDistribution::probs)
        .def_readonly("dissimilarities", &ConditionalDistribution::dissimilarities);

    py::class_<PredictionInterval>(m, "PredictionInterval")
        .def_readonly("lower", &PredictionInterval::lower)
        .def_readonly("upper", &PredictionInterval::upper)
        .def_readonly("lower_index", &PredictionInterval::lower_index)
        .def_readonly("upper_index", &PredictionInterval::upper_index)
        .def_readonly("tau", &PredictionInterval::tau);

    m.def("probabilities_from_dissimilarities", &probabilities_from_dissimilarities,
          py::arg("dissimilarities"), py::arg("c"));
    m.def("interval_from_probabilities", &interval_from_probabilities, py::arg("grid"),
          py::arg("probs"), py::arg("tau"));
    m.def("conditional_distribution", &conditional_distribution, py::arg("x"), py::arg("points"),
          py::arg("grid"), py::arg("gamma"), py::arg("c"),
          py::arg("settings") = SolverSettings{});
    m.def("interval_estimate", &interval_estimate, py::arg("dist"), py::arg("tau"));
    m.def("conditioned_median", &conditioned_median, py::arg("dist"));
    m.def("central_estimate", &central_estimate, py::arg("x"), py::arg("points"), py::arg("gamma"),
          py::arg("settings") = SolverSettings{});
    m.def("empirical_pdf_on_grid", &empirical_pdf_on_grid, py::arg("points"), py::arg("eval_grid"),
          py::arg("gamma"), py::arg("c"), py::arg("settings") = SolverSettings{});

    py::class_<Scale>(m, "Scale")
        .def(py::init<>())
        .def(py::init([](double lo, double hi) { return Scale{lo, hi}; }), py::arg("min"),
             py::arg("max"))
        .def_readwrite("min", &Scale::min)
        .def_readwrite("max", &Scale::max)
        .def("denormalize", &Scale::denormalize)
        .def("denormalize_width", &Scale::denormalize_width);

    py::class_<PairSet>(m, "PairSet")
        .def(py::init<>())
        .def(py::init([](Eigen::MatrixXd x, Eigen::VectorXd y, Scale scale) {
                 return PairSet{std::move(x), std::move(y), scale};
             }),
             py::arg("x"), py::arg("y"), py::arg("scale") = Scale{})
        .def_readwrite("x", &PairSet::x)
        .def_readwrite("y", &PairSet::y)
        .def_readwrite("scale", &PairSet::scale)
        .def_property_readonly("size", &PairSet::size)
        .def("joint", &PairSet::joint);

    py::class_<SplitSizes>(m, "SplitSizes")
        .def(py::init([](int train, int validation, int test) {
                 return SplitSizes{train, validation, test};
             }),
             py::arg("train"), py::arg("validation"), py::arg("test"))
        .def_readwrite("train", &SplitSizes::train)
        .def_readwrite("validation", &SplitSizes::validation)
        .def_readwrite("test", &SplitSizes::test);

    m.def("normalize", &normalize, py::arg("series"));
    m.def("build_pairs", &build_pairs, py::arg("series"), py::arg("n_y"));
    m.def("split", &split, py::arg("pairs"), py::arg("sizes"));
    m.def("write_pairs_csv", &write_pairs_csv, py::arg("path"), py::arg("pairs"));
    m.def("read_pairs_csv", &read_pairs_csv, py::arg("path"));

    py::class_<LorenzParams>(m, "LorenzParams")
        .def(py::init<>())
        .def_readwrite("sigma", &LorenzParams::sigma)
        .def_readwrite("rho", &LorenzParams::rho)
        .def_readwrite("beta", &LorenzParams::beta)
        .def_readwrite("step", &LorenzParams::step)
        .def_readwrite("initial", &LorenzParams::initial)
        .def_readwrite("steps", &LorenzParams::steps);
    m.def("simulate_lorenz", &simulate_lorenz, py::arg("params"));

    py::class_<TuningReport::Entry>(m, "TuningEntry")
        .def_readonly("gamma", &TuningReport::Entry::gamma)
        .def_readonly("c", &TuningReport::Entry::c)
        .def_readonly("log_likelihood", &TuningReport::Entry::log_likelihood)
        .def_readonly("upper_violations", &TuningReport::Entry::upper_violations)
        .def_readonly("lower_violations", &TuningReport::Entry::lower_violations)
        .def_readonly("non_monotone_acceptance", &TuningReport::Entry::non_monotone_acceptance);
    py::class_<TuningReport>(m, "TuningReport")
        .def_readonly("gamma_star", &TuningReport::gamma_star)
        .def_readonly("c_star", &TuningReport::c_star)
        .def_readonly("entries", &TuningReport::entries);

    py::class_<EvaluationMetrics::Sample>(m, "EvaluationSample")
        .def_readonly("interval", &EvaluationMetrics::Sample::interval)
        .def_readonly("hit", &EvaluationMetrics::Sample::hit)
        .def_readonly("width", &EvaluationMetrics::Sample::width);
    py::class_<EvaluationMetrics>(m, "EvaluationMetrics")
        .def_readonly("empirical_probability", &EvaluationMetrics::empirical_probability)
        .def_readonly("mean_width", &EvaluationMetrics::mean_width)
        .def_readonly("mean_width_denorm", &EvaluationMetrics::mean_width_denorm)
        .def_readonly("per_sample", &EvaluationMetrics::per_sample);

    m.def("tune_c", &tune_c, py::arg("gamma"), py::arg("tau"), py::arg("train"),
          py::arg("validation"), py::arg("grid"), py::arg("c_max"), py::arg("epsilon"),
          py::arg("settings") = SolverSettings{});
    m.def("log_likelihood", &log_likelihood, py::arg("gamma"), py::arg("c"), py::arg("train"),
          py::arg("validation"), py::arg("grid"), py::arg("settings") = SolverSettings{});
    m.def("tune_gamma", &tune_gamma, py::arg("gammas"), py::arg("tau"), py::arg("train"),
          py::arg("validation"), py::arg("grid"), py::arg("c_max"), py::arg("epsilon"),
          py::arg("settings") = SolverSettings{});
    m.def("tune_gamma_multi", &tune_gamma_multi, py::arg("gammas"), py::arg("taus"),
          py::arg("train"), py::arg("validation"), py::arg("grid"), py::arg("c_max"),
          py::arg("epsilon"), py::arg("settings") = SolverSettings{});
    m.def("evaluate", &evaluate, py::arg("train"), py::arg("test"), py::arg("grid"),
          py::arg("gamma"), py::arg("c"), py::arg("tau"), py::arg("settings") = SolverSettings{});
    m.def("count_exact_duplicates", &count_exact_duplicates, py::arg("train"),
          py::arg("validation"));

    py::class_<LinearModel>(m, "LinearModel")
        .def_readonly("theta", &LinearModel::theta)
        .def_readonly("tau", &LinearModel::tau);
    m.def("fit_quantile_regression", &fit_quantile_regression, py::arg("pairs"), py::arg("tau"),
          py::arg("include_intercept") = true);
    m.def("fit_least_squares", &fit_least_squares, py::arg("pairs"));
    m.def("predict_linear", &predict_linear, py::arg("model"), py::arg("x"));
    m.def("pinball_loss", &pinball_loss, py::arg("pairs"), py::arg("theta"), py::arg("tau"),
          py::arg("include_intercept") = true);

    m.def("set_max_threads", &set_max_threads, py::arg("n"));
    m.def("max_threads", &max_threads);
}
