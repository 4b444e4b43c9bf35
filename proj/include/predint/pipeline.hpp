#pragma once

#include <filesystem>
#include <vector>

#include "predint/dataset.hpp"
#include "predint/dissimilarity.hpp"
#include "predint/lorenz.hpp"

namespace predint {

/// Everything a pipeline run depends on. Defaults mirror the Lorenz
/// forecasting experiment at desk scale.
struct RunConfig {
    LorenzParams lorenz;
    int n_y = 2;  // regressor lags
    SplitSizes splits{200, 1000, 1000};
    double tau = 0.05;
    double gamma_min = 0.0;
    double gamma_max = 3.0;
    double gamma_step = 0.1;
    int grid_size = 2001;
    double padding = 0.15;
    SolverSettings solver;
    double c_max = 0.0;  // 0 = auto: 10 * training set size
    double epsilon = 1e-2;
    std::filesystem::path out_dir = ".";
    int threads = 0;  // 0 = hardware concurrency; never affects values
};

void validate(const RunConfig& config);
std::vector<double> gamma_list(const RunConfig& config);
double resolve_c_max(const RunConfig& config, int train_size);

struct GenerateOutputs {
    std::filesystem::path train, validation, test, manifest;
};

/// simulate -> normalize -> build pairs -> split -> write the three dataset
/// files plus a manifest listing every parameter.
GenerateOutputs cmd_generate(const RunConfig& config);

/// Writes tuning_report.csv with one (gamma, c, log-likelihood, violations)
/// row per gamma, so the likelihood curve can be replotted from the file.
std::filesystem::path cmd_tune(const RunConfig& config, const std::filesystem::path& train_file,
                               const std::filesystem::path& validation_file);

/// One row per query regressor: lower, upper, median, width in normalized and
/// original units. The query file uses the dataset format; its output column
/// is ignored.
std::filesystem::path cmd_predict(const RunConfig& config, const std::filesystem::path& train_file,
                                  const std::filesystem::path& query_file, double gamma, double c,
                                  double tau);

/// Writes metrics.csv (proposed approach and quantile-regression baseline side
/// by side), per_sample.csv, and an aligned metrics_table.txt that is also
/// echoed to stdout.
std::filesystem::path cmd_evaluate(const RunConfig& config, const std::filesystem::path& train_file,
                                   const std::filesystem::path& test_file, double gamma, double c,
                                   double tau);

/// Density-fitting demo on a single-column data file: writes density.csv with
/// the empirical p.d.f. evaluated on an equally spaced grid.
std::filesystem::path cmd_pdf(const RunConfig& config, const std::filesystem::path& data_file,
                              double gamma, double c);

}  // namespace predint
