#include "predint/pipeline.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "predint/conditional_density.hpp"
#include "predint/errors.hpp"
#include "predint/linear_models.hpp"
#include "predint/output_grid.hpp"
#include "predint/parallel.hpp"
#include "predint/point_set.hpp"
#include "predint/tuning.hpp"

namespace predint {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

void ensure_out_dir(const RunConfig& config) {
    if (config.out_dir.empty()) throw std::invalid_argument("output directory not set");
    std::filesystem::create_directories(config.out_dir);
}

void write_config_manifest(std::ofstream& out, const RunConfig& config) {
    out << "n-y = " << config.n_y << "\n";
    out << "split = " << config.splits.train << "," << config.splits.validation << ","
        << config.splits.test << "\n";
    out << "tau = " << fmt(config.tau) << "\n";
    out << "gamma-min = " << fmt(config.gamma_min) << "\n";
    out << "gamma-max = " << fmt(config.gamma_max) << "\n";
    out << "gamma-step = " << fmt(config.gamma_step) << "\n";
    out << "grid-size = " << config.grid_size << "\n";
    out << "padding = " << fmt(config.padding) << "\n";
    out << "tolerance = " << fmt(config.solver.primal_tolerance) << "\n";
    out << "max-iterations = " << config.solver.max_iterations << "\n";
    out << "c-max = " << fmt(config.c_max) << "\n";
    out << "epsilon = " << fmt(config.epsilon) << "\n";
    out << "steps = " << config.lorenz.steps << "\n";
    out << "time-step = " << fmt(config.lorenz.step) << "\n";
    out << "sigma = " << fmt(config.lorenz.sigma) << "\n";
    out << "rho = " << fmt(config.lorenz.rho) << "\n";
    out << "beta = " << fmt(config.lorenz.beta) << "\n";
    out << "initial = " << fmt(config.lorenz.initial[0]) << "," << fmt(config.lorenz.initial[1])
        << "," << fmt(config.lorenz.initial[2]) << "\n";
    out << "threads = " << config.threads << "\n";
}

void write_manifest(const RunConfig& config, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& extra) {
    auto out = open_out(config.out_dir / (command + "_manifest.txt"));
    out << "command = " << command << "\n";
    for (const auto& [key, value] : extra) out << key << " = " << value << "\n";
    write_config_manifest(out, config);
}

OutputGrid grid_from_train(const RunConfig& config, const PairSet& train) {
    return build_output_grid(std::span<const double>(train.y.data(),
                                                     static_cast<size_t>(train.y.size())),
                             config.grid_size, config.padding);
}

}  // namespace

void validate(const RunConfig& config) {
    if (!(config.tau > 0.0 && config.tau < 0.5))
        throw std::invalid_argument("config: tau must be in (0, 0.5)");
    if (!(config.gamma_step > 0.0))
        throw std::invalid_argument("config: gamma-step must be > 0");
    if (!(config.gamma_min >= 0.0) || !(config.gamma_max >= config.gamma_min))
        throw std::invalid_argument("config: need 0 <= gamma-min <= gamma-max");
    if (config.grid_size < 2) throw std::invalid_argument("config: grid-size must be >= 2");
    if (!(config.padding >= 0.0)) throw std::invalid_argument("config: padding must be >= 0");
    if (!(config.epsilon > 0.0)) throw std::invalid_argument("config: epsilon must be > 0");
    if (config.n_y < 1) throw std::invalid_argument("config: n-y must be >= 1");
}

std::vector<double> gamma_list(const RunConfig& config) {
    std::vector<double> gammas;
    for (int k = 0;; ++k) {
        const double g = config.gamma_min + k * config.gamma_step;
        if (g > config.gamma_max + 0.5 * config.gamma_step) break;
        gammas.push_back(g);
    }
    return gammas;
}

double resolve_c_max(const RunConfig& config, int train_size) {
    return config.c_max > 0.0 ? config.c_max : 10.0 * train_size;
}

GenerateOutputs cmd_generate(const RunConfig& config) {
    validate(config);
    ensure_out_dir(config);
    set_max_threads(config.threads);

    const auto states = simulate_lorenz(config.lorenz);
    std::vector<double> series(states.size());
    for (size_t i = 0; i < states.size(); ++i) series[i] = states[i][0];

    auto [normalized, scale] = normalize(series);
    PairSet pairs = build_pairs(normalized, config.n_y);
    pairs.scale = scale;
    const auto segments = split(pairs, config.splits);

    GenerateOutputs outputs;
    outputs.train = config.out_dir / "train.csv";
    outputs.validation = config.out_dir / "validation.csv";
    outputs.test = config.out_dir / "test.csv";
    outputs.manifest = config.out_dir / "generate_manifest.txt";
    write_pairs_csv(outputs.train, segments[0]);
    write_pairs_csv(outputs.validation, segments[1]);
    write_pairs_csv(outputs.test, segments[2]);
    write_manifest(config, "generate",
                   {{"pairs-total", std::to_string(pairs.size())},
                    {"scale-min", fmt(scale.min)},
                    {"scale-max", fmt(scale.max)}});
    return outputs;
}

std::filesystem::path cmd_tune(const RunConfig& config, const std::filesystem::path& train_file,
                               const std::filesystem::path& validation_file) {
    validate(config);
    ensure_out_dir(config);
    set_max_threads(config.threads);

    const PairSet train = read_pairs_csv(train_file);
    const PairSet validation = read_pairs_csv(validation_file);
    const PointSet points(train.joint());
    const OutputGrid grid = grid_from_train(config, train);
    const double c_max = resolve_c_max(config, train.size());

    const TuningReport report = tune_gamma(gamma_list(config), config.tau, points, validation,
                                           grid, c_max, config.epsilon, config.solver);

    const auto path = config.out_dir / "tuning_report.csv";
    auto out = open_out(path);
    out << "# gamma_star=" << fmt(report.gamma_star) << " c_star=" << fmt(report.c_star) << "\n";
    out << "gamma,c,log_likelihood,upper_violations,lower_violations,non_monotone\n";
    for (const auto& entry : report.entries)
        out << fmt(entry.gamma) << "," << fmt(entry.c) << "," << fmt(entry.log_likelihood) << ","
            << entry.upper_violations << "," << entry.lower_violations << ","
            << (entry.non_monotone_acceptance ? 1 : 0) << "\n";
    write_manifest(config, "tune",
                   {{"train", train_file.string()},
                    {"validation", validation_file.string()},
                    {"resolved-c-max", fmt(c_max)},
                    {"gamma-star", fmt(report.gamma_star)},
                    {"c-star", fmt(report.c_star)}});
    return path;
}

std::filesystem::path cmd_predict(const RunConfig& config, const std::filesystem::path& train_file,
                                  const std::filesystem::path& query_file, double gamma, double c,
                                  double tau) {
    validate(config);
    ensure_out_dir(config);
    set_max_threads(config.threads);

    const PairSet train = read_pairs_csv(train_file);
    const PairSet query = read_pairs_csv(query_file);
    const PointSet points(train.joint());
    const OutputGrid grid = grid_from_train(config, train);
    const Scale scale = train.scale;

    const auto path = config.out_dir / "intervals.csv";
    auto out = open_out(path);
    out << "lower,upper,median,width,lower_orig,upper_orig,median_orig,width_orig\n";
    for (int s = 0; s < query.size(); ++s) {
        const ConditionalDistribution dist =
            conditional_distribution(query.x.col(s), points, grid, gamma, c, config.solver);
        const PredictionInterval interval = interval_estimate(dist, tau);
        const double median = conditioned_median(dist);
        const double width = interval.upper - interval.lower;
        out << fmt(interval.lower) << "," << fmt(interval.upper) << "," << fmt(median) << ","
            << fmt(width) << "," << fmt(scale.denormalize(interval.lower)) << ","
            << fmt(scale.denormalize(interval.upper)) << "," << fmt(scale.denormalize(median))
            << "," << fmt(scale.denormalize_width(width)) << "\n";
    }
    write_manifest(config, "predict",
                   {{"train", train_file.string()},
                    {"query", query_file.string()},
                    {"gamma", fmt(gamma)},
                    {"c", fmt(c)},
                    {"predict-tau", fmt(tau)}});
    return path;
}

std::filesystem::path cmd_evaluate(const RunConfig& config, const std::filesystem::path& train_file,
                                   const std::filesystem::path& test_file, double gamma, double c,
                                   double tau) {
    validate(config);
    ensure_out_dir(config);
    set_max_threads(config.threads);

    const PairSet train = read_pairs_csv(train_file);
    const PairSet test = read_pairs_csv(test_file);
    const PointSet points(train.joint());
    const OutputGrid grid = grid_from_train(config, train);

    const EvaluationMetrics metrics =
        evaluate(points, test, grid, gamma, c, tau, config.solver);

    // Quantile-regression baseline at (tau, 1 - tau) on the same split.
    const LinearModel lower_model = fit_quantile_regression(train, tau);
    const LinearModel upper_model = fit_quantile_regression(train, 1.0 - tau);
    int qr_hits = 0;
    double qr_width_sum = 0.0;
    std::vector<std::array<double, 2>> qr_bounds(static_cast<size_t>(test.size()));
    for (int s = 0; s < test.size(); ++s) {
        const double lo = predict_linear(lower_model, test.x.col(s));
        const double hi = predict_linear(upper_model, test.x.col(s));
        qr_bounds[static_cast<size_t>(s)] = {lo, hi};
        if (lo <= test.y(s) && test.y(s) <= hi) ++qr_hits;
        qr_width_sum += hi - lo;
    }
    const double qr_probability = static_cast<double>(qr_hits) / test.size();
    const double qr_mean_width = qr_width_sum / test.size();
    const double qr_mean_width_denorm = test.scale.denormalize_width(qr_mean_width);

    const auto path = config.out_dir / "metrics.csv";
    {
        auto out = open_out(path);
        out << "method,dataset_length,empirical_probability,mean_width,mean_width_orig\n";
        out << "proposed," << train.size() << "," << fmt(metrics.empirical_probability) << ","
            << fmt(metrics.mean_width) << "," << fmt(metrics.mean_width_denorm) << "\n";
        out << "quantile_regression," << train.size() << "," << fmt(qr_probability) << ","
            << fmt(qr_mean_width) << "," << fmt(qr_mean_width_denorm) << "\n";
    }
    {
        auto out = open_out(config.out_dir / "per_sample.csv");
        out << "index,y,lower,upper,hit,width,qr_lower,qr_upper,qr_hit,qr_width\n";
        for (int s = 0; s < test.size(); ++s) {
            const auto& sample = metrics.per_sample[static_cast<size_t>(s)];
            const auto& [qlo, qhi] = qr_bounds[static_cast<size_t>(s)];
            const bool qr_hit = qlo <= test.y(s) && test.y(s) <= qhi;
            out << s << "," << fmt(test.y(s)) << "," << fmt(sample.interval.lower) << ","
                << fmt(sample.interval.upper) << "," << (sample.hit ? 1 : 0) << ","
                << fmt(sample.width) << "," << fmt(qlo) << "," << fmt(qhi) << ","
                << (qr_hit ? 1 : 0) << "," << fmt(qhi - qlo) << "\n";
        }
    }

    std::ostringstream table;
    table << "Method               | Dataset length | Empirical Probability | Interval Width\n";
    table << "proposed             | " << std::setw(14) << train.size() << " | " << std::setw(21)
          << fmt4(metrics.empirical_probability) << " | " << std::setw(14)
          << fmt4(metrics.mean_width_denorm) << "\n";
    table << "quantile regression  | " << std::setw(14) << train.size() << " | " << std::setw(21)
          << fmt4(qr_probability) << " | " << std::setw(14) << fmt4(qr_mean_width_denorm) << "\n";
    std::cout << table.str();
    {
        auto out = open_out(config.out_dir / "metrics_table.txt");
        out << table.str();
    }

    write_manifest(config, "evaluate",
                   {{"train", train_file.string()},
                    {"test", test_file.string()},
                    {"gamma", fmt(gamma)},
                    {"c", fmt(c)},
                    {"evaluate-tau", fmt(tau)}});
    return path;
}

std::filesystem::path cmd_pdf(const RunConfig& config, const std::filesystem::path& data_file,
                              double gamma, double c) {
    validate(config);
    ensure_out_dir(config);
    set_max_threads(config.threads);

    const std::vector<double> values = read_values_csv(data_file);
    Eigen::MatrixXd data(1, static_cast<Eigen::Index>(values.size()));
    for (size_t i = 0; i < values.size(); ++i) data(0, static_cast<Eigen::Index>(i)) = values[i];
    const PointSet points(data);

    const OutputGrid grid = build_output_grid(values, config.grid_size, config.padding);
    std::vector<Eigen::VectorXd> eval_grid;
    eval_grid.reserve(static_cast<size_t>(grid.size()));
    for (double v : grid.values()) eval_grid.push_back(Eigen::VectorXd::Constant(1, v));

    const std::vector<double> density =
        empirical_pdf_on_grid(points, eval_grid, gamma, c, config.solver);

    const auto path = config.out_dir / "density.csv";
    auto out = open_out(path);
    out << "z,density\n";
    for (size_t i = 0; i < density.size(); ++i)
        out << fmt(grid.value(static_cast<int>(i))) << "," << fmt(density[i]) << "\n";
    write_manifest(config, "pdf",
                   {{"data", data_file.string()}, {"gamma", fmt(gamma)}, {"c", fmt(c)}});
    return path;
}

}  // namespace predint
