// Command-line front end for the interval prediction pipeline:
//   predint generate | tune | predict | evaluate | pdf
// Options can come from a flat `key = value` config file (--config) with
// command-line flags taking precedence.

#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "predint/pipeline.hpp"

namespace {

struct CliPaths {
    std::string train, validation, test, query, data;
};

void split_option(const std::vector<int>& values, predint::SplitSizes& sizes) {
    sizes.train = values[0];
    sizes.validation = values[1];
    sizes.test = values[2];
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probabilistic interval prediction from stored measurements"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key = value configuration file");

    predint::RunConfig config;
    CliPaths paths;
    double gamma = 0.0;
    double c = 0.0;
    std::vector<int> split_values{config.splits.train, config.splits.validation,
                                  config.splits.test};

    app.add_option("--out", config.out_dir, "output directory")->capture_default_str();
    app.add_option("--tau", config.tau, "one-sided quantile level in (0, 0.5)")
        ->capture_default_str();
    app.add_option("--grid-size", config.grid_size, "number of output grid points")
        ->capture_default_str();
    app.add_option("--padding", config.padding, "grid padding as a fraction of the output range")
        ->capture_default_str();
    app.add_option("--gamma-min", config.gamma_min, "smallest gamma in the tuning sweep")
        ->capture_default_str();
    app.add_option("--gamma-max", config.gamma_max, "largest gamma in the tuning sweep")
        ->capture_default_str();
    app.add_option("--gamma-step", config.gamma_step, "gamma sweep step")->capture_default_str();
    app.add_option("--c-max", config.c_max, "bisection upper bracket (0 = 10 * train size)")
        ->capture_default_str();
    app.add_option("--epsilon", config.epsilon, "bisection bracket width")->capture_default_str();
    app.add_option("--tolerance", config.solver.primal_tolerance, "solver primal tolerance")
        ->capture_default_str();
    app.add_option("--max-iterations", config.solver.max_iterations, "solver iteration budget")
        ->capture_default_str();
    app.add_option("--threads", config.threads, "worker threads (0 = hardware)")
        ->capture_default_str();

    auto* generate = app.add_subcommand("generate", "simulate, normalize, split, write datasets");
    generate->fallthrough();
    generate->add_option("--steps", config.lorenz.steps, "series length, initial state included")
        ->capture_default_str();
    generate->add_option("--time-step", config.lorenz.step, "integration step")
        ->capture_default_str();
    generate->add_option("--sigma", config.lorenz.sigma, "")->capture_default_str();
    generate->add_option("--rho", config.lorenz.rho, "")->capture_default_str();
    generate->add_option("--beta", config.lorenz.beta, "")->capture_default_str();
    generate
        ->add_option("--initial", config.lorenz.initial, "initial state o0 p0 q0")
        ->expected(3);
    generate->add_option("--n-y", config.n_y, "regressor lags")->capture_default_str();
    generate
        ->add_option_function<std::vector<int>>(
            "--split", [&](const std::vector<int>& v) { split_option(v, config.splits); },
            "train,validation,test sizes")
        ->delimiter(',')
        ->expected(3);

    auto* tune = app.add_subcommand("tune", "select gamma and c on a validation set");
    tune->fallthrough();
    tune->add_option("--train", paths.train, "training dataset file")->required();
    tune->add_option("--validation", paths.validation, "validation dataset file")->required();

    auto* predict = app.add_subcommand("predict", "interval predictions for query regressors");
    predict->fallthrough();
    predict->add_option("--train", paths.train, "training dataset file")->required();
    predict->add_option("--query", paths.query, "query dataset file (output column ignored)")
        ->required();
    predict->add_option("--gamma", gamma, "dissimilarity sparsity weight")->required();
    predict->add_option("--c", c, "density concentration")->required();

    auto* evaluate = app.add_subcommand("evaluate", "coverage and width metrics on a test set");
    evaluate->fallthrough();
    evaluate->add_option("--train", paths.train, "training dataset file")->required();
    evaluate->add_option("--test", paths.test, "test dataset file")->required();
    evaluate->add_option("--gamma", gamma, "dissimilarity sparsity weight")->required();
    evaluate->add_option("--c", c, "density concentration")->required();

    auto* pdf = app.add_subcommand("pdf", "empirical density fit on a single-column data file");
    pdf->fallthrough();
    pdf->add_option("--data", paths.data, "data file, one value per row")->required();
    pdf->add_option("--gamma", gamma, "dissimilarity sparsity weight")->required();
    pdf->add_option("--c", c, "density concentration")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            const auto outputs = predint::cmd_generate(config);
            std::cout << "wrote " << outputs.train.string() << ", " << outputs.validation.string()
                      << ", " << outputs.test.string() << "\n";
        } else if (tune->parsed()) {
            const auto report = predint::cmd_tune(config, paths.train, paths.validation);
            std::cout << "wrote " << report.string() << "\n";
        } else if (predict->parsed()) {
            const auto intervals =
                predint::cmd_predict(config, paths.train, paths.query, gamma, c, config.tau);
            std::cout << "wrote " << intervals.string() << "\n";
        } else if (evaluate->parsed()) {
            const auto metrics =
                predint::cmd_evaluate(config, paths.train, paths.test, gamma, c, config.tau);
            std::cout << "wrote " << metrics.string() << "\n";
        } else if (pdf->parsed()) {
            const auto density = predint::cmd_pdf(config, paths.data, gamma, c);
            std::cout << "wrote " << density.string() << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
