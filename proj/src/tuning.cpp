#include "predint/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "predint/errors.hpp"
#include "predint/parallel.hpp"

namespace predint {

namespace {

// Everything that depends on gamma but not on c: the dissimilarities of all
// grid values and of the exact validation output, per validation sample.
// Built once per gamma and shared by every bisection midpoint and by the
// likelihood evaluation.
struct DissimilarityCache {
    Eigen::MatrixXd grid_values;  // N_V x M
    Eigen::VectorXd exact;        // N_V
};

DissimilarityCache build_cache(double gamma, const PointSet& train, const ValidationSet& validation,
                               const OutputGrid& grid, const SolverSettings& settings) {
    const int n_v = validation.size();
    const int m = grid.size();
    DissimilarityCache cache;
    cache.grid_values.resize(n_v, m);
    cache.exact.resize(n_v);
    detail::parallel_tasks(n_v, [&](int s) {
        const Eigen::VectorXd x = validation.x.col(s);
        const std::vector<double> row =
            sweep_first_coordinate(train, grid.values(), x, gamma, settings);
        for (int j = 0; j < m; ++j) cache.grid_values(s, j) = row[static_cast<size_t>(j)];
        cache.exact(s) =
            sweep_first_coordinate(train, {validation.y(s)}, x, gamma, settings).front();
    });
    return cache;
}

struct ViolationCounts {
    int upper = 0;  // y_s above its interval
    int lower = 0;  // y_s below its interval
};

ViolationCounts count_violations(const DissimilarityCache& cache, const ValidationSet& validation,
                                 const OutputGrid& grid, double c, double tau) {
    const int n_v = validation.size();
    std::vector<unsigned char> above(static_cast<size_t>(n_v), 0);
    std::vector<unsigned char> below(static_cast<size_t>(n_v), 0);
    detail::parallel_tasks(n_v, [&](int s) {
        const Eigen::VectorXd probs =
            probabilities_from_dissimilarities(cache.grid_values.row(s).transpose(), c);
        const PredictionInterval interval = interval_from_probabilities(grid, probs, tau);
        above[static_cast<size_t>(s)] = validation.y(s) > interval.upper ? 1 : 0;
        below[static_cast<size_t>(s)] = validation.y(s) < interval.lower ? 1 : 0;
    });
    ViolationCounts counts;
    for (int s = 0; s < n_v; ++s) {
        counts.upper += above[static_cast<size_t>(s)];
        counts.lower += below[static_cast<size_t>(s)];
    }
    return counts;
}

bool passes_validation(const DissimilarityCache& cache, const ValidationSet& validation,
                       const OutputGrid& grid, double c, double tau) {
    const ViolationCounts counts = count_violations(cache, validation, grid, c, tau);
    const double fraction =
        static_cast<double>(std::max(counts.upper, counts.lower)) / validation.size();
    return fraction < tau;
}

double likelihood_from_cache(const DissimilarityCache& cache, double c) {
    const int n_v = static_cast<int>(cache.exact.size());
    double total = 0.0;
    for (int s = 0; s < n_v; ++s) {
        const double shift = cache.grid_values.row(s).minCoeff();
        const double log_denominator =
            std::log((-c * (cache.grid_values.row(s).array() - shift)).exp().sum());
        total += -c * (cache.exact(s) - shift) - log_denominator;
    }
    return total;
}

void check_tau_open(double tau) {
    if (!(tau > 0.0 && tau < 0.5))
        throw std::invalid_argument("tau must be in (0, 0.5) for validation tuning");
}

void check_validation(const PointSet& train, const ValidationSet& validation) {
    if (validation.size() < 1) throw std::invalid_argument("validation set is empty");
    if (validation.xdim() != train.dim() - 1)
        throw DimensionMismatch("validation regressors must have dimension train.dim()-1");
    const int duplicates = count_exact_duplicates(train, validation);
    if (duplicates > 0)
        std::cerr << "warning: " << duplicates
                  << " validation pair(s) exactly duplicate training points\n";
}

}  // namespace

BisectionResult bisect_concentration(const std::function<bool(double)>& accepts, double c_max,
                                     double epsilon) {
    if (!(c_max > 0.0)) throw InvalidBracket("bisect_concentration: c_max must be > 0");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("bisect_concentration: epsilon must be > 0");

    BisectionResult result;
    result.c_max_accepted = accepts(c_max);
    double max_accepted =
        result.c_max_accepted ? c_max : -std::numeric_limits<double>::infinity();
    double min_rejected =
        result.c_max_accepted ? std::numeric_limits<double>::infinity() : c_max;

    double lo = 0.0;
    double hi = c_max;
    while (hi - lo >= epsilon) {
        const double mid = 0.5 * (lo + hi);
        if (accepts(mid)) {
            lo = mid;
            max_accepted = std::max(max_accepted, mid);
        } else {
            hi = mid;
            min_rejected = std::min(min_rejected, mid);
        }
    }
    result.c = lo;
    result.non_monotone = max_accepted > min_rejected;
    return result;
}

double tune_c(double gamma, double tau, const PointSet& train, const ValidationSet& validation,
              const OutputGrid& grid, double c_max, double epsilon,
              const SolverSettings& settings) {
    check_tau_open(tau);
    if (!(c_max > 0.0)) throw InvalidBracket("tune_c: c_max must be > 0");
    check_validation(train, validation);

    const DissimilarityCache cache = build_cache(gamma, train, validation, grid, settings);
    const BisectionResult result = bisect_concentration(
        [&](double c) { return passes_validation(cache, validation, grid, c, tau); }, c_max,
        epsilon);
    if (result.c_max_accepted)
        std::cerr << "warning: c_max=" << c_max
                  << " itself passes the validation test; consider raising it\n";
    return result.c;
}

double log_likelihood(double gamma, double c, const PointSet& train,
                      const ValidationSet& validation, const OutputGrid& grid,
                      const SolverSettings& settings) {
    if (!(c >= 0.0)) throw std::invalid_argument("log_likelihood: c must be >= 0");
    check_validation(train, validation);
    const DissimilarityCache cache = build_cache(gamma, train, validation, grid, settings);
    return likelihood_from_cache(cache, c);
}

TuningReport tune_gamma(const std::vector<double>& gammas, double tau, const PointSet& train,
                        const ValidationSet& validation, const OutputGrid& grid, double c_max,
                        double epsilon, const SolverSettings& settings) {
    return tune_gamma_multi(gammas, {tau}, train, validation, grid, c_max, epsilon,
                            settings)
        .front();
}

std::vector<TuningReport> tune_gamma_multi(const std::vector<double>& gammas,
                                           const std::vector<double>& taus, const PointSet& train,
                                           const ValidationSet& validation, const OutputGrid& grid,
                                           double c_max, double epsilon,
                                           const SolverSettings& settings) {
    if (gammas.empty()) throw std::invalid_argument("tune_gamma: empty gamma set");
    for (size_t i = 0; i < gammas.size(); ++i) {
        if (!(gammas[i] >= 0.0)) throw std::invalid_argument("tune_gamma: gammas must be >= 0");
        if (i > 0 && !(gammas[i] > gammas[i - 1]))
            throw std::invalid_argument("tune_gamma: gammas must be sorted ascending");
    }
    if (taus.empty()) throw std::invalid_argument("tune_gamma: empty tau set");
    for (double tau : taus) check_tau_open(tau);
    if (!(c_max > 0.0)) throw InvalidBracket("tune_gamma: c_max must be > 0");
    check_validation(train, validation);

    std::vector<TuningReport> reports(taus.size());
    for (auto& report : reports) report.entries.reserve(gammas.size());
    std::vector<int> c_max_accepted_count(taus.size(), 0);

    for (double gamma : gammas) {
        const DissimilarityCache cache = build_cache(gamma, train, validation, grid, settings);
        for (size_t ti = 0; ti < taus.size(); ++ti) {
            const double tau = taus[ti];
            const BisectionResult bisection = bisect_concentration(
                [&](double c) { return passes_validation(cache, validation, grid, c, tau); },
                c_max, epsilon);
            if (bisection.c_max_accepted) ++c_max_accepted_count[ti];
            const ViolationCounts counts =
                count_violations(cache, validation, grid, bisection.c, tau);

            TuningReport::Entry entry;
            entry.gamma = gamma;
            entry.c = bisection.c;
            entry.log_likelihood = likelihood_from_cache(cache, bisection.c);
            entry.upper_violations = counts.upper;
            entry.lower_violations = counts.lower;
            entry.non_monotone_acceptance = bisection.non_monotone;
            reports[ti].entries.push_back(entry);
        }
    }

    for (size_t ti = 0; ti < taus.size(); ++ti) {
        auto& report = reports[ti];
        size_t best = 0;
        for (size_t i = 1; i < report.entries.size(); ++i)
            if (report.entries[i].log_likelihood > report.entries[best].log_likelihood) best = i;
        report.gamma_star = report.entries[best].gamma;
        report.c_star = report.entries[best].c;
        if (c_max_accepted_count[ti] > 0)
            std::cerr << "warning: c_max=" << c_max << " passed the validation test for "
                      << c_max_accepted_count[ti] << " gamma value(s) at tau=" << taus[ti]
                      << "; consider raising it\n";
    }
    return reports;
}

EvaluationMetrics evaluate(const PointSet& train, const ValidationSet& test,
                           const OutputGrid& grid, double gamma, double c, double tau,
                           const SolverSettings& settings) {
    if (test.size() < 1) throw std::invalid_argument("evaluate: empty test set");
    if (test.xdim() != train.dim() - 1)
        throw DimensionMismatch("evaluate: test regressors must have dimension train.dim()-1");
    if (!(c >= 0.0)) throw std::invalid_argument("evaluate: c must be >= 0");

    const int n = test.size();
    EvaluationMetrics metrics;
    metrics.per_sample.resize(static_cast<size_t>(n));
    detail::parallel_tasks(n, [&](int s) {
        const Eigen::VectorXd x = test.x.col(s);
        const std::vector<double> row =
            sweep_first_coordinate(train, grid.values(), x, gamma, settings);
        const Eigen::Map<const Eigen::VectorXd> d(row.data(),
                                                  static_cast<Eigen::Index>(row.size()));
        const Eigen::VectorXd probs = probabilities_from_dissimilarities(d, c);
        const PredictionInterval interval = interval_from_probabilities(grid, probs, tau);
        auto& sample = metrics.per_sample[static_cast<size_t>(s)];
        sample.interval = interval;
        sample.hit = interval.lower <= test.y(s) && test.y(s) <= interval.upper;
        sample.width = interval.upper - interval.lower;
    });

    int hits = 0;
    double width_sum = 0.0;
    for (const auto& sample : metrics.per_sample) {
        hits += sample.hit ? 1 : 0;
        width_sum += sample.width;
    }
    metrics.empirical_probability = static_cast<double>(hits) / n;
    metrics.mean_width = width_sum / n;
    metrics.mean_width_denorm = test.scale.denormalize_width(metrics.mean_width);
    return metrics;
}

int count_exact_duplicates(const PointSet& train, const ValidationSet& validation) {
    if (validation.xdim() != train.dim() - 1) return 0;
    int duplicates = 0;
    for (int s = 0; s < validation.size(); ++s) {
        for (int i = 0; i < train.size(); ++i) {
            if (train.points()(0, i) == validation.y(s) &&
                train.points().col(i).tail(validation.xdim()) == validation.x.col(s)) {
                ++duplicates;
                break;
            }
        }
    }
    return duplicates;
}

}  // namespace predint
