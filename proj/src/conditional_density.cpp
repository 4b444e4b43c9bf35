#include "predint/conditional_density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "predint/errors.hpp"
#include "predint/parallel.hpp"

namespace predint {

namespace {

// Compensated summation; keeps the normalization error well below the 1e-12
// budget even on 10^4-point grids.
double kahan_sum(const Eigen::VectorXd& v) {
    double sum = 0.0, carry = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double t = v(i) - carry;
        const double s = sum + t;
        carry = (s - sum) - t;
        sum = s;
    }
    return sum;
}

void check_concentration(double c) {
    if (!(c >= 0.0)) throw std::invalid_argument("concentration c must be >= 0");
}

}  // namespace

Eigen::VectorXd probabilities_from_dissimilarities(const Eigen::VectorXd& dissimilarities,
                                                   double c) {
    check_concentration(c);
    if (dissimilarities.size() == 0)
        throw std::invalid_argument("probabilities_from_dissimilarities: empty input");
    const double shift = dissimilarities.minCoeff();
    Eigen::VectorXd probs = (-c * (dissimilarities.array() - shift)).exp();
    probs /= kahan_sum(probs);
    return probs;
}

PredictionInterval interval_from_probabilities(const OutputGrid& grid,
                                               const Eigen::VectorXd& probs, double tau) {
    if (!(tau > 0.0 && tau <= 0.5))
        throw std::invalid_argument("interval_from_probabilities: tau must be in (0, 0.5]");
    if (probs.size() != grid.size())
        throw DimensionMismatch("interval_from_probabilities: probs/grid size mismatch");

    const int m = grid.size();
    const double target = 1.0 - tau;

    int upper = m - 1;
    double cum = 0.0;
    for (int j = 0; j < m; ++j) {
        cum += probs(j);
        if (cum >= target) {
            upper = j;
            break;
        }
    }
    int lower = 0;
    cum = 0.0;
    for (int j = m - 1; j >= 0; --j) {
        cum += probs(j);
        if (cum >= target) {
            lower = j;
            break;
        }
    }
    // At tau = 0.5 an exactly balanced split can order the two quantile
    // indices either way; normalize so lower <= upper.
    if (lower > upper) std::swap(lower, upper);

    PredictionInterval interval;
    interval.lower = grid.value(lower);
    interval.upper = grid.value(upper);
    interval.lower_index = lower;
    interval.upper_index = upper;
    interval.tau = tau;
    return interval;
}

ConditionalDistribution conditional_distribution(const Eigen::VectorXd& x, const PointSet& points,
                                                 const OutputGrid& grid, double gamma, double c,
                                                 const SolverSettings& settings) {
    check_concentration(c);
    if (x.size() != points.dim() - 1)
        throw DimensionMismatch("conditional_distribution: regressor must have dimension dim-1");

    const std::vector<double> d = sweep_first_coordinate(points, grid.values(), x, gamma, settings);
    Eigen::VectorXd dissimilarities =
        Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
    Eigen::VectorXd probs = probabilities_from_dissimilarities(dissimilarities, c);
    return ConditionalDistribution{grid, std::move(probs), std::move(dissimilarities)};
}

PredictionInterval interval_estimate(const ConditionalDistribution& dist, double tau) {
    return interval_from_probabilities(dist.grid, dist.probs, tau);
}

double conditioned_median(const ConditionalDistribution& dist) {
    const PredictionInterval half = interval_estimate(dist, 0.5);
    return 0.5 * (half.lower + half.upper);
}

double central_estimate(const Eigen::VectorXd& x, const PointSet& points, double gamma,
                        const SolverSettings& settings) {
    if (points.dim() < 2)
        throw DimensionMismatch("central_estimate: stored points must be stacked [y; x]");
    if (x.size() != points.dim() - 1)
        throw DimensionMismatch("central_estimate: regressor must have dimension dim-1");

    const PointSet regressors = points.marginal(1, points.dim() - 1);
    const DissimilarityResult result = solve_dissimilarity(x, regressors, gamma, settings);
    return points.points().row(0).dot(result.lambda);
}

std::vector<double> empirical_pdf_on_grid(const PointSet& points,
                                          const std::vector<Eigen::VectorXd>& eval_grid,
                                          double gamma, double c,
                                          const SolverSettings& settings) {
    check_concentration(c);
    if (eval_grid.empty()) throw std::invalid_argument("empirical_pdf_on_grid: empty grid");
    const Eigen::Index n = points.dim();
    for (const auto& z : eval_grid)
        if (z.size() != n) throw DimensionMismatch("empirical_pdf_on_grid: grid point dimension");

    const size_t count = eval_grid.size();
    Eigen::VectorXd values(static_cast<Eigen::Index>(count));
    if (n == 1) {
        std::vector<double> ys(count);
        for (size_t i = 0; i < count; ++i) ys[i] = eval_grid[i](0);
        const std::vector<double> d =
            sweep_first_coordinate(points, ys, Eigen::VectorXd(), gamma, settings);
        for (size_t i = 0; i < count; ++i) values(static_cast<Eigen::Index>(i)) = d[i];
    } else {
        constexpr int kChunk = 64;
        const int chunks = static_cast<int>((count + kChunk - 1) / kChunk);
        detail::parallel_tasks(chunks, [&](int chunk) {
            const size_t begin = static_cast<size_t>(chunk) * kChunk;
            const size_t end = std::min(begin + kChunk, count);
            for (size_t i = begin; i < end; ++i)
                values(static_cast<Eigen::Index>(i)) =
                    solve_dissimilarity(eval_grid[i], points, gamma, settings).value;
        });
    }

    // Cell volume from the per-axis spacing of the (tensor) grid.
    double volume = 1.0;
    for (Eigen::Index axis = 0; axis < n; ++axis) {
        std::vector<double> coords(count);
        for (size_t i = 0; i < count; ++i) coords[i] = eval_grid[i](axis);
        std::sort(coords.begin(), coords.end());
        coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
        if (coords.size() < 2)
            throw std::invalid_argument(
                "empirical_pdf_on_grid: need >= 2 distinct coordinates per axis");
        volume *= (coords.back() - coords.front()) / static_cast<double>(coords.size() - 1);
    }

    const double shift = values.minCoeff();
    Eigen::VectorXd q = (-c * (values.array() - shift)).exp();
    const double normalizer = kahan_sum(q) * volume;
    std::vector<double> density(count);
    for (size_t i = 0; i < count; ++i)
        density[i] = q(static_cast<Eigen::Index>(i)) / normalizer;
    return density;
}

}  // namespace predint
