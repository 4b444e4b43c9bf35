#pragma once

#include <Eigen/Core>
#include <vector>

#include "predint/dissimilarity.hpp"
#include "predint/output_grid.hpp"
#include "predint/point_set.hpp"

namespace predint {

/// Discrete conditional probability distribution over an output grid,
/// p_j proportional to exp(-c * d_j) where d_j is the dissimilarity of
/// [ybar_j; x] with respect to the stored measurements.
struct ConditionalDistribution {
    OutputGrid grid;
    Eigen::VectorXd probs;             // sums to 1
    Eigen::VectorXd dissimilarities;   // d_j
};

/// Interval [lower, upper] whose one-sided tail probabilities under the
/// discrete conditional distribution are each at most tau, hence coverage
/// at least 1 - 2 tau. Indices are zero-based positions in the grid.
struct PredictionInterval {
    double lower = 0.0;
    double upper = 0.0;
    int lower_index = 0;
    int upper_index = 0;
    double tau = 0.0;
};

/// exp(-c d_j) normalized to sum 1, evaluated as
/// exp(-c (d_j - min_l d_l)) / sum to avoid overflow at large c.
Eigen::VectorXd probabilities_from_dissimilarities(const Eigen::VectorXd& dissimilarities,
                                                   double c);

/// Quantile-index selection on a plain probability vector:
/// upper index = smallest l with sum_{j<=l} p_j >= 1-tau,
/// lower index = largest l with sum_{j>=l} p_j >= 1-tau.
PredictionInterval interval_from_probabilities(const OutputGrid& grid,
                                               const Eigen::VectorXd& probs, double tau);

/// Full per-query distribution: d_j = J_gamma([ybar_j; x], D) for every grid
/// value, then the stabilized exponential weighting above. The stored points
/// must be stacked [y; x] vectors, so x must have dimension D.dim() - 1.
ConditionalDistribution conditional_distribution(const Eigen::VectorXd& x, const PointSet& points,
                                                 const OutputGrid& grid, double gamma, double c,
                                                 const SolverSettings& settings = {});

/// Requires tau in (0, 0.5].
PredictionInterval interval_estimate(const ConditionalDistribution& dist, double tau);

/// Midpoint of the tau = 0.5 interval.
double conditioned_median(const ConditionalDistribution& dist);

/// Central point estimate: solves the dissimilarity problem constrained on
/// the regressor block only and returns sum_i lambda_i^* y_i. At gamma = 0
/// this coincides with the least-squares prediction with intercept.
double central_estimate(const Eigen::VectorXd& x, const PointSet& points, double gamma,
                        const SolverSettings& settings = {});

/// Density values exp(-c J_gamma(z, D)) normalized so that the Riemann sum
/// over eval_grid times the grid cell volume equals 1. eval_grid must be an
/// equally spaced (tensor) grid; the per-axis spacing is inferred from it.
std::vector<double> empirical_pdf_on_grid(const PointSet& points,
                                          const std::vector<Eigen::VectorXd>& eval_grid,
                                          double gamma, double c,
                                          const SolverSettings& settings = {});

}  // namespace predint
