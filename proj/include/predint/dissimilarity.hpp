#pragma once

#include <Eigen/Core>
#include <vector>

#include "predint/point_set.hpp"

namespace predint {

struct SolverSettings {
    double primal_tolerance = 1e-8;  // max-norm of the equality residual, whitened coordinates
    int max_iterations = 50000;
};

struct DissimilarityResult {
    double value = 0.0;            // sum_i w_i lambda_i^2 + gamma sum_i |lambda_i|
    Eigen::VectorXd lambda;        // optimal combination weights, sum to 1
    Eigen::VectorXd dual_mu;       // multiplier of Z lambda = z, original coordinates
    double dual_nu = 0.0;          // multiplier of 1^T lambda = 1
    double primal_residual = 0.0;  // max(||Z lambda - z||_inf, |1^T lambda - 1|), whitened
    int iterations = 0;
};

/// Minimize sum_i w_i lambda_i^2 + gamma sum_i |lambda_i| subject to
/// Z lambda = z and sum lambda_i = 1.
///
/// The N-variable primal is solved through its (n+1)-variable smooth dual by
/// accelerated gradient ascent with a fixed 1/L step and adaptive restart on
/// dual-value decrease; each dual gradient evaluation recovers the primal
/// coordinate-wise via inner_minimizer. Data is whitened internally (the
/// optimum value is invariant under affine maps), and the recovered lambda is
/// projected onto the constraint plane before the value is reported, so the
/// returned value is the cost of an exactly feasible point.
///
/// Throws DimensionMismatch for a wrong-sized z and NonConvergence when
/// max_iterations is exhausted above tolerance (near-degenerate point sets).
DissimilarityResult solve_dissimilarity(const Eigen::VectorXd& z, const PointSet& points,
                                        double gamma, const SolverSettings& settings = {});

/// Explicit value at gamma = 0 and unit weights:
///   1/N + (z - zbar)^T (Z Z^T - N zbar zbar^T)^{-1} (z - zbar),
/// evaluated through a Cholesky factorization built directly from Z.
/// Throws SingularMatrix if the factorization fails.
double closed_form_gamma0(const Eigen::VectorXd& z, const PointSet& points);

/// argmin over lambda of w lambda^2 + gamma |lambda| + c lambda, i.e.
/// -sign(c) max(|c| - gamma, 0) / (2w). This is the per-coordinate primal
/// recovery used inside the dual iteration with c_i = mu^T z_i + nu.
double inner_minimizer(double c_i, double gamma, double w_i);

/// Dual objective in original coordinates,
///   -sum_i max(|z_i^T mu + nu| - gamma, 0)^2 / (4 w_i) - z^T mu - nu;
/// never exceeds the primal optimum (weak duality).
double dual_objective(const Eigen::VectorXd& mu, double nu, const Eigen::VectorXd& z,
                      const PointSet& points, double gamma);

/// Dissimilarity of [y; tail] for every y in `first_values`, in order.
/// Grid points are processed in fixed-size blocks (parallelizable across
/// blocks); inside a block each solve warm-starts from its neighbour's dual
/// point, so results do not depend on thread count.
std::vector<double> sweep_first_coordinate(const PointSet& points,
                                           const std::vector<double>& first_values,
                                           const Eigen::VectorXd& tail, double gamma,
                                           const SolverSettings& settings = {});

}  // namespace predint
