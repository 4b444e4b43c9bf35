#pragma once

#include <Eigen/Core>
#include <optional>

#include "predint/dataset.hpp"

namespace predint {

struct LinearModel {
    Eigen::VectorXd theta;      // coefficients, intercept last when present
    std::optional<double> tau;  // quantile level, empty for least squares
};

/// Minimizer of sum_j (1-tau) max(0, theta^T r_j - y_j) + tau max(0, y_j - theta^T r_j)
/// with r_j = [x_j; 1] (set include_intercept = false for r_j = x_j).
///
/// Solved exactly: the optimum sits at a vertex where p residuals vanish, so
/// we walk vertices, certifying optimality through the subgradient box
/// condition and descending along edge directions with an exact breakpoint
/// line search. Throws RankDeficient if the design matrix loses rank and
/// NonConvergence if the pivot budget is exhausted (degenerate cycling).
LinearModel fit_quantile_regression(const PairSet& pairs, double tau,
                                    bool include_intercept = true);

/// Ordinary least squares on rows [x_j^T, 1], via a rank-revealing QR.
/// Throws RankDeficient when the design is singular.
LinearModel fit_least_squares(const PairSet& pairs);

/// theta^T [x; 1] (or theta^T x when the model was fit without intercept).
double predict_linear(const LinearModel& model, const Eigen::VectorXd& x);

/// Pinball objective at theta, the quantity fit_quantile_regression minimizes.
double pinball_loss(const PairSet& pairs, const Eigen::VectorXd& theta, double tau,
                    bool include_intercept = true);

}  // namespace predint
