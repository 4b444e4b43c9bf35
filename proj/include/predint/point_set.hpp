#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <vector>

namespace predint {

/// Immutable collection of N points in R^n (columns of `points`) with
/// optional strictly positive per-point weights.
///
/// Construction requires N >= n+1 and that the points affinely span R^n,
/// i.e. the stacked matrix [Z; 1^T] has rank n+1. Everything the dual
/// solver needs repeatedly (mean, whitening factor, whitened points,
/// gradient Lipschitz bound) is precomputed here once, so a PointSet can
/// be shared freely across threads.
class PointSet {
public:
    explicit PointSet(Eigen::MatrixXd points);
    PointSet(Eigen::MatrixXd points, Eigen::VectorXd weights);
    PointSet(const std::vector<Eigen::VectorXd>& points);

    int dim() const { return static_cast<int>(points_.rows()); }
    int size() const { return static_cast<int>(points_.cols()); }

    const Eigen::MatrixXd& points() const { return points_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    bool unit_weights() const { return unit_weights_; }
    double min_weight() const { return min_weight_; }
    const Eigen::VectorXd& mean() const { return mean_; }

    /// Keep `rows` consecutive coordinates starting at `first_row` of every
    /// point; weights carry over. The sub-point-set of a valid PointSet is
    /// itself valid whenever rows >= 1 (projection drops rank by at most
    /// the number of removed coordinates).
    PointSet marginal(int first_row, int rows) const;

    // --- solver internals (stable under the public immutability contract) ---

    /// G^{-1}(z - mean) with G G^T equal to the empirical covariance
    /// Z_c Z_c^T / N. In these coordinates the whitened points have zero
    /// mean and identity covariance.
    Eigen::VectorXd whiten(const Eigen::VectorXd& z) const;

    /// Maps a multiplier of the whitened equality constraints back to the
    /// multiplier of the original ones: mu = G^{-T} mu_hat.
    Eigen::VectorXd unwhiten_dual(const Eigen::VectorXd& mu_hat) const;

    /// Linear part of the whitening map, G^{-1} v (no mean subtraction).
    Eigen::VectorXd whiten_direction(const Eigen::VectorXd& v) const;

    /// Stacked whitened constraint matrix [Z_hat; 1^T], (n+1) x N.
    const Eigen::MatrixXd& constraint_matrix() const { return ah_; }

    /// Factorization of constraint_matrix * constraint_matrix^T, used to
    /// project dual-recovered multipliers onto exact primal feasibility.
    const Eigen::LLT<Eigen::MatrixXd>& gram_llt() const { return gram_llt_; }

    /// lambda_max([Z_hat;1^T][Z_hat;1^T]^T) / (2 min_i w_i), estimated by
    /// 50 power iterations; the dual gradient is Lipschitz with this bound.
    double dual_lipschitz() const { return dual_lipschitz_; }

private:
    void init();

    Eigen::MatrixXd points_;   // n x N, one point per column
    Eigen::VectorXd weights_;  // N
    bool unit_weights_ = true;
    double min_weight_ = 1.0;

    Eigen::VectorXd mean_;
    Eigen::LLT<Eigen::MatrixXd> cov_llt_;  // covariance = G G^T
    Eigen::MatrixXd ah_;                   // (n+1) x N
    Eigen::LLT<Eigen::MatrixXd> gram_llt_;
    double dual_lipschitz_ = 0.0;
};

}  // namespace predint
