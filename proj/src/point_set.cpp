#include "predint/point_set.hpp"

#include <Eigen/QR>
#include <stdexcept>

#include "predint/errors.hpp"

namespace predint {

PointSet::PointSet(Eigen::MatrixXd points)
    : points_(std::move(points)), weights_(Eigen::VectorXd::Ones(points_.cols())) {
    init();
}

PointSet::PointSet(Eigen::MatrixXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
    if (weights_.size() != points_.cols())
        throw DimensionMismatch("PointSet: one weight per point required");
    if (!(weights_.minCoeff() > 0.0))
        throw std::invalid_argument("PointSet: weights must be strictly positive");
    unit_weights_ = (weights_.array() == 1.0).all();
    init();
}

PointSet::PointSet(const std::vector<Eigen::VectorXd>& points) {
    if (points.empty()) throw std::invalid_argument("PointSet: empty point list");
    const auto n = points.front().size();
    points_.resize(n, static_cast<Eigen::Index>(points.size()));
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != n)
            throw DimensionMismatch("PointSet: points of mixed dimension");
        points_.col(static_cast<Eigen::Index>(i)) = points[i];
    }
    weights_ = Eigen::VectorXd::Ones(points_.cols());
    init();
}

void PointSet::init() {
    const Eigen::Index n = points_.rows();
    const Eigen::Index N = points_.cols();
    if (n < 1) throw std::invalid_argument("PointSet: points must have dimension >= 1");
    if (N < n + 1)
        throw std::invalid_argument("PointSet: need at least dim+1 points to span affinely");
    min_weight_ = weights_.minCoeff();

    mean_ = points_.rowwise().mean();
    Eigen::MatrixXd centered = points_.colwise() - mean_;

    // Affine-span check: rank of [Z; 1^T] is n+1 iff the centered points have
    // full row rank.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(centered.transpose());
    if (qr.rank() < n)
        throw std::invalid_argument("PointSet: points do not affinely span the space");

    Eigen::MatrixXd covariance = centered * centered.transpose() / static_cast<double>(N);
    cov_llt_.compute(covariance);
    if (cov_llt_.info() != Eigen::Success)
        throw std::invalid_argument("PointSet: empirical covariance is not positive definite");

    ah_.resize(n + 1, N);
    ah_.topRows(n) = cov_llt_.matrixL().solve(centered);
    ah_.row(n).setOnes();

    Eigen::MatrixXd gram = ah_ * ah_.transpose();
    gram_llt_.compute(gram);
    if (gram_llt_.info() != Eigen::Success)
        throw std::invalid_argument("PointSet: constraint Gram matrix is not positive definite");

    // Power method for lambda_max(gram); in whitened coordinates the Gram is
    // N * I up to rounding, so this converges immediately, but the estimate is
    // computed honestly for the weighted/ill-scaled cases.
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n + 1).normalized();
    for (int it = 0; it < 50; ++it) {
        Eigen::VectorXd gv = gram * v;
        const double norm = gv.norm();
        if (norm == 0.0) break;
        v = gv / norm;
    }
    const double lambda_max = v.dot(gram * v);
    dual_lipschitz_ = lambda_max / (2.0 * min_weight_);
}

PointSet PointSet::marginal(int first_row, int rows) const {
    if (first_row < 0 || rows < 1 || first_row + rows > dim())
        throw DimensionMismatch("PointSet::marginal: row range out of bounds");
    if (unit_weights_) return PointSet(points_.middleRows(first_row, rows));
    return PointSet(points_.middleRows(first_row, rows), weights_);
}

Eigen::VectorXd PointSet::whiten(const Eigen::VectorXd& z) const {
    return cov_llt_.matrixL().solve(z - mean_);
}

Eigen::VectorXd PointSet::unwhiten_dual(const Eigen::VectorXd& mu_hat) const {
    return cov_llt_.matrixU().solve(mu_hat);
}

Eigen::VectorXd PointSet::whiten_direction(const Eigen::VectorXd& v) const {
    return cov_llt_.matrixL().solve(v);
}

}  // namespace predint
