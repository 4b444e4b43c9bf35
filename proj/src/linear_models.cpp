#include "predint/linear_models.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "predint/errors.hpp"

namespace predint {

namespace {

// One design column r_j = [x_j; 1] per pair (the intercept row is optional).
Eigen::MatrixXd design_columns(const PairSet& pairs, bool intercept) {
    const int p = pairs.xdim() + (intercept ? 1 : 0);
    if (p == 0) throw std::invalid_argument("quantile regression: empty design");
    Eigen::MatrixXd r(p, pairs.size());
    if (pairs.xdim() > 0) r.topRows(pairs.xdim()) = pairs.x;
    if (intercept) r.row(p - 1).setOnes();
    return r;
}

}  // namespace

double pinball_loss(const PairSet& pairs, const Eigen::VectorXd& theta, double tau,
                    bool include_intercept) {
    const Eigen::MatrixXd r = design_columns(pairs, include_intercept);
    if (theta.size() != r.rows()) throw DimensionMismatch("pinball_loss: theta dimension");
    const Eigen::ArrayXd e = (r.transpose() * theta - pairs.y).array();
    return (1.0 - tau) * e.max(0.0).sum() + tau * (-e).max(0.0).sum();
}

LinearModel fit_least_squares(const PairSet& pairs) {
    const int n = pairs.size();
    const int p = pairs.xdim() + 1;
    if (n < p) throw RankDeficient("fit_least_squares: fewer pairs than coefficients");
    Eigen::MatrixXd a(n, p);
    a.leftCols(pairs.xdim()) = pairs.x.transpose();
    a.col(p - 1).setOnes();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < p) throw RankDeficient("fit_least_squares: design matrix is rank deficient");
    LinearModel model;
    model.theta = qr.solve(pairs.y);
    return model;
}

double predict_linear(const LinearModel& model, const Eigen::VectorXd& x) {
    if (model.theta.size() == x.size() + 1)
        return model.theta.head(x.size()).dot(x) + model.theta(x.size());
    if (model.theta.size() == x.size()) return model.theta.dot(x);
    throw DimensionMismatch("predict_linear: regressor incompatible with model");
}

// Exact pinball minimization. The objective is convex piecewise linear, so an
// optimum sits at a vertex where the fitted hyperplane interpolates p points.
// The walk below maintains such a basis B:
//   1. certify optimality by solving R_B a = -sum_{e_j != 0} slope_j r_j and
//      checking a in [-tau, 1-tau]^p (a valid zero subgradient selection);
//   2. otherwise leave the most violated basis point along the edge direction
//      that keeps the rest interpolated, with an exact breakpoint line search
//      (the directional derivative jumps by |s_j| where residual j crosses 0).
// Strict descent at every nonzero step rules out cycling; degenerate swaps use
// a smallest-index rule.
LinearModel fit_quantile_regression(const PairSet& pairs, double tau, bool include_intercept) {
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("fit_quantile_regression: tau must be in (0, 1)");
    const Eigen::MatrixXd r = design_columns(pairs, include_intercept);
    const int p = static_cast<int>(r.rows());
    const int n = static_cast<int>(r.cols());
    if (n < p) throw RankDeficient("fit_quantile_regression: fewer pairs than coefficients");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(r);
    if (qr.rank() < p)
        throw RankDeficient("fit_quantile_regression: design matrix is rank deficient");

    std::vector<int> basis(static_cast<size_t>(p));
    for (int i = 0; i < p; ++i) basis[static_cast<size_t>(i)] = qr.colsPermutation().indices()(i);

    Eigen::MatrixXd r_basis(p, p);
    Eigen::VectorXd y_basis(p);
    auto load_basis = [&]() {
        for (int i = 0; i < p; ++i) {
            r_basis.col(i) = r.col(basis[static_cast<size_t>(i)]);
            y_basis(i) = pairs.y(basis[static_cast<size_t>(i)]);
        }
    };
    load_basis();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(r_basis);
    Eigen::VectorXd theta = lu.transpose().solve(y_basis);

    const double box_tol = 1e-9;
    const int max_pivots = 50 * n + 200;
    std::vector<unsigned char> in_basis(static_cast<size_t>(n), 0);
    std::vector<char> is_zero(static_cast<size_t>(n), 0);
    bool done = false;

    for (int pivot = 0; pivot < max_pivots && !done; ++pivot) {
        std::fill(in_basis.begin(), in_basis.end(), 0);
        for (int i : basis) in_basis[static_cast<size_t>(i)] = 1;

        Eigen::VectorXd e = r.transpose() * theta - pairs.y;
        Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
        for (int j = 0; j < n; ++j) {
            if (in_basis[static_cast<size_t>(j)]) {
                e(j) = 0.0;
                is_zero[static_cast<size_t>(j)] = 1;
                continue;
            }
            const double scale = 1.0 + std::abs(pairs.y(j)) + std::abs(e(j) + pairs.y(j));
            is_zero[static_cast<size_t>(j)] = std::abs(e(j)) <= 1e-12 * scale ? 1 : 0;
            if (is_zero[static_cast<size_t>(j)]) continue;
            const double slope = e(j) > 0.0 ? (1.0 - tau) : -tau;
            v.noalias() -= slope * r.col(j);
        }

        const Eigen::VectorXd a = lu.solve(v);
        int leaving = -1;
        double worst = box_tol;
        double sigma = 1.0;
        for (int i = 0; i < p; ++i) {
            const double over = a(i) - (1.0 - tau);
            const double under = -tau - a(i);
            if (over > worst) {
                worst = over;
                leaving = i;
                sigma = 1.0;
            }
            if (under > worst) {
                worst = under;
                leaving = i;
                sigma = -1.0;
            }
        }
        if (leaving < 0) {
            done = true;  // subgradient box satisfied: optimal
            continue;
        }

        const Eigen::VectorXd d =
            lu.transpose().solve(sigma * Eigen::VectorXd::Unit(p, leaving));
        const Eigen::VectorXd s = r.transpose() * d;

        // Right-derivative of the objective at t = 0+ along theta + t d.
        double g = 0.0;
        for (int j = 0; j < n; ++j) {
            if (is_zero[static_cast<size_t>(j)])
                g += (1.0 - tau) * std::max(s(j), 0.0) + tau * std::max(-s(j), 0.0);
            else
                g += (e(j) > 0.0 ? (1.0 - tau) : -tau) * s(j);
        }

        if (g >= -box_tol) {
            // Degenerate: a zero-residual point blocks the edge. Swap it into
            // the basis (theta unchanged, smallest index for anti-cycling).
            int entering = -1;
            for (int j = 0; j < n; ++j) {
                if (!in_basis[static_cast<size_t>(j)] && is_zero[static_cast<size_t>(j)] &&
                    std::abs(s(j)) > 1e-9) {
                    entering = j;
                    break;
                }
            }
            if (entering < 0) {
                done = true;  // nothing blocks at tolerance level: accept current point
                continue;
            }
            basis[static_cast<size_t>(leaving)] = entering;
            load_basis();
            lu.compute(r_basis);
            continue;
        }

        // Breakpoints where a residual crosses zero along the edge.
        std::vector<std::pair<double, int>> breaks;
        breaks.reserve(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) {
            if (in_basis[static_cast<size_t>(j)] || is_zero[static_cast<size_t>(j)]) continue;
            if (s(j) == 0.0) continue;
            const double t = -e(j) / s(j);
            if (t > 0.0) breaks.emplace_back(t, j);
        }
        std::sort(breaks.begin(), breaks.end());

        double t_star = -1.0;
        int entering = -1;
        for (size_t k = 0; k < breaks.size();) {
            const double t = breaks[k].first;
            int best_in_group = breaks[k].second;
            double best_jump = std::abs(s(breaks[k].second));
            while (k < breaks.size() && breaks[k].first == t) {
                g += std::abs(s(breaks[k].second));
                if (std::abs(s(breaks[k].second)) > best_jump) {
                    best_jump = std::abs(s(breaks[k].second));
                    best_in_group = breaks[k].second;
                }
                ++k;
            }
            if (g >= 0.0) {
                t_star = t;
                entering = best_in_group;
                break;
            }
        }
        if (entering < 0)
            throw NonConvergence("fit_quantile_regression: descent direction never levels off");

        theta += t_star * d;
        basis[static_cast<size_t>(leaving)] = entering;
        load_basis();
        lu.compute(r_basis);
        theta = lu.transpose().solve(y_basis);  // re-interpolate exactly
    }
    if (!done)
        throw NonConvergence("fit_quantile_regression: pivot budget exhausted (degenerate data)");

    LinearModel model;
    model.theta = theta;
    model.tau = tau;
    return model;
}

}  // namespace predint
