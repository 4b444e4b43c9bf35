#include "predint/dissimilarity.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "predint/errors.hpp"
#include "predint/parallel.hpp"

namespace predint {

namespace {

constexpr int kSweepBlock = 256;  // grid points per warm-start block

void check_settings(const SolverSettings& settings) {
    if (!(settings.primal_tolerance > 0.0))
        throw std::invalid_argument("SolverSettings: primal_tolerance must be positive");
    if (settings.max_iterations < 1)
        throw std::invalid_argument("SolverSettings: max_iterations must be >= 1");
}

struct DualWorkspace {
    Eigen::VectorXd lambda, shrink;            // N
    Eigen::VectorXd c_y, c_x, c_x_prev, c_n, c_dir;  // N
    Eigen::VectorXd theta_x, theta_x_prev, theta_y, theta_n;  // n+1
    Eigen::VectorXd residual, scratch, newton_rhs;            // n+1
    Eigen::MatrixXd hessian;                   // n+1 x n+1
    Eigen::LLT<Eigen::MatrixXd> hessian_llt;
    std::vector<double> breakpoints;

    void resize(Eigen::Index n_points, Eigen::Index n_rows) {
        lambda.resize(n_points);
        shrink.resize(n_points);
        c_y.resize(n_points);
        c_x.resize(n_points);
        c_x_prev.resize(n_points);
        c_n.resize(n_points);
        c_dir.resize(n_points);
        theta_x.resize(n_rows);
        theta_x_prev.resize(n_rows);
        theta_y.resize(n_rows);
        theta_n.resize(n_rows);
        residual.resize(n_rows);
        scratch.resize(n_rows);
        newton_rhs.resize(n_rows);
        hessian.resize(n_rows, n_rows);
        breakpoints.reserve(static_cast<size_t>(2 * n_points));
    }
};

struct CoreOutcome {
    bool converged = false;
    int iterations = 0;
    double residual_inf = 0.0;
};

// Maximizes g(theta) = -sum_i max(|c_i|-gamma,0)^2/(4 w_i) - theta^T b with
// c = Ah^T theta, by Nesterov-accelerated ascent at fixed step 1/L with
// restart whenever the dual value decreases. On a schedule the iteration also
// tries a semismooth Newton step on the locally quadratic piece (the active
// set of the soft threshold); the step is accepted only when it improves the
// dual value, so the base scheme's convergence is untouched while the usual
// warm-started case finishes in a handful of iterations. On success `theta`
// holds the final dual point and ws.lambda the recovered primal.
CoreOutcome dual_ascent(const Eigen::MatrixXd& ah, const Eigen::VectorXd& weights,
                        bool unit_weights, double gamma, const Eigen::VectorXd& b, double lipschitz,
                        double tolerance, int max_iterations, Eigen::VectorXd& theta,
                        DualWorkspace& ws) {
    const double inv_l = 1.0 / lipschitz;
    const Eigen::Index rows = ah.rows();
    const Eigen::Index count = ah.cols();

    auto recover_primal = [&](const Eigen::VectorXd& c) {
        ws.shrink = (c.array().abs() - gamma).max(0.0);
        if (unit_weights)
            ws.lambda = -0.5 * c.array().sign() * ws.shrink.array();
        else
            ws.lambda = -(c.array().sign() * ws.shrink.array()) / (2.0 * weights.array());
    };
    auto dual_value = [&](const Eigen::VectorXd& c, const Eigen::VectorXd& point) -> double {
        double penalty;
        if (unit_weights)
            penalty = 0.25 * (c.array().abs() - gamma).max(0.0).square().sum();
        else
            penalty = ((c.array().abs() - gamma).max(0.0).square() / (4.0 * weights.array())).sum();
        return -penalty - point.dot(b);
    };

    // Newton candidate from the piece selected by the current active set:
    // lambda_i = -(c_i - gamma sign(c_i)) / (2 w_i) on S = {|c_i| > gamma}, so
    // grad g = -H theta + q - b with H = sum_S a_i a_i^T/(2w_i). The system is
    // Tikhonov-regularized so thin active sets still give a direction.
    // Returns false when no coordinate is active.
    auto try_newton = [&](const Eigen::VectorXd& c) -> bool {
        ws.hessian.setZero();
        ws.newton_rhs = -b;
        int active = 0;
        for (Eigen::Index i = 0; i < count; ++i) {
            const double ci = c(i);
            if (std::abs(ci) <= gamma) continue;
            ++active;
            const double scale = 1.0 / (2.0 * weights(i));
            const auto col = ah.col(i);
            for (Eigen::Index k = 0; k < rows; ++k)
                for (Eigen::Index j = k; j < rows; ++j)
                    ws.hessian(j, k) += scale * col(j) * col(k);
            ws.newton_rhs += (gamma * scale * (ci > 0 ? 1.0 : -1.0)) * col;
        }
        if (active == 0) return false;
        const double ridge =
            1e-10 * (1.0 + ws.hessian.diagonal().sum() / static_cast<double>(rows));
        ws.hessian.diagonal().array() += ridge;
        ws.hessian_llt.compute(ws.hessian);
        if (ws.hessian_llt.info() != Eigen::Success) return false;
        ws.theta_n = ws.hessian_llt.solve(ws.newton_rhs);
        ws.c_n.noalias() = ah.transpose() * ws.theta_n;
        return true;
    };

    ws.theta_x = theta;
    ws.c_x.noalias() = ah.transpose() * ws.theta_x;
    ws.theta_y = ws.theta_x;
    ws.c_y = ws.c_x;
    double g_curr = dual_value(ws.c_x, ws.theta_x);
    double momentum = 1.0;

    for (int iter = 1; iter <= max_iterations; ++iter) {
        if (iter % 128 == 0) ws.c_y.noalias() = ah.transpose() * ws.theta_y;  // drift refresh
        recover_primal(ws.c_y);
        ws.residual.noalias() = ah * ws.lambda;
        ws.residual -= b;
        const double res = ws.residual.lpNorm<Eigen::Infinity>();
        if (res <= tolerance) {
            theta = ws.theta_y;
            return {true, iter, res};
        }

        // Newton direction with an exact concave line search: along
        // theta(t) = theta_y + t d the derivative phi(t) = dc . lambda(c_y + t dc)
        // - d . b is piecewise linear and decreasing, so its root (the exact
        // maximizer on the ray) comes from a breakpoint scan plus one secant.
        if ((iter <= 4 || iter % 5 == 0) && try_newton(ws.c_y)) {
            ws.c_dir = ws.c_n - ws.c_y;  // = Ah^T (theta_n - theta_y)
            const double offset = (ws.theta_n - ws.theta_y).dot(b);
            auto phi = [&](double t) -> double {
                double slope = 0.0;
                for (Eigen::Index i = 0; i < count; ++i) {
                    const double ci = ws.c_y(i) + t * ws.c_dir(i);
                    const double s = std::abs(ci) - gamma;
                    if (s > 0.0)
                        slope -= ws.c_dir(i) * (ci > 0 ? s : -s) / (2.0 * weights(i));
                }
                return slope - offset;
            };
            if (phi(0.0) > 0.0) {
                ws.breakpoints.clear();
                for (Eigen::Index i = 0; i < count; ++i) {
                    if (ws.c_dir(i) == 0.0) continue;
                    for (double edge : {gamma, -gamma}) {
                        const double t = (edge - ws.c_y(i)) / ws.c_dir(i);
                        if (t > 0.0) ws.breakpoints.push_back(t);
                    }
                }
                std::sort(ws.breakpoints.begin(), ws.breakpoints.end());

                double t_lo = 0.0, phi_lo = phi(0.0);
                double t_star = -1.0;
                for (double t : ws.breakpoints) {
                    const double value = phi(t);
                    if (value <= 0.0) {
                        t_star = value == phi_lo ? t
                                                 : t_lo - phi_lo * (t - t_lo) / (value - phi_lo);
                        break;
                    }
                    t_lo = t;
                    phi_lo = value;
                }
                if (t_star < 0.0) {
                    // still ascending after the last breakpoint: the final piece
                    // is a plain quadratic, extrapolate its root
                    const double t_hi = 2.0 * t_lo + 1.0;
                    const double phi_hi = phi(t_hi);
                    if (phi_hi < phi_lo)
                        t_star = t_lo - phi_lo * (t_hi - t_lo) / (phi_hi - phi_lo);
                }
                if (t_star > 0.0) {
                    ws.theta_n = ws.theta_y + t_star * (ws.theta_n - ws.theta_y);
                    ws.c_n = ws.c_y + t_star * ws.c_dir;
                    const double g_newton = dual_value(ws.c_n, ws.theta_n);
                    if (g_newton > g_curr) {
                        ws.theta_x = ws.theta_n;
                        ws.c_x = ws.c_n;
                        ws.theta_y = ws.theta_n;
                        ws.c_y = ws.c_n;
                        g_curr = g_newton;
                        momentum = 1.0;
                        continue;
                    }
                }
            }
        }

        ws.theta_x_prev = ws.theta_x;
        ws.c_x_prev = ws.c_x;
        ws.scratch = ws.residual * inv_l;
        ws.theta_x = ws.theta_y + ws.scratch;
        ws.c_x = ws.c_y;
        ws.c_x.noalias() += ah.transpose() * ws.scratch;

        const double g_next = dual_value(ws.c_x, ws.theta_x);
        const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
        if (g_next < g_curr) {
            ws.theta_y = ws.theta_x;
            ws.c_y = ws.c_x;
            momentum = 1.0;
        } else {
            const double beta = (momentum - 1.0) / momentum_next;
            ws.theta_y = ws.theta_x + beta * (ws.theta_x - ws.theta_x_prev);
            ws.c_y = ws.c_x + beta * (ws.c_x - ws.c_x_prev);
            momentum = momentum_next;
        }
        g_curr = g_next;
    }

    recover_primal(ws.c_y);
    ws.residual.noalias() = ah * ws.lambda;
    ws.residual -= b;
    theta = ws.theta_y;
    return {false, max_iterations, ws.residual.lpNorm<Eigen::Infinity>()};
}

// Projects ws.lambda onto {Ah lambda = b} (the correction is O(tolerance), so
// the cost changes at second order) and returns the cost of the now exactly
// feasible point together with its recomputed residual.
std::pair<double, double> project_and_value(const PointSet& points, const Eigen::MatrixXd& ah,
                                            const Eigen::VectorXd& b, double gamma,
                                            DualWorkspace& ws) {
    ws.residual.noalias() = ah * ws.lambda;
    ws.residual -= b;
    ws.scratch = points.gram_llt().solve(ws.residual);
    ws.lambda.noalias() -= ah.transpose() * ws.scratch;
    ws.residual.noalias() = ah * ws.lambda;
    ws.residual -= b;

    double value;
    if (points.unit_weights())
        value = ws.lambda.squaredNorm() + gamma * ws.lambda.lpNorm<1>();
    else
        value = (points.weights().array() * ws.lambda.array().square()).sum() +
                gamma * ws.lambda.lpNorm<1>();
    return {value, ws.residual.lpNorm<Eigen::Infinity>()};
}

[[noreturn]] void throw_nonconvergence(double residual, int iterations) {
    throw NonConvergence("dissimilarity solver: primal residual " + std::to_string(residual) +
                         " after " + std::to_string(iterations) +
                         " iterations; the point set may be near-degenerate");
}

}  // namespace

double inner_minimizer(double c_i, double gamma, double w_i) {
    if (!(w_i > 0.0)) throw std::invalid_argument("inner_minimizer: weight must be positive");
    const double shrunk = std::max(std::abs(c_i) - gamma, 0.0);
    if (shrunk == 0.0) return 0.0;
    return -(c_i > 0 ? 1.0 : -1.0) * shrunk / (2.0 * w_i);
}

double dual_objective(const Eigen::VectorXd& mu, double nu, const Eigen::VectorXd& z,
                      const PointSet& points, double gamma) {
    if (mu.size() != points.dim() || z.size() != points.dim())
        throw DimensionMismatch("dual_objective: dimension mismatch");
    Eigen::ArrayXd c = (points.points().transpose() * mu).array() + nu;
    const double penalty =
        ((c.abs() - gamma).max(0.0).square() / (4.0 * points.weights().array())).sum();
    return -penalty - z.dot(mu) - nu;
}

DissimilarityResult solve_dissimilarity(const Eigen::VectorXd& z, const PointSet& points,
                                        double gamma, const SolverSettings& settings) {
    if (z.size() != points.dim())
        throw DimensionMismatch("solve_dissimilarity: z has dimension " +
                                std::to_string(z.size()) + ", expected " +
                                std::to_string(points.dim()));
    if (!z.allFinite()) throw std::invalid_argument("solve_dissimilarity: z must be finite");
    if (!(gamma >= 0.0)) throw std::invalid_argument("solve_dissimilarity: gamma must be >= 0");
    check_settings(settings);

    const Eigen::Index n = points.dim();
    const Eigen::MatrixXd& ah = points.constraint_matrix();

    Eigen::VectorXd b(n + 1);
    b.head(n) = points.whiten(z);
    b(n) = 1.0;

    DualWorkspace ws;
    ws.resize(points.size(), n + 1);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(n + 1);
    const CoreOutcome outcome =
        dual_ascent(ah, points.weights(), points.unit_weights(), gamma, b,
                    points.dual_lipschitz(), settings.primal_tolerance, settings.max_iterations,
                    theta, ws);
    if (!outcome.converged) throw_nonconvergence(outcome.residual_inf, outcome.iterations);

    const auto [value, residual] = project_and_value(points, ah, b, gamma, ws);

    DissimilarityResult result;
    result.value = value;
    result.lambda = ws.lambda;
    result.dual_mu = points.unwhiten_dual(theta.head(n));
    result.dual_nu = theta(n) - result.dual_mu.dot(points.mean());
    result.primal_residual = residual;
    result.iterations = outcome.iterations;
    return result;
}

double closed_form_gamma0(const Eigen::VectorXd& z, const PointSet& points) {
    if (z.size() != points.dim())
        throw DimensionMismatch("closed_form_gamma0: z has wrong dimension");
    if (!points.unit_weights())
        throw std::invalid_argument("closed_form_gamma0: requires unit weights");

    const double n_points = static_cast<double>(points.size());
    const Eigen::VectorXd mean = points.points().rowwise().mean();
    const Eigen::MatrixXd centered = points.points().colwise() - mean;
    const Eigen::MatrixXd scatter = centered * centered.transpose();  // Z Z^T - N zbar zbar^T
    Eigen::LLT<Eigen::MatrixXd> llt(scatter);
    if (llt.info() != Eigen::Success)
        throw SingularMatrix("closed_form_gamma0: scatter matrix is singular");
    const Eigen::VectorXd d = z - mean;
    return 1.0 / n_points + d.dot(llt.solve(d));
}

std::vector<double> sweep_first_coordinate(const PointSet& points,
                                           const std::vector<double>& first_values,
                                           const Eigen::VectorXd& tail, double gamma,
                                           const SolverSettings& settings) {
    const Eigen::Index n = points.dim();
    if (tail.size() != n - 1)
        throw DimensionMismatch("sweep_first_coordinate: tail must have dimension dim-1");
    if (!(gamma >= 0.0)) throw std::invalid_argument("sweep_first_coordinate: gamma must be >= 0");
    check_settings(settings);

    const Eigen::Index count = static_cast<Eigen::Index>(first_values.size());
    std::vector<double> values(first_values.size());
    if (first_values.empty()) return values;

    // whiten([y; tail]) = base + y * dir, affine in the swept coordinate
    Eigen::VectorXd z0 = Eigen::VectorXd::Zero(n);
    z0.tail(n - 1) = tail;
    const Eigen::VectorXd base = points.whiten(z0);
    const Eigen::VectorXd dir = points.whiten_direction(Eigen::VectorXd::Unit(n, 0));

    const double n_inv = 1.0 / static_cast<double>(points.size());
    if (gamma == 0.0 && points.unit_weights()) {
        // value = 1/N + ||base + y dir||^2 / N, a scalar quadratic in y
        const double bb = base.squaredNorm();
        const double bd = base.dot(dir);
        const double dd = dir.squaredNorm();
        for (Eigen::Index j = 0; j < count; ++j) {
            const double y = first_values[static_cast<size_t>(j)];
            values[static_cast<size_t>(j)] = n_inv + n_inv * (bb + y * (2.0 * bd + y * dd));
        }
        return values;
    }

    const Eigen::MatrixXd& ah = points.constraint_matrix();
    const int blocks = static_cast<int>((count + kSweepBlock - 1) / kSweepBlock);

    detail::parallel_tasks(blocks, [&](int block) {
        DualWorkspace ws;
        ws.resize(points.size(), n + 1);
        Eigen::VectorXd theta = Eigen::VectorXd::Zero(n + 1);
        Eigen::VectorXd b(n + 1);
        b(n) = 1.0;
        const Eigen::Index begin = static_cast<Eigen::Index>(block) * kSweepBlock;
        const Eigen::Index end = std::min(begin + kSweepBlock, count);
        for (Eigen::Index j = begin; j < end; ++j) {
            b.head(n) = base + first_values[static_cast<size_t>(j)] * dir;
            const CoreOutcome outcome = dual_ascent(ah, points.weights(), points.unit_weights(),
                                                    gamma, b, points.dual_lipschitz(),
                                                    settings.primal_tolerance,
                                                    settings.max_iterations, theta, ws);
            if (!outcome.converged) throw_nonconvergence(outcome.residual_inf, outcome.iterations);
            values[static_cast<size_t>(j)] = project_and_value(points, ah, b, gamma, ws).first;
        }
    });
    return values;
}

}  // namespace predint
