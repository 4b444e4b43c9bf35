#pragma once

#include <functional>
#include <vector>

#include "predint/conditional_density.hpp"
#include "predint/dataset.hpp"
#include "predint/dissimilarity.hpp"
#include "predint/output_grid.hpp"
#include "predint/point_set.hpp"

namespace predint {

/// Validation/test collections reuse PairSet; pairs must be disjoint from
/// the training measurements (checked by exact-duplicate scan, warning only).
using ValidationSet = PairSet;

struct TuningReport {
    struct Entry {
        double gamma = 0.0;
        double c = 0.0;
        double log_likelihood = 0.0;
        int upper_violations = 0;  // outputs above their interval at the tuned c
        int lower_violations = 0;
        bool non_monotone_acceptance = false;  // bisection acceptance was not a clean threshold
    };

    double gamma_star = 0.0;
    double c_star = 0.0;
    std::vector<Entry> entries;
};

struct EvaluationMetrics {
    struct Sample {
        PredictionInterval interval;
        bool hit = false;
        double width = 0.0;  // normalized units
    };

    double empirical_probability = 0.0;  // hits / samples, exact ratio
    double mean_width = 0.0;             // normalized units
    double mean_width_denorm = 0.0;      // original units via the stored scale
    std::vector<Sample> per_sample;
};

struct BisectionResult {
    double c = 0.0;
    bool non_monotone = false;   // some accepted midpoint sat above a rejected one
    bool c_max_accepted = false; // the upper bracket itself passes the test
};

/// Bisection core: halve [0, c_max] keeping c_min on accepted midpoints and
/// c_max on rejected ones until the bracket is narrower than epsilon, then
/// return the last accepted value (0 if none was ever accepted).
BisectionResult bisect_concentration(const std::function<bool(double)>& accepts, double c_max,
                                     double epsilon);

/// Largest concentration (up to epsilon) whose validation intervals at level
/// tau keep both one-sided violation fractions strictly below tau. The grid
/// dissimilarities depend on gamma but not on c, so they are computed once
/// and shared by every bisection midpoint.
/// Throws InvalidBracket when c_max <= 0.
double tune_c(double gamma, double tau, const PointSet& train, const ValidationSet& validation,
              const OutputGrid& grid, double c_max, double epsilon,
              const SolverSettings& settings = {});

/// sum_s log[ exp(-c J_gamma([y_s; x_s], D)) / sum_j exp(-c J_gamma([ybar_j; x_s], D)) ],
/// evaluated with log-sum-exp stabilization. The numerator uses the exact
/// validation output, not its nearest grid point.
double log_likelihood(double gamma, double c, const PointSet& train,
                      const ValidationSet& validation, const OutputGrid& grid,
                      const SolverSettings& settings = {});

/// For each gamma: tune c, then score the resulting conditional densities by
/// their validation log-likelihood. gamma_star maximizes the likelihood,
/// ties broken toward the smaller gamma.
TuningReport tune_gamma(const std::vector<double>& gammas, double tau, const PointSet& train,
                        const ValidationSet& validation, const OutputGrid& grid, double c_max,
                        double epsilon, const SolverSettings& settings = {});

/// Same sweep for several tau levels at once; the per-gamma dissimilarity
/// cache (independent of tau and c) is built once and reused, which is the
/// dominant cost. Returns one report per tau, in order.
std::vector<TuningReport> tune_gamma_multi(const std::vector<double>& gammas,
                                           const std::vector<double>& taus, const PointSet& train,
                                           const ValidationSet& validation, const OutputGrid& grid,
                                           double c_max, double epsilon,
                                           const SolverSettings& settings = {});

/// Interval hit rate and widths over a test set at fixed (gamma, c, tau).
EvaluationMetrics evaluate(const PointSet& train, const ValidationSet& test,
                           const OutputGrid& grid, double gamma, double c, double tau,
                           const SolverSettings& settings = {});

/// Exact-duplicate scan between training points and validation pairs.
int count_exact_duplicates(const PointSet& train, const ValidationSet& validation);

}  // namespace predint
