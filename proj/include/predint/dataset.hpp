#pragma once

#include <Eigen/Core>
#include <array>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace predint {

/// Affine normalization metadata: v_norm = (v - min) / (max - min).
struct Scale {
    double min = 0.0;
    double max = 1.0;

    double denormalize(double v) const { return min + v * (max - min); }
    double denormalize_width(double w) const { return w * (max - min); }
    bool is_identity() const { return min == 0.0 && max == 1.0; }
};

/// Regressor/output pairs in chronological order; column s of `x` is the
/// regressor of output y(s). `scale` records the normalization applied to
/// the source series so widths can be reported in original units.
struct PairSet {
    Eigen::MatrixXd x;  // n_x x N
    Eigen::VectorXd y;  // N
    Scale scale;

    int size() const { return static_cast<int>(y.size()); }
    int xdim() const { return static_cast<int>(x.rows()); }

    /// Stacked [y; x] columns, the layout stored point sets expect.
    Eigen::MatrixXd joint() const;
};

/// Maps min -> 0 and max -> 1. Throws DegenerateRange when max == min.
std::pair<std::vector<double>, Scale> normalize(const std::vector<double>& series);

/// Regressor k is [y_{k-1}, ..., y_{k-n_y}], output y_k, for k = n_y..end.
/// Throws TooShort when the series has no complete pair.
PairSet build_pairs(const std::vector<double>& series, int n_y);

struct SplitSizes {
    int train = 0;
    int validation = 0;
    int test = 0;
};

/// Chronological contiguous segments starting at index 0, in the order
/// train, validation, test. Throws InsufficientData when they do not fit.
std::array<PairSet, 3> split(const PairSet& pairs, const SplitSizes& sizes);

/// Comma-separated text, one row per pair, header `y_km1,...,y_kmN,y` and a
/// leading `#` comment carrying the scale; doubles at 17 significant digits
/// so write/read round-trips are exact.
void write_pairs_csv(const std::filesystem::path& path, const PairSet& pairs);
PairSet read_pairs_csv(const std::filesystem::path& path);

/// Single-column variant used by the density demo.
std::vector<double> read_values_csv(const std::filesystem::path& path);

}  // namespace predint
