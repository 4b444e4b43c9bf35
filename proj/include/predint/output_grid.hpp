#pragma once

#include <span>
#include <vector>

namespace predint {

/// Finite, strictly increasing set of candidate output values.
class OutputGrid {
public:
    explicit OutputGrid(std::vector<double> values);

    int size() const { return static_cast<int>(values_.size()); }
    double value(int j) const { return values_[static_cast<size_t>(j)]; }
    const std::vector<double>& values() const { return values_; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

private:
    std::vector<double> values_;
};

/// M equally spaced values from min(outputs) - padding_fraction * range to
/// max(outputs) + padding_fraction * range. With padding_fraction = 0 the
/// endpoints are exactly the extreme observed outputs.
/// Throws DegenerateRange when all outputs coincide.
OutputGrid build_output_grid(std::span<const double> outputs, int grid_size,
                             double padding_fraction);

}  // namespace predint
