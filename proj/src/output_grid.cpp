#include "predint/output_grid.hpp"

#include <algorithm>
#include <stdexcept>

#include "predint/errors.hpp"

namespace predint {

OutputGrid::OutputGrid(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw std::invalid_argument("OutputGrid: need at least two values");
    for (size_t j = 1; j < values_.size(); ++j)
        if (!(values_[j] > values_[j - 1]))
            throw std::invalid_argument("OutputGrid: values must be strictly increasing");
}

OutputGrid build_output_grid(std::span<const double> outputs, int grid_size,
                             double padding_fraction) {
    if (outputs.empty()) throw std::invalid_argument("build_output_grid: no outputs");
    if (grid_size < 2) throw std::invalid_argument("build_output_grid: grid_size must be >= 2");
    if (!(padding_fraction >= 0.0))
        throw std::invalid_argument("build_output_grid: padding_fraction must be >= 0");

    const auto [lo_it, hi_it] = std::minmax_element(outputs.begin(), outputs.end());
    const double range = *hi_it - *lo_it;
    if (!(range > 0.0)) throw DegenerateRange("build_output_grid: outputs have zero range");

    const double lo = *lo_it - padding_fraction * range;
    const double hi = *hi_it + padding_fraction * range;
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);

    std::vector<double> values(static_cast<size_t>(grid_size));
    values.front() = lo;
    for (int j = 1; j < grid_size - 1; ++j) values[static_cast<size_t>(j)] = lo + step * j;
    values.back() = hi;
    return OutputGrid(std::move(values));
}

}  // namespace predint
