#include "predint/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "predint/errors.hpp"

namespace predint {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& token, const std::string& context) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw std::invalid_argument("dataset: bad number '" + token + "' in " + context);
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

Eigen::MatrixXd PairSet::joint() const {
    Eigen::MatrixXd stacked(x.rows() + 1, y.size());
    stacked.row(0) = y.transpose();
    stacked.bottomRows(x.rows()) = x;
    return stacked;
}

std::pair<std::vector<double>, Scale> normalize(const std::vector<double>& series) {
    if (series.empty()) throw std::invalid_argument("normalize: empty series");
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    if (!(*hi > *lo)) throw DegenerateRange("normalize: series has zero range");
    const Scale scale{*lo, *hi};
    const double inv = 1.0 / (*hi - *lo);
    std::vector<double> normalized(series.size());
    for (size_t i = 0; i < series.size(); ++i) normalized[i] = (series[i] - *lo) * inv;
    return {std::move(normalized), scale};
}

PairSet build_pairs(const std::vector<double>& series, int n_y) {
    if (n_y < 1) throw std::invalid_argument("build_pairs: n_y must be >= 1");
    if (series.size() <= static_cast<size_t>(n_y))
        throw TooShort("build_pairs: series shorter than n_y + 1");

    const int count = static_cast<int>(series.size()) - n_y;
    PairSet pairs;
    pairs.x.resize(n_y, count);
    pairs.y.resize(count);
    for (int k = 0; k < count; ++k) {
        const size_t t = static_cast<size_t>(k + n_y);
        pairs.y(k) = series[t];
        for (int lag = 1; lag <= n_y; ++lag) pairs.x(lag - 1, k) = series[t - static_cast<size_t>(lag)];
    }
    return pairs;
}

std::array<PairSet, 3> split(const PairSet& pairs, const SplitSizes& sizes) {
    if (sizes.train < 0 || sizes.validation < 0 || sizes.test < 0)
        throw std::invalid_argument("split: sizes must be nonnegative");
    const long total = static_cast<long>(sizes.train) + sizes.validation + sizes.test;
    if (total > pairs.size())
        throw InsufficientData("split: requested " + std::to_string(total) + " pairs, have " +
                               std::to_string(pairs.size()));

    auto segment = [&](int begin, int count) {
        PairSet out;
        out.x = pairs.x.middleCols(begin, count);
        out.y = pairs.y.segment(begin, count);
        out.scale = pairs.scale;
        return out;
    };
    return {segment(0, sizes.train), segment(sizes.train, sizes.validation),
            segment(sizes.train + sizes.validation, sizes.test)};
}

void write_pairs_csv(const std::filesystem::path& path, const PairSet& pairs) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_pairs_csv: cannot open " + path.string());
    out << "# scale_min=" << format_double(pairs.scale.min)
        << " scale_max=" << format_double(pairs.scale.max) << "\n";
    for (int lag = 1; lag <= pairs.xdim(); ++lag) out << "y_km" << lag << ",";
    out << "y\n";
    for (int k = 0; k < pairs.size(); ++k) {
        for (int r = 0; r < pairs.xdim(); ++r) out << format_double(pairs.x(r, k)) << ",";
        out << format_double(pairs.y(k)) << "\n";
    }
    if (!out) throw std::runtime_error("write_pairs_csv: write failed for " + path.string());
}

PairSet read_pairs_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_pairs_csv: cannot open " + path.string());

    PairSet pairs;
    std::string line;
    bool have_header = false;
    int n_cols = 0;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto min_pos = line.find("scale_min=");
            const auto max_pos = line.find("scale_max=");
            if (min_pos != std::string::npos && max_pos != std::string::npos) {
                pairs.scale.min = parse_double(line.substr(min_pos + 10), path.string());
                pairs.scale.max = parse_double(line.substr(max_pos + 10), path.string());
            }
            continue;
        }
        if (!have_header) {
            n_cols = static_cast<int>(split_csv_line(line).size());
            if (n_cols < 2)
                throw std::invalid_argument("read_pairs_csv: need at least two columns in " +
                                            path.string());
            have_header = true;
            continue;
        }
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != n_cols)
            throw std::invalid_argument("read_pairs_csv: ragged row in " + path.string());
        std::vector<double> row(fields.size());
        for (size_t i = 0; i < fields.size(); ++i) row[i] = parse_double(fields[i], path.string());
        rows.push_back(std::move(row));
    }
    if (!have_header || rows.empty())
        throw std::invalid_argument("read_pairs_csv: no data rows in " + path.string());

    const int count = static_cast<int>(rows.size());
    const int n_x = n_cols - 1;
    pairs.x.resize(n_x, count);
    pairs.y.resize(count);
    for (int k = 0; k < count; ++k) {
        for (int r = 0; r < n_x; ++r) pairs.x(r, k) = rows[static_cast<size_t>(k)][static_cast<size_t>(r)];
        pairs.y(k) = rows[static_cast<size_t>(k)].back();
    }
    return pairs;
}

std::vector<double> read_values_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_values_csv: cannot open " + path.string());
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        const char* begin = line.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) continue;  // header or other non-numeric line
        values.push_back(v);
    }
    if (values.empty())
        throw std::invalid_argument("read_values_csv: no numeric rows in " + path.string());
    return values;
}

}  // namespace predint
