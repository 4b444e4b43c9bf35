#pragma once

#include <stdexcept>
#include <string>

namespace predint {

// Input shape/value problems detected before any computation starts.
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct TooShort : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InsufficientData : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidBracket : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failures raised while computing.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RankDeficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonFinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace predint
