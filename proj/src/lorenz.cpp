#include "predint/lorenz.hpp"

#include <cmath>
#include <stdexcept>

#include "predint/errors.hpp"

namespace predint {

namespace {

using State = std::array<double, 3>;

State field(const LorenzParams& p, const State& s) {
    return {p.sigma * (s[1] - s[0]), s[0] * (p.rho - s[2]) - s[1], s[0] * s[1] - p.beta * s[2]};
}

}  // namespace

std::vector<std::array<double, 3>> simulate_lorenz(const LorenzParams& params) {
    if (!(params.step > 0.0)) throw std::invalid_argument("simulate_lorenz: step must be > 0");
    if (params.steps < 1) throw std::invalid_argument("simulate_lorenz: steps must be >= 1");

    const double h = params.step;
    std::vector<State> states;
    states.reserve(static_cast<size_t>(params.steps));
    State s = params.initial;
    states.push_back(s);

    for (int k = 1; k < params.steps; ++k) {
        const State k1 = field(params, s);
        const State k2 = field(params, {s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1],
                                        s[2] + 0.5 * h * k1[2]});
        const State k3 = field(params, {s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1],
                                        s[2] + 0.5 * h * k2[2]});
        const State k4 = field(params, {s[0] + h * k3[0], s[1] + h * k3[1], s[2] + h * k3[2]});
        for (int i = 0; i < 3; ++i)
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!(std::isfinite(s[0]) && std::isfinite(s[1]) && std::isfinite(s[2])))
            throw NonFinite("simulate_lorenz: trajectory overflowed at step " + std::to_string(k));
        states.push_back(s);
    }
    return states;
}

}  // namespace predint
