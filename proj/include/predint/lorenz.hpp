#pragma once

#include <array>
#include <vector>

namespace predint {

struct LorenzParams {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
    double step = 0.1;                          // integration time step, seconds
    std::array<double, 3> initial{1.0, 1.0, 1.0};
    int steps = 2500;                           // number of states returned, initial included
};

/// Integrates do/dt = sigma (p - o), dp/dt = o (rho - q) - p, dq/dt = o p - beta q
/// with the classical fourth-order Runge-Kutta scheme at a fixed step.
/// Returns `steps` states starting with the initial condition.
/// Throws NonFinite if the trajectory overflows.
std::vector<std::array<double, 3>> simulate_lorenz(const LorenzParams& params);

}  // namespace predint
