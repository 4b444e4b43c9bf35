#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

#include "predint/dataset.hpp"
#include "predint/errors.hpp"
#include "predint/lorenz.hpp"

using namespace predint;

namespace {

using State = std::array<double, 3>;

// Independent single-step RK4, written against the ODE directly, to oracle
// the library integrator.
State reference_rk4_step(const State& s, double h, double sigma, double rho, double beta) {
    auto f = [&](State u) -> State {
        return {sigma * (u[1] - u[0]), u[0] * (rho - u[2]) - u[1], u[0] * u[1] - beta * u[2]};
    };
    auto add = [](State a, double w, State b) -> State {
        return {a[0] + w * b[0], a[1] + w * b[1], a[2] + w * b[2]};
    };
    const State k1 = f(s);
    const State k2 = f(add(s, 0.5 * h, k1));
    const State k3 = f(add(s, 0.5 * h, k2));
    const State k4 = f(add(s, h, k3));
    State out = s;
    for (int i = 0; i < 3; ++i)
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

double state_distance(const State& a, const State& b) {
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                     (a[2] - b[2]) * (a[2] - b[2]));
}

State integrate_to(double horizon, double step, const LorenzParams& base) {
    LorenzParams params = base;
    params.step = step;
    params.steps = static_cast<int>(std::lround(horizon / step)) + 1;
    return simulate_lorenz(params).back();
}

}  // namespace

TEST_CASE("simulate_lorenz basics") {
    SUBCASE("degenerate parameters freeze the first coordinate") {
        LorenzParams params;
        params.sigma = 0.0;
        params.rho = 0.0;
        params.beta = 0.0;
        params.initial = {2.5, 1.0, 0.5};
        params.steps = 50;
        const auto states = simulate_lorenz(params);
        REQUIRE(states.size() == 50);
        for (const auto& s : states) CHECK(s[0] == 2.5);  // do/dt = 0 exactly
        CHECK(std::abs(states.back()[1]) < 1.0);          // dp/dt = -p decays
    }
    SUBCASE("single step matches an independent integrator to 1e-12") {
        LorenzParams params;
        params.steps = 2;
        params.step = 0.1;
        const auto states = simulate_lorenz(params);
        const State expected = reference_rk4_step({1, 1, 1}, 0.1, 10.0, 28.0, 8.0 / 3.0);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(states[1][i] - expected[i]) <= 1e-12);
    }
    SUBCASE("2500 samples stay bounded and do not repeat") {
        LorenzParams params;  // paper-style defaults
        const auto states = simulate_lorenz(params);
        REQUIRE(states.size() == 2500);
        for (const auto& s : states) {
            CHECK(s[0] >= -20.0);
            CHECK(s[0] <= 20.0);
        }
        for (size_t i = 0; i < states.size(); i += 3)
            for (size_t j = i + 1; j < states.size(); j += 3)
                CHECK(state_distance(states[i], states[j]) > 1e-6);
    }
    SUBCASE("determinism") {
        LorenzParams params;
        params.steps = 400;
        const auto a = simulate_lorenz(params);
        const auto b = simulate_lorenz(params);
        CHECK(a == b);
    }
    SUBCASE("overflow raises NonFinite") {
        LorenzParams params;
        params.step = 10.0;  // wildly unstable
        params.steps = 200;
        CHECK_THROWS_AS(simulate_lorenz(params), NonFinite);
    }
    SUBCASE("parameter validation") {
        LorenzParams params;
        params.step = 0.0;
        CHECK_THROWS_AS(simulate_lorenz(params), std::invalid_argument);
        params.step = 0.1;
        params.steps = 0;
        CHECK_THROWS_AS(simulate_lorenz(params), std::invalid_argument);
    }
}

TEST_CASE("fourth-order convergence over a short horizon") {
    LorenzParams params;
    const double h = 0.02;
    const State ref = integrate_to(1.0, h / 200.0, params);
    const double err_h = state_distance(integrate_to(1.0, h, params), ref);
    const double err_h2 = state_distance(integrate_to(1.0, h / 2.0, params), ref);
    const double ratio = err_h / err_h2;
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("normalize") {
    const auto [mapped, scale] = normalize({-1.0, 0.0, 1.0});
    CHECK(mapped == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(scale.min == -1.0);
    CHECK(scale.max == 1.0);

    const auto [kept, unit_scale] = normalize({0.0, 0.25, 1.0});
    CHECK(kept == std::vector<double>{0.0, 0.25, 1.0});

    std::mt19937 rng(401);
    std::normal_distribution<double> normal(3.0, 11.0);
    std::vector<double> series(64);
    for (auto& v : series) v = normal(rng);
    const auto [norm, s] = normalize(series);
    for (size_t i = 0; i < series.size(); ++i)
        CHECK(s.denormalize(norm[i]) == doctest::Approx(series[i]).epsilon(1e-12));

    CHECK_THROWS_AS(normalize({2.0, 2.0, 2.0}), DegenerateRange);
}

TEST_CASE("build_pairs") {
    const PairSet pairs = build_pairs({1.0, 2.0, 3.0, 4.0}, 2);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs.x(0, 0) == 2.0);  // x = [y_{k-1}, y_{k-2}]
    CHECK(pairs.x(1, 0) == 1.0);
    CHECK(pairs.y(0) == 3.0);
    CHECK(pairs.x(0, 1) == 3.0);
    CHECK(pairs.x(1, 1) == 2.0);
    CHECK(pairs.y(1) == 4.0);

    const PairSet one = build_pairs({1.0, 2.0, 3.0, 4.0}, 3);
    CHECK(one.size() == 1);

    const PairSet flat = build_pairs({5.0, 5.0, 5.0}, 1);
    CHECK(flat.x.isConstant(5.0));
    CHECK(flat.y.isConstant(5.0));

    CHECK_THROWS_AS(build_pairs({1.0, 2.0}, 2), TooShort);
}

TEST_CASE("split") {
    PairSet pairs = build_pairs(std::vector<double>(30, 0.0), 1);
    for (int k = 0; k < pairs.size(); ++k) pairs.y(k) = k;  // tag positions

    const auto segments = split(pairs, {10, 12, 7});
    CHECK(segments[0].size() == 10);
    CHECK(segments[1].size() == 12);
    CHECK(segments[2].size() == 7);
    CHECK(segments[0].y(0) == 0.0);
    CHECK(segments[1].y(0) == 10.0);
    CHECK(segments[2].y(0) == 22.0);
    CHECK(segments[2].y(6) == 28.0);

    const auto all_test = split(pairs, {0, 0, pairs.size()});
    CHECK(all_test[0].size() == 0);
    CHECK(all_test[2].size() == pairs.size());

    CHECK_THROWS_AS(split(pairs, {20, 20, 20}), InsufficientData);
}

TEST_CASE("dataset csv round-trips exactly") {
    std::mt19937 rng(419);
    std::normal_distribution<double> normal(0.0, 1e3);
    PairSet pairs;
    pairs.x.resize(2, 23);
    pairs.y.resize(23);
    for (int k = 0; k < 23; ++k) {
        pairs.x(0, k) = normal(rng);
        pairs.x(1, k) = normal(rng) * 1e-7;
        pairs.y(k) = normal(rng);
    }
    pairs.scale = Scale{-17.25, 1e6 + 1.0 / 3.0};

    const auto path = std::filesystem::temp_directory_path() / "predint_roundtrip.csv";
    write_pairs_csv(path, pairs);
    const PairSet loaded = read_pairs_csv(path);
    REQUIRE(loaded.size() == pairs.size());
    CHECK(loaded.x == pairs.x);  // bitwise round trip at 17 significant digits
    CHECK(loaded.y == pairs.y);
    CHECK(loaded.scale.min == pairs.scale.min);
    CHECK(loaded.scale.max == pairs.scale.max);
    std::filesystem::remove(path);

    CHECK_THROWS(read_pairs_csv(std::filesystem::path("/nonexistent/predint.csv")));
}
