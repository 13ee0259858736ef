#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "thermosched/numerics.hpp"
#include "thermosched/thermal.hpp"

using namespace thermosched;

TEST_CASE("bisect finds simple roots deterministically") {
    auto f = [](double x) { return x - 1.0; };
    CHECK(num::bisect(f, 0.0, 2.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-10));
    // repeated runs give the identical value
    CHECK(num::bisect(f, 0.0, 2.0, 1e-12) == num::bisect(f, 0.0, 2.0, 1e-12));
}

TEST_CASE("bisect rejects invalid brackets") {
    auto f = [](double x) { return x * x + 1.0; };
    CHECK_THROWS_AS(num::bisect(f, 0.0, 1.0, 1e-10), num::BracketError);
}

// Saturation-onset equation for the unlimited-energy policy:
// (1/b)(1 - e^{-b t}/(pbar + 1)) - t = 0.
static double onset_root(double a, double b, double T_delta) {
    double pbar = T_delta * b / a;
    auto w = [&](double t) { return (1.0 - std::exp(-b * t) / (pbar + 1.0)) / b - t; };
    return num::bisect(w, 1e-9, 50.0, 1e-12);
}

TEST_CASE("onset equation reproduces the reference instants") {
    CHECK(std::abs(onset_root(0.1, 0.3, 1.0) - 2.993) < 1e-3);
    CHECK(std::abs(onset_root(0.1, 1.1, 0.92) - 0.878) < 1e-3);
}

TEST_CASE("adaptive quadrature basics") {
    CHECK(num::quad_adaptive([](double) { return 1.0; }, 0.0, 1.0, 1e-12) ==
          doctest::Approx(1.0).epsilon(1e-12));
    double ex = num::quad_adaptive([](double t) { return std::exp(t); }, 0.0, 1.0, 1e-12);
    CHECK(std::abs(ex - (std::exp(1.0) - 1.0)) < 1e-10);
}

TEST_CASE("adaptive quadrature matches a dense Riemann sum on the rate integrand") {
    const double b = 0.3, C = 0.09541;
    auto f = [&](double t) {
        double P = 1.0 / (C * std::exp(b * t)) - 1.0;
        return 0.5 * std::log2(1.0 + P);
    };
    double q = num::quad_adaptive(f, 0.0, 2.0, 1e-12);
    // midpoint Riemann oracle
    const int N = 1000000;
    double h = 2.0 / N, sum = 0.0;
    for (int i = 0; i < N; ++i) sum += f((i + 0.5) * h) * h;
    CHECK(std::abs(q - sum) < 1e-6);
}

TEST_CASE("RK4 reference integrator") {
    ThermalParams params{0.1, 0.3, 0.0, 37.0, 38.0};

    SUBCASE("zero power stays at the environment temperature") {
        auto traj = num::integrate_ode_rk4([](double) { return 0.0; }, params, 37.0, 2.0, 1e-3);
        for (Eigen::Index i = 0; i < traj.size(); ++i)
            CHECK(traj.temperature[i] == doctest::Approx(37.0).epsilon(1e-14));
    }

    SUBCASE("constant power matches the closed form to 1e-8 at step 1e-4") {
        auto traj = num::integrate_ode_rk4([](double) { return 3.0; }, params, 37.0, 2.0, 1e-4);
        double T_end = traj.temperature[traj.size() - 1];
        double exact = temperature_const_segment(3.0, params, 37.0, 2.0);
        CHECK(std::abs(T_end - exact) < 1e-8);
    }

    SUBCASE("saturation power from T_c is the ODE equilibrium") {
        double pbar = params.saturation_power();
        auto traj = num::integrate_ode_rk4([=](double) { return pbar; }, params, 38.0, 3.0, 1e-3);
        for (Eigen::Index i = 0; i < traj.size(); ++i)
            CHECK(std::abs(traj.temperature[i] - 38.0) < 1e-12);
    }

    SUBCASE("error scales as step^4: 4x refinement reduces error >= 200x") {
        auto end_error = [&](double step) {
            auto traj = num::integrate_ode_rk4([](double t) { return 2.0 + std::sin(t); },
                                               params, 37.2, 2.0, step);
            // reference at a much finer step
            auto ref = num::integrate_ode_rk4([](double t) { return 2.0 + std::sin(t); },
                                              params, 37.2, 2.0, step / 64.0);
            return std::abs(traj.temperature[traj.size() - 1] -
                            ref.temperature[ref.size() - 1]);
        };
        double e1 = end_error(0.02);
        double e2 = end_error(0.005);
        CHECK(e1 / e2 >= 200.0);
    }
}

TEST_CASE("one-level nested solve reduces to bisection") {
    num::NestedSolveConfig cfg;
    cfg.levels.push_back({0.0, 2.0, 1e-12});
    cfg.residual = [](int, const std::vector<double>& x) { return x[0] * x[0] - 2.0; };
    auto x = num::solve_monotone_system(cfg);
    CHECK(x[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("nested solve surfaces bracket failure") {
    num::NestedSolveConfig cfg;
    cfg.levels.push_back({0.0, 1.0, 1e-10});
    cfg.residual = [](int, const std::vector<double>& x) { return x[0] + 1.0; };
    CHECK_THROWS_AS(num::solve_monotone_system(cfg), num::BracketError);
}
