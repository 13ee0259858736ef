#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "thermosched/numerics.hpp"
#include "thermosched/thermal.hpp"

using namespace thermosched;

static const ThermalParams kRef{0.1, 0.3, 0.0, 37.0, 38.0};

TEST_CASE("constant-segment propagation") {
    CHECK(temperature_const_segment(0.0, kRef, 37.0, 5.0) == doctest::Approx(37.0));
    CHECK(temperature_const_segment(3.0, kRef, 37.4, 0.0) == doctest::Approx(37.4));
    // T(t) = 37 + 1 - e^{-0.3 t} for p = 3 from the environment
    CHECK(temperature_const_segment(3.0, kRef, 37.0, 2.31) ==
          doctest::Approx(38.0 - std::exp(-0.3 * 2.31)).epsilon(1e-12));
    CHECK(std::abs(temperature_const_segment(3.0, kRef, 37.0, 2.31) - 37.5) < 1e-4);
    CHECK(temperature_const_segment(3.0, kRef, 37.0, 200.0) == doctest::Approx(38.0));
}

TEST_CASE("constant segment with extra heat shifts the equilibrium by c/b") {
    ThermalParams p = kRef;
    p.c = 0.06;
    double T = temperature_const_segment(0.0, p, 37.0, 1e3);
    CHECK(T == doctest::Approx(37.0 + p.c / p.b).epsilon(1e-12));
}

TEST_CASE("reciprocal-segment propagation") {
    SUBCASE("zero length is the identity") {
        CHECK(temperature_recip_segment(0.0, 0.09541, kRef, 37.3, 1.0, 1.0) ==
              doctest::Approx(37.3));
    }

    SUBCASE("matches RK4 on the reference decay segment") {
        double beta = 0.0, C = 0.09541;
        double T_end = temperature_recip_segment(beta, C, kRef, 37.0, 0.0, 2.0);
        auto P = [&](double t) { return 1.0 / (beta + C * std::exp(kRef.b * t)) - 1.0; };
        auto traj = num::integrate_ode_rk4(P, kRef, 37.0, 2.0, 1e-4);
        CHECK(std::abs(T_end - traj.temperature[traj.size() - 1]) < 1e-6);
    }

    SUBCASE("rejects segments whose power changes sign inside") {
        // beta + C e^{bt} crosses 1 strictly inside [0, 10]
        CHECK_THROWS_AS(temperature_recip_segment(0.5, 0.09541, kRef, 37.0, 0.0, 10.0),
                        std::invalid_argument);
    }

    SUBCASE("matches RK4 on randomized sign-definite segments") {
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 40; ++trial) {
            ThermalParams p{0.05 + 0.4 * u(rng), 0.1 + 1.2 * u(rng), 0.0, 37.0, 37.5 + u(rng)};
            double t1 = 2.0 * u(rng);
            double beta = 0.6 * u(rng);
            // choose C so that P > 0 over [t1, t2]
            double t2 = t1 + 0.3 + 2.0 * u(rng);
            double C = (1.0 - beta) * std::exp(-p.b * t2) * (0.2 + 0.7 * u(rng));
            double T1 = p.T_e + (p.T_c - p.T_e) * u(rng);
            double T_end = temperature_recip_segment(beta, C, p, T1, t1, t2);
            auto P = [&](double t) {
                return 1.0 / (beta + C * std::exp(p.b * (t1 + t))) - 1.0;
            };
            auto traj = num::integrate_ode_rk4(P, p, T1, t2 - t1, (t2 - t1) * 1e-4);
            CHECK(std::abs(T_end - traj.temperature[traj.size() - 1]) < 1e-6);
        }
    }
}

TEST_CASE("energy accumulation") {
    PowerPolicy zero = PowerPolicy::zero(3.5);
    CHECK(energy_of_policy(zero, kRef, 3.5) == doctest::Approx(0.0));

    PowerPolicy c3;
    c3.segments.push_back(PowerSegment::constant(0.0, 2.0, 3.0));
    CHECK(energy_of_policy(c3, kRef, 2.0) == doctest::Approx(6.0));

    // reciprocal antiderivatives vs dense midpoint sums, both branches
    for (double beta : {0.0, 0.13}) {
        PowerSegment seg = PowerSegment::recip(0.4, 2.9, beta, 0.07);
        double closed = segment_energy(seg, kRef.b, 2.9);
        const int N = 400000;
        double h = (2.9 - 0.4) / N, sum = 0.0;
        for (int i = 0; i < N; ++i) sum += seg.power(0.4 + (i + 0.5) * h, kRef.b) * h;
        CHECK(std::abs(closed - sum) < 1e-8);
    }
}

TEST_CASE("throughput integrals") {
    PowerPolicy c3;
    c3.segments.push_back(PowerSegment::constant(0.0, 2.0, 3.0));
    CHECK(throughput_of_policy(c3, kRef) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(throughput_of_policy(PowerPolicy::zero(4.0), kRef) == doctest::Approx(0.0));
}

TEST_CASE("trajectory sampling") {
    SUBCASE("zero policy from the environment stays flat") {
        auto traj = temperature_trajectory(PowerPolicy::zero(2.0), kRef, 37.0, 64);
        for (Eigen::Index i = 0; i < traj.size(); ++i) {
            CHECK(traj.temperature[i] == doctest::Approx(37.0));
            CHECK(traj.energy[i] == doctest::Approx(0.0));
        }
    }

    SUBCASE("malformed policies are rejected") {
        PowerPolicy gap;
        gap.segments.push_back(PowerSegment::constant(0.0, 1.0, 1.0));
        gap.segments.push_back(PowerSegment::constant(1.5, 2.0, 1.0));
        CHECK_THROWS_AS(temperature_trajectory(gap, kRef, 37.0, 16), std::invalid_argument);
    }

    SUBCASE("endpoint agrees with RK4 on a mixed policy") {
        PowerPolicy mixed;
        mixed.segments.push_back(PowerSegment::recip(0.0, 1.3, 0.05, 0.08));
        mixed.segments.push_back(PowerSegment::constant(1.3, 2.1, 2.2));
        mixed.segments.push_back(PowerSegment::constant(2.1, 3.0, 0.4));
        auto traj = temperature_trajectory(mixed, kRef, 37.1, 128);
        auto P = [&](double t) { return mixed.power(std::min(t, 3.0 - 1e-12), kRef.b); };
        auto ref = num::integrate_ode_rk4(P, kRef, 37.1, 3.0, 3e-5);
        CHECK(std::abs(traj.temperature[traj.size() - 1] -
                       ref.temperature[ref.size() - 1]) < 1e-6);
    }
}

TEST_CASE("energy causality checks") {
    ArrivalProfile prof{4.0, {0.0}, {8.0}};

    SUBCASE("constant E/D is feasible and tight exactly at the deadline") {
        PowerPolicy p;
        p.segments.push_back(PowerSegment::constant(0.0, 4.0, 2.0));
        auto rep = check_energy_causality(p, kRef, prof);
        CHECK(rep.feasible);
        REQUIRE(rep.tight_instants.size() == 1);
        CHECK(rep.tight_instants[0] == doctest::Approx(4.0));
    }

    SUBCASE("depleting before the first arrival is infeasible at s_1") {
        ArrivalProfile two{4.0, {0.0, 1.0}, {1.0, 7.0}};
        PowerPolicy p;
        p.segments.push_back(PowerSegment::constant(0.0, 4.0, 2.0));
        auto rep = check_energy_causality(p, kRef, two);
        CHECK_FALSE(rep.feasible);
        CHECK(rep.worst_location == doctest::Approx(1.0));
    }
}

TEST_CASE("temperature ceiling checks") {
    SUBCASE("zero policy from the environment is feasible") {
        auto rep = check_temperature(PowerPolicy::zero(5.0), kRef, 37.0);
        CHECK(rep.feasible);
        CHECK(rep.worst_violation == doctest::Approx(0.0));
    }

    SUBCASE("constant p=6 crosses the ceiling exactly past ln2/b") {
        double t_cross = std::log(2.0) / kRef.b;  // ~2.3105
        PowerPolicy shorter;
        shorter.segments.push_back(PowerSegment::constant(0.0, t_cross - 0.01, 6.0));
        CHECK(check_temperature(shorter, kRef, 37.0).feasible);
        PowerPolicy longer;
        longer.segments.push_back(PowerSegment::constant(0.0, t_cross + 0.01, 6.0));
        CHECK_FALSE(check_temperature(longer, kRef, 37.0).feasible);
    }

    SUBCASE("interior peak of a reciprocal segment is caught") {
        // strong initial power that decays: temperature peaks inside
        PowerPolicy p;
        double C = std::exp(-kRef.b * 1.2) / (kRef.saturation_power() + 1.0);
        p.segments.push_back(PowerSegment::recip(0.0, 3.0, 0.0, 0.9 * C));
        auto rep = check_temperature(p, kRef, 37.0);
        CHECK_FALSE(rep.feasible);
        CHECK(rep.worst_location > 0.5);
        CHECK(rep.worst_location < 3.0);
    }
}
