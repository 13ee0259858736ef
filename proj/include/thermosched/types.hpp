#pragma once

// Core domain types for temperature-constrained transmit power scheduling:
// thermal model constants, energy arrival profiles, piecewise-analytic power
// policies and sampled trajectories.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace thermosched {

using Eigen::VectorXd;

/// Default feasibility tolerance (temperature / energy units).
inline constexpr double kFeasTol = 1e-7;
/// Tolerance for reporting a constraint as active ("tight").
inline constexpr double kTightTol = 1e-5;

/// Constants of the first-order thermal model
///   dT/dt = a P(t) - b (T(t) - T_e) + c.
struct ThermalParams {
    double a;        ///< heat per unit power (temperature / (power * time))
    double b;        ///< cooling rate (1 / time)
    double c = 0.0;  ///< extra heat rate (temperature / time)
    double T_e;      ///< environment temperature
    double T_c;      ///< critical temperature ceiling

    /// Largest allowed deviation from the environment temperature.
    double T_delta() const { return T_c - T_e; }

    /// Power level that holds the temperature exactly at T_c.
    double saturation_power() const { return T_delta() * b / a; }

    /// Effective environment temperature once the constant heat rate c is
    /// folded into the relaxation term.
    double T_env_eff() const { return T_e + c / b; }

    void validate() const {
        if (!(a > 0.0)) throw std::invalid_argument("ThermalParams: a must be > 0");
        if (!(b > 0.0)) throw std::invalid_argument("ThermalParams: b must be > 0");
        if (!(T_c > T_e)) throw std::invalid_argument("ThermalParams: T_c must exceed T_e");
    }
};

/// Energy arrival times and amounts. The first arrival is at t = 0.
struct ArrivalProfile {
    double deadline;                 ///< D
    std::vector<double> times;       ///< 0 = s_0 < s_1 < ... < s_N < D
    std::vector<double> energies;    ///< E_i >= 0, at least one positive

    std::size_t count() const { return times.size(); }

    /// Cumulative energy available strictly after arrival i (inclusive).
    double available_through(std::size_t i) const {
        double sum = 0.0;
        for (std::size_t k = 0; k <= i && k < energies.size(); ++k) sum += energies[k];
        return sum;
    }

    double total_energy() const { return available_through(count() - 1); }

    /// Cumulative harvested energy usable at time t (arrivals at s <= t
    /// count; the constraint binds at epoch right-endpoints).
    double available_at(double t) const {
        double sum = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k)
            if (times[k] < t || times[k] == 0.0) sum += energies[k];
        return sum;
    }

    void validate() const {
        if (!(deadline > 0.0)) throw std::invalid_argument("ArrivalProfile: deadline must be > 0");
        if (times.empty() || times.size() != energies.size())
            throw std::invalid_argument("ArrivalProfile: times/energies size mismatch");
        if (times.front() != 0.0)
            throw std::invalid_argument("ArrivalProfile: first arrival must be at t = 0");
        double prev = -1.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (times[i] <= prev)
                throw std::invalid_argument("ArrivalProfile: arrival times must be strictly increasing");
            if (times[i] >= deadline && i > 0)
                throw std::invalid_argument("ArrivalProfile: arrival times must precede the deadline");
            if (energies[i] < 0.0)
                throw std::invalid_argument("ArrivalProfile: energies must be nonnegative");
            prev = times[i];
        }
        // An all-zero profile is accepted: the zero policy is its optimum.
    }
};

/// One analytic piece of a power policy on [t_begin, t_end).
///
/// Kinds:
///  - Constant: P(t) = level.
///  - ReciprocalExp: P(t) = 1/(offset + coeff * e^{b t}) - 1, strictly
///    positive on the whole segment (callers split at the zero crossing).
struct PowerSegment {
    enum class Kind { Constant, ReciprocalExp };

    Kind kind;
    double t_begin;
    double t_end;
    double level = 0.0;   ///< Constant power level
    double offset = 0.0;  ///< beta in 1/(beta + C e^{bt}) - 1
    double coeff = 0.0;   ///< C in 1/(beta + C e^{bt}) - 1

    static PowerSegment constant(double t0, double t1, double p) {
        return {Kind::Constant, t0, t1, p, 0.0, 0.0};
    }
    static PowerSegment recip(double t0, double t1, double beta, double C) {
        return {Kind::ReciprocalExp, t0, t1, 0.0, beta, C};
    }

    /// Power at absolute time t (no bounds check; b is the cooling rate the
    /// reciprocal-exponential form was built with).
    double power(double t, double b) const {
        if (kind == Kind::Constant) return level;
        double den = offset + coeff * std::exp(b * t);
        return std::max(0.0, 1.0 / den - 1.0);
    }
};

/// Piecewise-analytic power schedule tiling [0, D).
struct PowerPolicy {
    std::vector<PowerSegment> segments;

    double duration() const { return segments.empty() ? 0.0 : segments.back().t_end; }

    /// Right-limit power at time t.
    double power(double t, double b) const {
        for (const auto& s : segments)
            if (t >= s.t_begin && t < s.t_end) return s.power(t, b);
        if (!segments.empty() && t >= segments.back().t_end)
            return segments.back().power(segments.back().t_end, b);
        return 0.0;
    }

    /// Checks the segments tile [0, duration] without gaps or overlaps.
    void validate() const {
        if (segments.empty()) throw std::invalid_argument("PowerPolicy: empty");
        double cursor = 0.0;
        for (const auto& s : segments) {
            if (!(s.t_begin < s.t_end))
                throw std::invalid_argument("PowerPolicy: segment with nonpositive length");
            if (std::abs(s.t_begin - cursor) > 1e-12 * std::max(1.0, cursor))
                throw std::invalid_argument("PowerPolicy: gap or overlap between segments");
            if (s.kind == PowerSegment::Kind::Constant && s.level < 0.0)
                throw std::invalid_argument("PowerPolicy: negative constant level");
            if (s.kind == PowerSegment::Kind::ReciprocalExp &&
                (s.offset < 0.0 || s.coeff < 0.0 || (s.offset == 0.0 && s.coeff == 0.0)))
                throw std::invalid_argument("PowerPolicy: invalid reciprocal-exponential parameters");
            cursor = s.t_end;
        }
    }

    static PowerPolicy zero(double D) {
        PowerPolicy p;
        p.segments.push_back(PowerSegment::constant(0.0, D, 0.0));
        return p;
    }
};

/// Sampled time series of a policy run: power, temperature, cumulative
/// energy and instantaneous rate, with samples at every segment boundary.
struct Trajectory {
    VectorXd t;
    VectorXd power;
    VectorXd temperature;
    VectorXd energy;  ///< cumulative transmitted energy B(t)
    VectorXd rate;    ///< 0.5 log2(1 + P)

    Eigen::Index size() const { return t.size(); }
};

/// Outcome of a feasibility check over one constraint family.
struct FeasibilityReport {
    bool feasible = true;
    double worst_violation = 0.0;  ///< max positive violation (0 when feasible)
    double worst_location = 0.0;   ///< time of the worst violation
    std::vector<double> tight_instants;  ///< constraint active within kTightTol
};

/// How the optimum was characterized.
enum class SolveRegime {
    ConstantPower,              ///< E <= E_critical, P = E/D throughout
    UnconstrainedSaturated,     ///< ample energy, ceiling reached at t_sat < D
    UnconstrainedNoSaturation,  ///< ample energy, ceiling reached exactly at D
    EnergyLimitedSaturated,     ///< both constraints bind, plateau from t_sat
    EnergyLimitedBoundary,      ///< both bind, temperature tight only at D
    MultiArrival,               ///< general staircase/dual solution
};

const char* to_string(SolveRegime r);

/// Grid representation of the dual variables: one energy multiplier per
/// arrival instant (s_1..s_N and D) and a nonnegative weight per grid point
/// for the temperature constraint (a discrete measure).
struct DualState {
    std::vector<double> energy_mult;  ///< mu_j at s_1..s_N, D
    VectorXd grid;                    ///< grid points carrying temp weights
    VectorXd temp_mult;               ///< lambda weights (same size as grid)
    double step_size = 0.0;
    long iterations = 0;
};

/// Residuals of the discretized optimality conditions.
struct KKTCertificate {
    double stationarity = 0.0;    ///< max | 1/(1+P) - tail(mu) - e^{bt} tail(lambda) |
    double feasibility = 0.0;     ///< max positive constraint violation
    double slackness = 0.0;       ///< max multiplier * |slack|
    double duality_gap = 0.0;     ///< dual value minus primal objective
    bool pass(double tol = 1e-5) const {
        return stationarity <= tol && feasibility <= tol && slackness <= tol;
    }
};

/// Structure annotations extracted from a solved policy.
struct StructureInfo {
    std::vector<double> jump_instants;       ///< positive power jumps (arrivals)
    double saturation_time = -1.0;           ///< onset of the final plateau (-1: none)
    std::vector<std::pair<double, double>> ceiling_intervals;  ///< T == T_c stretches
    bool energy_wasted = false;              ///< battery not emptied by D
    bool fitted = true;                      ///< analytic fit succeeded
};

/// Full result of a solve: policy, multipliers, value and certification.
struct SolveReport {
    PowerPolicy policy;
    SolveRegime regime = SolveRegime::MultiArrival;
    double throughput_bits = 0.0;
    double consumed_energy = 0.0;
    DualState duals;
    KKTCertificate kkt;
    StructureInfo structure;
    bool certified = false;
    std::string diagnostics;
};

}  // namespace thermosched
