#include "thermosched/single_arrival.hpp"

#include <cmath>

#include "thermosched/kkt.hpp"
#include "thermosched/numerics.hpp"
#include "thermosched/thermal.hpp"

namespace thermosched {

namespace {

void require_no_extra_heat(const ThermalParams& params) {
    if (params.c != 0.0)
        throw std::invalid_argument(
            "solver supports c == 0 only; nonzero extra heat is limited to trajectory simulation");
}

// integral of a e^{bt} P(t) dt for P = 1/(beta + C e^{bt}) - 1, clamped at
// the zero crossing of P
double heat_recip(const ThermalParams& params, double beta, double C, double t1, double t2) {
    const double a = params.a, b = params.b;
    if (C <= 0.0) {
        double p = std::max(0.0, 1.0 / beta - 1.0);
        return (a / b) * p * (std::exp(b * t2) - std::exp(b * t1));
    }
    double tz = recip_zero_crossing(beta, C, b);
    t2 = std::min(t2, std::max(t1, tz));
    if (t2 <= t1) return 0.0;
    double log_ratio = std::log((beta + C * std::exp(b * t2)) / (beta + C * std::exp(b * t1)));
    return (a / (b * C)) * log_ratio - (a / b) * (std::exp(b * t2) - std::exp(b * t1));
}

double energy_recip(const ThermalParams& params, double beta, double C, double t1, double t2) {
    PowerSegment seg = PowerSegment::recip(t1, t2, beta, C);
    return segment_energy(seg, params.b, t2);
}

}  // namespace

double critical_energy(const ThermalParams& params, double D) {
    if (!(D > 0.0)) throw std::invalid_argument("critical_energy: D must be > 0");
    double ebD = std::exp(params.b * D);
    return params.saturation_power() * D * ebD / (ebD - 1.0);
}

double critical_temperature_limit(const ThermalParams& params, double E, double D) {
    if (!(D > 0.0) || !(E > 0.0))
        throw std::invalid_argument("critical_temperature_limit: E and D must be > 0");
    double ebD = std::exp(params.b * D);
    return params.T_e + (params.a / params.b) * (E / D) * (ebD - 1.0) / ebD;
}

double saturation_time_unbounded(const ThermalParams& params) {
    params.validate();
    require_no_extra_heat(params);
    const double b = params.b;
    const double denom = params.saturation_power() + 1.0;
    auto w = [&](double t) { return (1.0 - std::exp(-b * t) / denom) / b - t; };
    double hi = 1.0 / b;
    while (w(hi) > 0.0) hi *= 2.0;
    return num::bisect(w, 0.0, hi, 1e-12);
}

UnboundedSolution solve_energy_unbounded(const ThermalParams& params, double D) {
    params.validate();
    require_no_extra_heat(params);
    if (!(D > 0.0)) throw std::invalid_argument("solve_energy_unbounded: D must be > 0");
    const double b = params.b;
    const double pbar = params.saturation_power();
    double t_sat = saturation_time_unbounded(params);

    UnboundedSolution out;
    if (t_sat < D) {
        double C = std::exp(-b * t_sat) / (pbar + 1.0);
        out.policy.segments.push_back(PowerSegment::recip(0.0, t_sat, 0.0, C));
        out.policy.segments.push_back(PowerSegment::constant(t_sat, D, pbar));
        out.required_energy =
            (pbar + 1.0) * (std::exp(b * t_sat) - 1.0) / b - t_sat + pbar * (D - t_sat);
        out.saturation_time = t_sat;
        out.saturated = true;
    } else {
        double C = D / ((params.T_delta() / params.a + 1.0 / b) * std::exp(b * D) - 1.0 / b);
        out.policy.segments.push_back(PowerSegment::recip(0.0, D, 0.0, C));
        out.required_energy = (1.0 - std::exp(-b * D)) / (b * C) - D;
        out.saturation_time = D;
        out.saturated = false;
    }
    return out;
}

EnergyLimitedSolution solve_energy_limited(const ThermalParams& params, double E, double D) {
    params.validate();
    require_no_extra_heat(params);
    const double b = params.b;
    const double pbar = params.saturation_power();
    const double q = 1.0 / (pbar + 1.0);
    const double Td = params.T_delta();
    const double t_unb = saturation_time_unbounded(params);

    // Plateau system: outer unknown is the plateau onset, inner is the
    // temperature-multiplier constant C with beta eliminated through the
    // power-continuity condition at the onset.
    auto plateau_inner_residual = [&](double t_sat, double C) {
        double beta = q - C * std::exp(b * t_sat);
        return heat_recip(params, beta, C, 0.0, t_sat) - Td * std::exp(b * t_sat);
    };
    auto plateau_outer_residual = [&](double t_sat, double C) {
        double beta = q - C * std::exp(b * t_sat);
        return energy_recip(params, beta, C, 0.0, t_sat) + pbar * (D - t_sat) - E;
    };

    if (t_unb < D) {
        num::NestedSolveConfig cfg;
        cfg.levels.push_back({t_unb * (1.0 + 1e-12), D, 1e-10});
        cfg.levels.push_back({0.0, 0.0, 1e-13});  // C bracket filled per candidate
        // the C bracket depends on t_sat, so wrap the residual to rescale
        cfg.residual = [&](int level, const std::vector<double>& x) {
            double t_sat = x[0];
            double Cmax = q * std::exp(-b * t_sat);
            double C = x[1] * Cmax;  // level-1 unknown is C / Cmax
            if (level == 1) return plateau_inner_residual(t_sat, C);
            return plateau_outer_residual(t_sat, C);
        };
        cfg.levels[1].lo = 1e-13;
        cfg.levels[1].hi = 1.0 - 1e-13;
        try {
            auto x = num::solve_monotone_system(cfg);
            double t_sat = x[0];
            double C = x[1] * q * std::exp(-b * t_sat);
            double beta = q - C * std::exp(b * t_sat);
            EnergyLimitedSolution out;
            out.policy.segments.push_back(PowerSegment::recip(0.0, t_sat, beta, C));
            out.policy.segments.push_back(PowerSegment::constant(t_sat, D, pbar));
            out.beta = beta;
            out.C = C;
            out.saturation_time = t_sat;
            out.boundary = false;
            return out;
        } catch (const num::BracketError&) {
            // no interior onset: ceiling tight only at the deadline
        }
    }

    // Boundary system: unknowns (beta, C); ceiling tight exactly at D and
    // total energy E.
    double P_const = critical_energy(params, D) / D;
    double beta_hi = 1.0 / (P_const + 1.0);
    num::NestedSolveConfig cfg;
    cfg.levels.push_back({1e-14, beta_hi * (1.0 - 1e-12), 1e-12});
    cfg.levels.push_back({1e-12, 1.0 - 1e-12, 1e-14});  // C / C_cap
    cfg.residual = [&](int level, const std::vector<double>& x) {
        double beta = x[0];
        double C_cap = (1.0 - beta) * std::exp(-b * D);  // keeps P(D) >= 0
        double C = x[1] * C_cap;
        if (level == 1) return heat_recip(params, beta, C, 0.0, D) - Td * std::exp(b * D);
        return energy_recip(params, beta, C, 0.0, D) - E;
    };
    auto x = num::solve_monotone_system(cfg);
    double beta = x[0];
    double C = x[1] * (1.0 - beta) * std::exp(-b * D);
    EnergyLimitedSolution out;
    out.policy.segments.push_back(PowerSegment::recip(0.0, D, beta, C));
    out.beta = beta;
    out.C = C;
    out.saturation_time = D;
    out.boundary = true;
    return out;
}

SolveReport solve_single(const ThermalParams& params, double E, double D, int grid_n) {
    params.validate();
    require_no_extra_heat(params);
    if (!(D > 0.0) || E < 0.0) throw std::invalid_argument("solve_single: invalid inputs");

    const double pbar = params.saturation_power();
    SolveReport rep;

    const double E_crit = critical_energy(params, D);
    // exact ties go to the simpler regime
    if (E <= E_crit * (1.0 + 1e-9)) {
        rep.policy.segments.push_back(PowerSegment::constant(0.0, D, E / D));
        rep.regime = SolveRegime::ConstantPower;
        rep.consumed_energy = E;
    } else {
        UnboundedSolution unb = solve_energy_unbounded(params, D);
        if (E >= unb.required_energy * (1.0 - 1e-9)) {
            rep.policy = unb.policy;
            rep.regime = unb.saturated ? SolveRegime::UnconstrainedSaturated
                                       : SolveRegime::UnconstrainedNoSaturation;
            rep.consumed_energy = unb.required_energy;
            rep.structure.saturation_time = unb.saturation_time;
            rep.structure.energy_wasted = E > unb.required_energy * (1.0 + 1e-12);
        } else {
            EnergyLimitedSolution lim = solve_energy_limited(params, E, D);
            rep.policy = lim.policy;
            rep.regime = lim.boundary ? SolveRegime::EnergyLimitedBoundary
                                      : SolveRegime::EnergyLimitedSaturated;
            rep.consumed_energy = E;
            rep.structure.saturation_time = lim.saturation_time;
        }
    }

    ArrivalProfile profile{D, {0.0}, {E}};
    rep.throughput_bits = throughput_of_policy(rep.policy, params);
    for (const auto& seg : rep.policy.segments)
        if (seg.kind == PowerSegment::Kind::Constant &&
            std::abs(seg.level - pbar) <= 1e-9 * (1.0 + pbar))
            rep.structure.ceiling_intervals.emplace_back(seg.t_begin, seg.t_end);

    VectorXd grid = certification_grid(rep.policy, profile, grid_n);
    rep.duals = reconstruct_multipliers(rep.policy, params, profile, grid);
    rep.kkt = kkt_certificate(rep.policy, rep.duals, profile, params);
    rep.certified = rep.kkt.pass() &&
                    check_temperature(rep.policy, params, params.T_e).feasible &&
                    check_energy_causality(rep.policy, params, profile).feasible;
    return rep;
}

}  // namespace thermosched
