#pragma once

// Exact optimal policies for a single energy arrival at t = 0, covering all
// regimes: constant power, temperature-limited with and without a terminal
// plateau, and the energy-limited transitional forms.

#include "thermosched/types.hpp"

namespace thermosched {

/// Largest initial energy for which the constant policy E/D never violates
/// the temperature ceiling: p_sat * D * e^{bD} / (e^{bD} - 1).
double critical_energy(const ThermalParams& params, double D);

/// Critical-temperature threshold above which the constant policy E/D is
/// optimal for the given energy: T_e + (a/b)(E/D)(e^{bD} - 1)/e^{bD}.
double critical_temperature_limit(const ThermalParams& params, double E, double D);

/// First instant the optimal temperature reaches T_c when energy is
/// unlimited: the unique positive root of
///   (1/b)(1 - e^{-b t}/(p_sat + 1)) - t = 0.
double saturation_time_unbounded(const ThermalParams& params);

struct UnboundedSolution {
    PowerPolicy policy;
    double required_energy;   ///< total energy the policy consumes
    double saturation_time;   ///< onset of the plateau, or D when the
                              ///< ceiling is reached exactly at the deadline
    bool saturated;           ///< true when a plateau exists (t_sat < D)
};

/// Optimal policy when energy is abundant: a decaying reciprocal-
/// exponential stretch, followed by the saturation power once the ceiling
/// is reached (or running to the deadline when D is shorter than the
/// unbounded saturation time).
UnboundedSolution solve_energy_unbounded(const ThermalParams& params, double D);

struct EnergyLimitedSolution {
    PowerPolicy policy;
    double beta;             ///< energy multiplier (paper-normalized)
    double C;                ///< temperature multiplier tail constant
    double saturation_time;  ///< plateau onset; equals D in the boundary regime
    bool boundary;           ///< true when temperature is tight only at t = D
};

/// Both constraints bind: finds (beta, C, t_sat) with power continuity and
/// ceiling tightness at t_sat and total energy E; falls back to the
/// two-equation system with the ceiling tight only at the deadline when no
/// interior t_sat exists. Throws num::BracketError on regime
/// misclassification.
EnergyLimitedSolution solve_energy_limited(const ThermalParams& params, double E, double D);

/// Full single-arrival solve: regime dispatch, multipliers, certification.
/// `grid_n` controls the certification grid.
SolveReport solve_single(const ThermalParams& params, double E, double D,
                         int grid_n = 4096);

}  // namespace thermosched
