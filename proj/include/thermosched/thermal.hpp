#pragma once

// Closed-form evaluation of the thermal ODE along the two analytic segment
// kinds, exact energy and throughput integrals, trajectory sampling and
// feasibility checks for arbitrary piecewise-analytic policies.

#include "thermosched/types.hpp"

namespace thermosched {

/// End temperature of a constant-power stretch of length dt starting from
/// T_start. Exact solution of the ODE; the extra heat rate c shifts the
/// equilibrium by c/b.
double temperature_const_segment(double p, const ThermalParams& params,
                                 double T_start, double dt);

/// End temperature of a reciprocal-exponential stretch
/// P(t) = 1/(beta + C e^{bt}) - 1 over absolute times [t1, t2], starting
/// from T_start at t1. Requires P > 0 throughout (split at the zero
/// crossing first); throws std::invalid_argument when P changes sign
/// inside the segment.
double temperature_recip_segment(double beta, double C, const ThermalParams& params,
                                 double T_start, double t1, double t2);

/// Time at which 1/(beta + C e^{bt}) - 1 crosses zero, or +inf when the
/// expression stays positive (beta >= 1 means it is never positive).
double recip_zero_crossing(double beta, double C, double b);

/// Exact cumulative energy of one segment over [seg.t_begin, t].
double segment_energy(const PowerSegment& seg, double b, double t);

/// Exact cumulative transmitted energy of the policy over [0, t].
double energy_of_policy(const PowerPolicy& policy, const ThermalParams& params, double t);

/// Throughput = integral of 0.5 log2(1 + P) over the whole policy.
/// Constant segments are exact; reciprocal-exponential segments use
/// adaptive quadrature to 1e-10 absolute.
double throughput_of_policy(const PowerPolicy& policy, const ThermalParams& params);

/// Temperature at the end of one segment given its start temperature.
double segment_end_temperature(const PowerSegment& seg, const ThermalParams& params,
                               double T_start);

/// Temperature at absolute time t inside a segment (t in [t_begin, t_end]).
double segment_temperature_at(const PowerSegment& seg, const ThermalParams& params,
                              double T_start, double t);

/// Piecewise-exact trajectory of the policy from initial temperature T0
/// with at least n_samples samples; every segment boundary and every
/// arrival instant of `profile` (may be null) appears as a sample.
Trajectory temperature_trajectory(const PowerPolicy& policy, const ThermalParams& params,
                                  double T0, int n_samples,
                                  const ArrivalProfile* profile = nullptr);

/// Energy-causality check at epoch right-endpoints (sufficient: the bound
/// is constant within an epoch and cumulative energy is nondecreasing).
FeasibilityReport check_energy_causality(const PowerPolicy& policy,
                                         const ThermalParams& params,
                                         const ArrivalProfile& profile);

/// Temperature-ceiling check: exact per-segment analysis (segment
/// endpoints plus the interior extremum of reciprocal-exponential
/// segments, located by bisection on the analytic derivative).
FeasibilityReport check_temperature(const PowerPolicy& policy, const ThermalParams& params,
                                    double T0);

}  // namespace thermosched
