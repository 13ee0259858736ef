#pragma once

// Certification of candidate optima: reconstruction of the Lagrange
// multipliers implied by a policy's analytic structure, and evaluation of
// the discretized stationarity / feasibility / complementary-slackness
// residuals on a grid.

#include "thermosched/types.hpp"

namespace thermosched {

/// Uniform grid over [0, D] with the arrival instants and the policy's
/// segment boundaries snapped onto it.
VectorXd certification_grid(const PowerPolicy& policy, const ArrivalProfile& profile,
                            int grid_n);

/// Reconstructs grid multipliers from the policy structure: every
/// reciprocal-exponential stretch pins the tail sums of both multiplier
/// families; saturation stretches carry a temperature-multiplier density;
/// atoms land at arrival instants and the deadline. Returns weights on the
/// given grid.
DualState reconstruct_multipliers(const PowerPolicy& policy, const ThermalParams& params,
                                  const ArrivalProfile& profile, const VectorXd& grid);

/// Residuals of the discretized optimality conditions for an arbitrary
/// (policy, multipliers) pair. Constraint values are evaluated with the
/// exact closed-form integrals of the policy at the grid points; the
/// duality gap is the total complementary-slackness mass, meaningful once
/// the stationarity residual is small.
KKTCertificate kkt_certificate(const PowerPolicy& policy, const DualState& duals,
                               const ArrivalProfile& profile, const ThermalParams& params);

}  // namespace thermosched
