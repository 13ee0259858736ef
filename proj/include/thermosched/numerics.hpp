#pragma once

// Shared numerical kernels: bracketed bisection, adaptive Simpson
// quadrature, a fixed-step RK4 reference integrator for the thermal ODE,
// and a nested bisection driver for small monotone systems.

#include <functional>
#include <vector>

#include "thermosched/types.hpp"

namespace thermosched::num {

/// Scalar root problem on a sign-changing bracket.
struct BracketedRootProblem {
    std::function<double(double)> f;
    double lo;
    double hi;
    double tol = 1e-10;   ///< absolute tolerance on the root
    int max_iter = 200;
};

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic bisection. Requires f(lo) * f(hi) <= 0; returns a point
/// with bracket width <= tol. Throws BracketError on an invalid bracket.
double bisect(const BracketedRootProblem& problem);

/// Convenience wrapper.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-10, int max_iter = 200);

/// Adaptive Simpson quadrature of f over [a, b] with absolute error <= tol.
/// Throws std::runtime_error when the subdivision limit is reached.
double quad_adaptive(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-10, int max_depth = 60);

/// Classical fixed-step RK4 integration of dT/dt = aP - b(T - T_e) + c.
/// Reference oracle only; power is sampled pointwise.
Trajectory integrate_ode_rk4(const std::function<double(double)>& power,
                             const ThermalParams& params, double T0,
                             double t_end, double step);

/// One level of a nested bisection: bracket, tolerance, and the equation
/// assigned to this level, evaluated at the complete candidate vector
/// (outer levels first). Residuals of inner levels are solved before the
/// outer residual is read.
struct NestedLevel {
    double lo;
    double hi;
    double tol = 1e-8;
};

struct NestedSolveConfig {
    std::vector<NestedLevel> levels;
    /// residual(i, x) is the equation pinning unknown i, evaluated at the
    /// full vector x (all levels filled in).
    std::function<double(int, const std::vector<double>&)> residual;
    int max_iter = 200;
    /// When an inner level loses its sign change, clamp the unknown to the
    /// nearer bracket endpoint instead of failing; the outer residual then
    /// carries the inconsistency. Outermost level always requires a bracket.
    bool clamp_inner = true;
};

/// Nested bisection for monotone systems: the outermost unknown is bisected
/// on its own residual with all inner unknowns re-solved per candidate.
/// Monotone brackets are verified numerically (sign change at endpoints);
/// failure throws BracketError, signalling regime misclassification.
std::vector<double> solve_monotone_system(const NestedSolveConfig& config);

}  // namespace thermosched::num
