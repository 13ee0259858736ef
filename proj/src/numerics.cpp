#include "thermosched/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace thermosched::num {

double bisect(const BracketedRootProblem& problem) {
    double lo = problem.lo;
    double hi = problem.hi;
    if (!(lo <= hi)) throw BracketError("bisect: empty bracket");
    double flo = problem.f(lo);
    if (flo == 0.0) return lo;
    double fhi = problem.f(hi);
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw BracketError("bisect: no sign change on bracket");
    for (int i = 0; i < problem.max_iter; ++i) {
        double mid = 0.5 * (lo + hi);
        if (hi - lo <= problem.tol) return mid;
        double fmid = problem.f(mid);
        if (fmid == 0.0) return mid;
        if (flo * fmid < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    if (hi - lo <= 16.0 * problem.tol) return 0.5 * (lo + hi);
    throw BracketError("bisect: max iterations exceeded");
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol, int max_iter) {
    return bisect(BracketedRootProblem{f, lo, hi, tol, max_iter});
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double quad_rec(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double m, double fm, double whole,
                double tol, int depth, int max_depth) {
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson(a, fa, m, fm, flm);
    double right = simpson(m, fm, b, fb, frm);
    double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol || (b - a) < 1e-14)
        return left + right + err / 15.0;
    if (depth >= max_depth)
        throw std::runtime_error("quad_adaptive: subdivision limit reached");
    return quad_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1, max_depth) +
           quad_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double quad_adaptive(const std::function<double(double)>& f, double a, double b,
                     double tol, int max_depth) {
    if (!(a <= b)) throw std::invalid_argument("quad_adaptive: a > b");
    if (a == b) return 0.0;
    double fa = f(a);
    double fb = f(b);
    double m = 0.5 * (a + b);
    double fm = f(m);
    double whole = simpson(a, fa, b, fb, fm);
    return quad_rec(f, a, fa, b, fb, m, fm, whole, tol, 0, max_depth);
}

Trajectory integrate_ode_rk4(const std::function<double(double)>& power,
                             const ThermalParams& params, double T0,
                             double t_end, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("integrate_ode_rk4: step must be > 0");
    const double a = params.a, b = params.b, c = params.c, Te = params.T_e;
    auto rhs = [&](double t, double T) { return a * power(t) - b * (T - Te) + c; };

    auto n = static_cast<Eigen::Index>(std::ceil(t_end / step - 1e-12));
    Trajectory out;
    out.t.resize(n + 1);
    out.power.resize(n + 1);
    out.temperature.resize(n + 1);
    out.energy.resize(n + 1);
    out.rate.resize(n + 1);

    double T = T0, t = 0.0, B = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i) {
        double P = power(t);
        out.t[i] = t;
        out.power[i] = P;
        out.temperature[i] = T;
        out.energy[i] = B;
        out.rate[i] = 0.5 * std::log2(1.0 + P);
        if (i == n) break;
        double h = std::min(step, t_end - t);
        double k1 = rhs(t, T);
        double k2 = rhs(t + 0.5 * h, T + 0.5 * h * k1);
        double k3 = rhs(t + 0.5 * h, T + 0.5 * h * k2);
        double k4 = rhs(t + h, T + h * k3);
        T += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        // trapezoid on the energy channel, enough for a reference trace
        B += 0.5 * h * (power(t) + power(t + h));
        t += h;
    }
    return out;
}

namespace {

double solve_level(const NestedSolveConfig& cfg, std::size_t level,
                   std::vector<double>& x);

// Residual of unknown `level` once all inner levels are resolved.
double level_residual(const NestedSolveConfig& cfg, std::size_t level,
                      std::vector<double>& x) {
    if (level + 1 < cfg.levels.size()) solve_level(cfg, level + 1, x);
    return cfg.residual(static_cast<int>(level), x);
}

double solve_level(const NestedSolveConfig& cfg, std::size_t level,
                   std::vector<double>& x) {
    const auto& lv = cfg.levels[level];
    double lo = lv.lo, hi = lv.hi;
    auto eval = [&](double v) {
        x[level] = v;
        return level_residual(cfg, level, x);
    };
    double flo = eval(lo);
    double fhi = (flo == 0.0) ? flo : eval(hi);
    if (flo != 0.0 && flo * fhi > 0.0) {
        if (level > 0 && cfg.clamp_inner) {
            // No root for this trial of the outer unknowns: clamp to the
            // nearer endpoint and let the outer residual see the mismatch.
            double v = std::abs(flo) <= std::abs(fhi) ? lo : hi;
            eval(v);
            return v;
        }
        throw BracketError("solve_monotone_system: no sign change at level " +
                           std::to_string(level));
    }
    if (flo == 0.0) {
        eval(lo);
        return lo;
    }
    for (int i = 0; i < cfg.max_iter && hi - lo > lv.tol; ++i) {
        double mid = 0.5 * (lo + hi);
        double fmid = eval(mid);
        if (fmid == 0.0) { lo = hi = mid; break; }
        if (flo * fmid < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    double root = 0.5 * (lo + hi);
    eval(root);
    return root;
}

}  // namespace

std::vector<double> solve_monotone_system(const NestedSolveConfig& config) {
    if (config.levels.empty())
        throw std::invalid_argument("solve_monotone_system: no levels");
    std::vector<double> x(config.levels.size(), 0.0);
    solve_level(config, 0, x);
    return x;
}

}  // namespace thermosched::num
