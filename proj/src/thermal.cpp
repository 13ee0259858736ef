#include "thermosched/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermosched/numerics.hpp"

namespace thermosched {

const char* to_string(SolveRegime r) {
    switch (r) {
        case SolveRegime::ConstantPower: return "constant_power";
        case SolveRegime::UnconstrainedSaturated: return "unconstrained_saturated";
        case SolveRegime::UnconstrainedNoSaturation: return "unconstrained_no_saturation";
        case SolveRegime::EnergyLimitedSaturated: return "energy_limited_saturated";
        case SolveRegime::EnergyLimitedBoundary: return "energy_limited_boundary";
        case SolveRegime::MultiArrival: return "multi_arrival";
    }
    return "unknown";
}

double temperature_const_segment(double p, const ThermalParams& params,
                                 double T_start, double dt) {
    const double a = params.a, b = params.b;
    double equil = params.T_e + (a * p + params.c) / b;
    return equil + (T_start - equil) * std::exp(-b * dt);
}

double recip_zero_crossing(double beta, double C, double b) {
    if (beta >= 1.0) return -std::numeric_limits<double>::infinity();
    if (C <= 0.0) return std::numeric_limits<double>::infinity();
    return std::log((1.0 - beta) / C) / b;
}

double temperature_recip_segment(double beta, double C, const ThermalParams& params,
                                 double T_start, double t1, double t2) {
    if (!(t1 <= t2)) throw std::invalid_argument("temperature_recip_segment: t1 > t2");
    if (t2 == t1) return T_start;
    const double a = params.a, b = params.b, Te = params.T_env_eff();
    if (C == 0.0) {
        // constant power 1/beta - 1
        return temperature_const_segment(1.0 / beta - 1.0, params, T_start, t2 - t1);
    }
    double tz = recip_zero_crossing(beta, C, b);
    if (tz < t2 - 1e-12 && tz > t1 + 1e-12)
        throw std::invalid_argument("temperature_recip_segment: power changes sign inside segment");
    if (tz <= t1 + 1e-12) {
        // power is zero throughout: relaxation toward the environment
        return temperature_const_segment(0.0, params, T_start, t2 - t1);
    }
    double log_ratio = std::log((beta + C * std::exp(b * t2)) / (beta + C * std::exp(b * t1)));
    return (a / (b * C)) * std::exp(-b * t2) * log_ratio +
           (T_start - Te + a / b) * std::exp(-b * (t2 - t1)) + Te - a / b;
}

double segment_energy(const PowerSegment& seg, double b, double t) {
    double t1 = seg.t_begin;
    double t2 = std::min(t, seg.t_end);
    if (t2 <= t1) return 0.0;
    if (seg.kind == PowerSegment::Kind::Constant) return seg.level * (t2 - t1);
    double beta = seg.offset, C = seg.coeff;
    double tz = recip_zero_crossing(beta, C, b);
    t2 = std::min(t2, std::max(t1, tz));  // clamp tail where P == 0
    if (t2 <= t1) return 0.0;
    if (beta > 0.0) {
        auto F = [&](double u) {
            return u / beta - std::log(beta + C * std::exp(b * u)) / (b * beta) - u;
        };
        return F(t2) - F(t1);
    }
    auto F = [&](double u) { return -std::exp(-b * u) / (b * C) - u; };
    return F(t2) - F(t1);
}

double energy_of_policy(const PowerPolicy& policy, const ThermalParams& params, double t) {
    double total = 0.0;
    for (const auto& seg : policy.segments) {
        if (seg.t_begin >= t) break;
        total += segment_energy(seg, params.b, t);
    }
    return total;
}

double throughput_of_policy(const PowerPolicy& policy, const ThermalParams& params) {
    double bits = 0.0;
    for (const auto& seg : policy.segments) {
        if (seg.kind == PowerSegment::Kind::Constant) {
            bits += 0.5 * std::log2(1.0 + seg.level) * (seg.t_end - seg.t_begin);
            continue;
        }
        double tz = recip_zero_crossing(seg.offset, seg.coeff, params.b);
        double hi = std::min(seg.t_end, std::max(seg.t_begin, tz));
        if (hi <= seg.t_begin) continue;
        // 0.5 log2(1 + P) = -0.5 log2(beta + C e^{bt}) on the positive part
        auto f = [&](double u) {
            return -0.5 * std::log2(seg.offset + seg.coeff * std::exp(params.b * u));
        };
        bits += num::quad_adaptive(f, seg.t_begin, hi, 1e-10);
    }
    return bits;
}

double segment_end_temperature(const PowerSegment& seg, const ThermalParams& params,
                               double T_start) {
    return segment_temperature_at(seg, params, T_start, seg.t_end);
}

double segment_temperature_at(const PowerSegment& seg, const ThermalParams& params,
                              double T_start, double t) {
    if (seg.kind == PowerSegment::Kind::Constant)
        return temperature_const_segment(seg.level, params, T_start, t - seg.t_begin);
    double tz = recip_zero_crossing(seg.offset, seg.coeff, params.b);
    if (tz >= t) return temperature_recip_segment(seg.offset, seg.coeff, params, T_start,
                                                  seg.t_begin, t);
    if (tz <= seg.t_begin)
        return temperature_const_segment(0.0, params, T_start, t - seg.t_begin);
    double T_mid = temperature_recip_segment(seg.offset, seg.coeff, params, T_start,
                                             seg.t_begin, tz);
    return temperature_const_segment(0.0, params, T_mid, t - tz);
}

Trajectory temperature_trajectory(const PowerPolicy& policy, const ThermalParams& params,
                                  double T0, int n_samples, const ArrivalProfile* profile) {
    policy.validate();
    if (n_samples < 2) throw std::invalid_argument("temperature_trajectory: n_samples < 2");
    const double D = policy.duration();

    std::vector<double> knots;
    knots.push_back(0.0);
    knots.push_back(D);
    for (const auto& s : policy.segments) {
        knots.push_back(s.t_begin);
        // split reciprocal segments at their zero crossing so samples see it
        if (s.kind == PowerSegment::Kind::ReciprocalExp) {
            double tz = recip_zero_crossing(s.offset, s.coeff, params.b);
            if (tz > s.t_begin && tz < s.t_end) knots.push_back(tz);
        }
    }
    if (profile) {
        for (double s : profile->times)
            if (s > 0.0 && s < D) knots.push_back(s);
    }
    double dt = D / (n_samples - 1);
    for (int i = 1; i + 1 < n_samples; ++i) knots.push_back(i * dt);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-13; }),
                knots.end());

    Trajectory out;
    auto n = static_cast<Eigen::Index>(knots.size());
    out.t.resize(n);
    out.power.resize(n);
    out.temperature.resize(n);
    out.energy.resize(n);
    out.rate.resize(n);

    std::size_t si = 0;
    double T_seg_start = T0;  // temperature at the start of segment si
    double E_seg_start = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double t = knots[i];
        while (si + 1 < policy.segments.size() && t >= policy.segments[si].t_end - 1e-13) {
            const auto& seg = policy.segments[si];
            T_seg_start = segment_end_temperature(seg, params, T_seg_start);
            E_seg_start += segment_energy(seg, params.b, seg.t_end);
            ++si;
        }
        const auto& seg = policy.segments[si];
        double tc = std::clamp(t, seg.t_begin, seg.t_end);
        out.t[i] = t;
        out.power[i] = seg.power(tc, params.b);
        out.temperature[i] = segment_temperature_at(seg, params, T_seg_start, tc);
        out.energy[i] = E_seg_start + segment_energy(seg, params.b, tc);
        out.rate[i] = 0.5 * std::log2(1.0 + out.power[i]);
    }
    return out;
}

FeasibilityReport check_energy_causality(const PowerPolicy& policy,
                                         const ThermalParams& params,
                                         const ArrivalProfile& profile) {
    FeasibilityReport rep;
    const double D = profile.deadline;
    std::vector<double> checkpoints;
    for (std::size_t j = 1; j < profile.count(); ++j) checkpoints.push_back(profile.times[j]);
    checkpoints.push_back(D);
    for (std::size_t j = 0; j < checkpoints.size(); ++j) {
        double t = checkpoints[j];
        double bound = profile.available_through(j);  // energy of arrivals before t
        double used = energy_of_policy(policy, params, t);
        double viol = used - bound;
        if (viol > rep.worst_violation) {
            rep.worst_violation = viol;
            rep.worst_location = t;
        }
        if (std::abs(viol) <= kTightTol) rep.tight_instants.push_back(t);
    }
    rep.feasible = rep.worst_violation <= kFeasTol;
    return rep;
}

namespace {

// Derivative of the temperature inside a sign-definite reciprocal segment,
// used to locate the unimodal interior peak.
double recip_temp_derivative(const PowerSegment& seg, const ThermalParams& params,
                             double T_start, double t) {
    const double a = params.a, b = params.b;
    double P = seg.power(t, b);
    double T = segment_temperature_at(seg, params, T_start, t);
    return a * P - b * (T - params.T_e) + params.c;
}

}  // namespace

FeasibilityReport check_temperature(const PowerPolicy& policy, const ThermalParams& params,
                                    double T0) {
    FeasibilityReport rep;
    double T = T0;
    auto record = [&](double temp, double t) {
        double viol = temp - params.T_c;
        if (viol > rep.worst_violation) {
            rep.worst_violation = viol;
            rep.worst_location = t;
        }
        if (std::abs(viol) <= kTightTol) {
            if (rep.tight_instants.empty() ||
                t - rep.tight_instants.back() > 1e-12)
                rep.tight_instants.push_back(t);
        }
    };
    record(T, 0.0);
    for (const auto& seg : policy.segments) {
        // Constant stretches are monotone toward their equilibrium, so the
        // endpoint carries the extremum. Reciprocal stretches are unimodal;
        // bracket the derivative to find an interior peak.
        if (seg.kind == PowerSegment::Kind::ReciprocalExp) {
            double tz = recip_zero_crossing(seg.offset, seg.coeff, params.b);
            double hi = std::min(seg.t_end, std::max(seg.t_begin, tz));
            if (hi > seg.t_begin) {
                double d1 = recip_temp_derivative(seg, params, T, seg.t_begin);
                double d2 = recip_temp_derivative(seg, params, T, hi);
                if (d1 > 0.0 && d2 < 0.0) {
                    double tpeak = num::bisect(
                        [&](double u) { return recip_temp_derivative(seg, params, T, u); },
                        seg.t_begin, hi, 1e-12 * std::max(1.0, hi));
                    record(segment_temperature_at(seg, params, T, tpeak), tpeak);
                }
            }
        }
        T = segment_end_temperature(seg, params, T);
        record(T, seg.t_end);
    }
    rep.feasible = rep.worst_violation <= kFeasTol;
    return rep;
}

}  // namespace thermosched
