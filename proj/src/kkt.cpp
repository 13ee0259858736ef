#include "thermosched/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "thermosched/thermal.hpp"

namespace thermosched {

VectorXd certification_grid(const PowerPolicy& policy, const ArrivalProfile& profile,
                            int grid_n) {
    const double D = profile.deadline;
    std::vector<double> pts;
    pts.reserve(grid_n + 8);
    for (int i = 0; i <= grid_n; ++i) pts.push_back(D * i / grid_n);
    for (double s : profile.times)
        if (s > 0.0 && s < D) pts.push_back(s);
    for (const auto& seg : policy.segments)
        if (seg.t_begin > 0.0 && seg.t_begin < D) pts.push_back(seg.t_begin);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-13; }),
              pts.end());
    return Eigen::Map<const VectorXd>(pts.data(), static_cast<Eigen::Index>(pts.size()));
}

namespace {

// Per-stretch tail values of the two multiplier families. On a smooth
// stretch both tails are constant; on a saturation stretch the temperature
// tail decays as e^{-bt} (q - M) with q = 1/(1 + p_sat).
struct StretchTail {
    double t_begin, t_end;
    bool saturation;
    double M;        // sum of energy multipliers at instants > t
    double L_const;  // temperature tail on smooth stretches
};

bool is_saturation(const PowerSegment& seg, const ThermalParams& params) {
    return seg.kind == PowerSegment::Kind::Constant &&
           std::abs(seg.level - params.saturation_power()) <= 1e-9 * (1.0 + params.saturation_power());
}

}  // namespace

DualState reconstruct_multipliers(const PowerPolicy& policy, const ThermalParams& params,
                                  const ArrivalProfile& profile, const VectorXd& grid) {
    const double b = params.b;
    const double q = 1.0 / (1.0 + params.saturation_power());
    const double D = profile.deadline;

    // Checkpoint instants carrying energy multipliers: s_1..s_N, D.
    std::vector<double> checkpoints;
    for (std::size_t j = 1; j < profile.count(); ++j) checkpoints.push_back(profile.times[j]);
    checkpoints.push_back(D);

    DualState duals;
    duals.energy_mult.assign(checkpoints.size(), 0.0);
    duals.grid = grid;
    duals.temp_mult = VectorXd::Zero(grid.size());

    // Backward walk over segments, tracking the tails just right of the
    // current position.
    std::vector<StretchTail> tails;
    double Mcur = 0.0;
    double Ltail = 0.0;  // L at the right end of the stretch being built
    auto add_energy_atom = [&](double t, double value) {
        if (value <= 1e-14) return;
        for (std::size_t j = 0; j < checkpoints.size(); ++j) {
            if (std::abs(checkpoints[j] - t) < 1e-9 * std::max(1.0, D)) {
                duals.energy_mult[j] += value;
                return;
            }
        }
        // Atom implied at a non-checkpoint instant: structure is
        // inconsistent; drop it and let the residuals report the mismatch.
    };
    double lambda_atom_D = 0.0;

    for (auto it = policy.segments.rbegin(); it != policy.segments.rend(); ++it) {
        const auto& seg = *it;
        if (is_saturation(seg, params)) {
            // M is pinned by the smooth stretch to the left (no atom at the
            // plateau onset); peek it if present.
            double M_here = Mcur;
            auto next = it + 1;
            if (next != policy.segments.rend() &&
                next->kind == PowerSegment::Kind::ReciprocalExp) {
                M_here = next->offset;
                if (seg.t_end >= D - 1e-12) {
                    // terminal plateau: the jump of M at D is the deadline
                    // energy multiplier
                    add_energy_atom(D, M_here - Mcur);
                } else if (M_here != Mcur) {
                    // interior plateau with an arrival at its right edge
                    add_energy_atom(seg.t_end, M_here - Mcur);
                }
            }
            if (seg.t_end >= D - 1e-12) lambda_atom_D = std::exp(-b * D) * (q - M_here);
            tails.push_back({seg.t_begin, seg.t_end, true, M_here, 0.0});
            Mcur = M_here;
            Ltail = std::exp(-b * seg.t_begin) * (q - M_here);
        } else if (seg.kind == PowerSegment::Kind::ReciprocalExp) {
            double kappa = seg.offset, C = seg.coeff;
            add_energy_atom(seg.t_end, kappa - Mcur);
            if (seg.t_end >= D - 1e-12) lambda_atom_D = C;
            tails.push_back({seg.t_begin, seg.t_end, false, kappa, C});
            Mcur = kappa;
            Ltail = C;
        } else {
            // constant non-plateau stretch: optimal only as 1/(1+p) = kappa
            // with no temperature mass (or as a clamped zero stretch, which
            // carries no stationarity information)
            if (seg.level > 0.0) {
                double kappa = 1.0 / (1.0 + seg.level);
                add_energy_atom(seg.t_end, kappa - Mcur);
                tails.push_back({seg.t_begin, seg.t_end, false, kappa, Ltail});
                Mcur = kappa;
            } else {
                tails.push_back({seg.t_begin, seg.t_end, false, Mcur, Ltail});
            }
        }
    }

    // Tail of the temperature measure at time t: mass on (t, D].
    auto L_at = [&](double t) -> double {
        if (t >= D) return 0.0;
        double L = lambda_atom_D;
        // walk stretches (stored right-to-left) accumulating mass right of t
        for (const auto& st : tails) {
            if (st.t_end <= t) break;
            if (st.saturation) {
                double lo = std::max(t, st.t_begin);
                L += (std::exp(-b * lo) - std::exp(-b * st.t_end)) * (q - st.M);
            }
            // smooth stretches carry no mass between their endpoints
        }
        return L;
    };

    // lambda weight at grid point m covers the mass on (t_{m-1}, t_m]
    const auto n = grid.size();
    double prev = L_at(grid[0]);
    for (Eigen::Index m = 1; m < n; ++m) {
        double cur = L_at(grid[m]);
        duals.temp_mult[m] = std::max(0.0, prev - cur);
        prev = cur;
    }
    return duals;
}

KKTCertificate kkt_certificate(const PowerPolicy& policy, const DualState& duals,
                               const ArrivalProfile& profile, const ThermalParams& params) {
    KKTCertificate cert;
    const double b = params.b;
    const double D = profile.deadline;
    const VectorXd& grid = duals.grid;
    const auto n = grid.size();

    std::vector<double> checkpoints;
    for (std::size_t j = 1; j < profile.count(); ++j) checkpoints.push_back(profile.times[j]);
    checkpoints.push_back(D);

    // exact trajectory at the grid points
    Trajectory traj = temperature_trajectory(policy, params, params.T_e,
                                             static_cast<int>(n), &profile);
    // map grid -> trajectory samples (grid points are a subset of knots)
    std::vector<Eigen::Index> idx(n);
    {
        Eigen::Index j = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            while (j + 1 < traj.t.size() && traj.t[j] < grid[i] - 1e-12) ++j;
            idx[i] = j;
        }
    }

    // tail sums of the temperature weights: Lambda_i = mass on (t_i, D]
    VectorXd Lambda = VectorXd::Zero(n);
    for (Eigen::Index i = n - 2; i >= 0; --i) Lambda[i] = Lambda[i + 1] + duals.temp_mult[i + 1];

    // stationarity, with right-limit power and strictly-future atoms
    double worst_stat = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        double t = grid[i];
        double M = 0.0;
        for (std::size_t j = 0; j < checkpoints.size(); ++j)
            if (checkpoints[j] > t + 1e-12) M += duals.energy_mult[j];
        double P = policy.power(t, b);
        double lhs = 1.0 / (1.0 + P);
        double rhs = M + std::exp(b * t) * Lambda[i];
        double r = (P > 1e-12) ? std::abs(lhs - rhs) : std::max(0.0, lhs - rhs);
        worst_stat = std::max(worst_stat, r);
    }
    cert.stationarity = worst_stat;

    // feasibility: ceiling violations on the grid plus energy at checkpoints
    double worst_feas = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        worst_feas = std::max(worst_feas, traj.temperature[idx[i]] - params.T_c);
    for (std::size_t j = 0; j < checkpoints.size(); ++j) {
        double used = energy_of_policy(policy, params, checkpoints[j]);
        worst_feas = std::max(worst_feas, used - profile.available_through(j));
    }
    cert.feasibility = std::max(0.0, worst_feas);

    // complementary slackness and its total mass (the gap estimate)
    double worst_slack = 0.0, gap = 0.0;
    for (std::size_t j = 0; j < checkpoints.size(); ++j) {
        double slack = profile.available_through(j) -
                       energy_of_policy(policy, params, checkpoints[j]);
        worst_slack = std::max(worst_slack, duals.energy_mult[j] * std::abs(slack));
        gap += duals.energy_mult[j] * slack;
    }
    for (Eigen::Index m = 0; m < n; ++m) {
        if (duals.temp_mult[m] <= 0.0) continue;
        double slack = params.T_c - traj.temperature[idx[m]];
        worst_slack = std::max(worst_slack, duals.temp_mult[m] * std::abs(slack));
        gap += duals.temp_mult[m] * slack * std::exp(b * grid[m]) / params.a;
    }
    cert.slackness = worst_slack;
    cert.duality_gap = std::abs(gap) / (2.0 * std::log(2.0));
    return cert;
}

}  // namespace thermosched
