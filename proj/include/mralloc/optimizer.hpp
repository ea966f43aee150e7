#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mralloc/capacity.hpp"
#include "mralloc/scenario.hpp"

namespace mralloc {

/// The rate target cannot be met even with all resources given to the
/// local users.
class InfeasibleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One period's resource split and the capacities it yields.
struct Allocation {
    int period_index = 0;
    double time_s = 0.0;
    double beta = 0.0;    ///< subcarrier fraction to the MR
    double eta = 0.0;     ///< power fraction to the MR
    double c_mr_bps = 0.0;
    double c_users_bps = 0.0;
    bool feasible = false;
};

struct GapReport {
    int period_index = 0;
    double time_s = 0.0;
    double c_lower_bps = 0.0;  ///< ICI treated as noise
    double c_upper_bps = 0.0;  ///< ICI ignored
    double gap = 0.0;          ///< (upper - lower) / upper, 0 if upper = 0
};

/// Power split that makes the local-user constraint tight:
/// g2(eta, beta) = r_th, solved by bisection on eta in [0, 1]
/// (g2 decreases monotonically in eta).  Returns the feasible side,
/// i.e. g2(eta) in [r_th, r_th + tol].  Empty if even eta = 0 cannot
/// reach the target at this beta.
inline std::optional<double> solve_eta(const CapacityModel& model, double beta,
                                       const SnrFactors& factors, double r_th,
                                       double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_eta: tol must be > 0");
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw std::invalid_argument("solve_eta: beta must be in [0, 1]");
    }
    if (model.g2(0.0, beta, factors) < r_th - tol) return std::nullopt;
    if (model.g2(1.0, beta, factors) >= r_th - tol) return 1.0;
    double lo = 0.0, hi = 1.0;  // g2(lo) >= r_th > g2(hi)
    for (int it = 0; it < 200; ++it) {
        if (model.g2(lo, beta, factors) - r_th <= tol) break;
        const double mid = 0.5 * (lo + hi);
        if (model.g2(mid, beta, factors) >= r_th) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

namespace detail {

inline double rate_tolerance(double c_sum) {
    return 1e-6 * std::max(c_sum, 1.0);
}

}  // namespace detail

/// Optimal power and subcarrier allocation for one scheduling period.
///
/// Sweeps beta upward on the beta_step lattice from the smallest
/// feasible point; at each beta the power split comes from the tight
/// constraint (solve_eta) and the objective g1 -- including the ICI
/// term when with_ici -- is evaluated.  The sweep stops at the first
/// strict decrease; joint concavity of g1 over the convex feasible
/// region makes the objective unimodal along the constraint path, so
/// the incumbent is the lattice optimum.  Ties within 1e-12 keep the
/// smaller beta.
inline Allocation opsa(const CapacityModel& model, const SnrFactors& factors,
                       double r_th, double beta_step, bool with_ici,
                       double c_sum_hint = -1.0) {
    if (!(beta_step > 0.0 && beta_step < 1.0)) {
        throw std::invalid_argument("opsa: beta_step must be in (0, 1)");
    }
    const double c_sum = c_sum_hint > 0.0 ? c_sum_hint : model.c_sum();
    if (r_th > c_sum + detail::rate_tolerance(c_sum)) {
        throw InfeasibleError("opsa: rate target exceeds C_sum");
    }
    const double tol = detail::rate_tolerance(c_sum);

    bool has_incumbent = false;
    Allocation best;
    best.period_index = factors.period_index;
    best.time_s = factors.time_s;
    const long n_steps = std::lround(std::ceil(1.0 / beta_step - 1e-9));
    for (long j = 0; j <= n_steps; ++j) {
        const double beta = std::min(1.0, j * beta_step);
        const auto eta = solve_eta(model, beta, factors, r_th, tol);
        if (!eta) {
            if (has_incumbent) break;  // g2(0, beta) decreases in beta
            continue;
        }
        const double value = model.g1(*eta, beta, factors, with_ici);
        const double tie = 1e-12 * std::max(1.0, std::abs(best.c_mr_bps));
        if (!has_incumbent || value > best.c_mr_bps + tie) {
            has_incumbent = true;
            best.beta = beta;
            best.eta = *eta;
            best.c_mr_bps = value;
        } else if (value < best.c_mr_bps - tie) {
            break;
        }
    }
    if (!has_incumbent) throw InfeasibleError("opsa: no feasible beta");
    best.c_users_bps = model.g2(best.eta, best.beta, factors);
    best.feasible = true;
    return best;
}

/// Exhaustive 2-D scan of (eta, beta) on a uniform grid, keeping the
/// feasible points (g2 >= r_th) and returning the best objective.
/// Independent of the sweep logic; used to verify it.
inline Allocation grid_oracle(const CapacityModel& model,
                              const SnrFactors& factors, double r_th,
                              double resolution, bool with_ici = true) {
    if (!(resolution > 0.0 && resolution <= 0.1)) {
        throw std::invalid_argument("grid_oracle: resolution must be in (0, 0.1]");
    }
    const long n = std::lround(1.0 / resolution);
    Allocation best;
    best.period_index = factors.period_index;
    best.time_s = factors.time_s;
    bool found = false;
    for (long jb = 0; jb <= n; ++jb) {
        const double beta = std::min(1.0, jb * resolution);
        for (long je = 0; je <= n; ++je) {
            const double eta = std::min(1.0, je * resolution);
            if (model.g2(eta, beta, factors) < r_th) continue;
            const double value = model.g1(eta, beta, factors, with_ici);
            if (!found || value > best.c_mr_bps) {
                found = true;
                best.beta = beta;
                best.eta = eta;
                best.c_mr_bps = value;
            }
        }
    }
    if (!found) throw InfeasibleError("grid_oracle: no feasible grid point");
    best.c_users_bps = model.g2(best.eta, best.beta, factors);
    best.feasible = true;
    return best;
}

/// Per-period OPSA over a whole trajectory.
inline std::vector<Allocation> opsa_sweep(const CapacityModel& model,
                                          const std::vector<SnrFactors>& factors,
                                          double r_th, double beta_step,
                                          bool with_ici) {
    const double c_sum = model.c_sum();
    std::vector<Allocation> out;
    out.reserve(factors.size());
    for (const auto& f : factors) {
        out.push_back(opsa(model, f, r_th, beta_step, with_ici, c_sum));
    }
    return out;
}

enum class CpsaVariant {
    power_limited,      ///< anchored at the cell edge, i = -I
    bandwidth_limited,  ///< anchored at closest approach, i = 0
    intermediate,       ///< anchored at i = floor(I/2)
};

/// Constant power and subcarrier allocation: OPSA is run once at the
/// variant's anchor period, then (beta, eta) stay frozen for the whole
/// pass.  The constraint value is period-independent (local-user
/// statistics do not move), so feasibility carries over; only the MR
/// capacity varies with the geometry.
inline std::vector<Allocation> cpsa(const CapacityModel& model,
                                    const std::vector<SnrFactors>& factors,
                                    double r_th, double beta_step,
                                    CpsaVariant variant, bool with_ici) {
    if (factors.empty()) throw std::invalid_argument("cpsa: empty trajectory");
    const int half = factors.back().period_index;
    int anchor_index = 0;
    switch (variant) {
        case CpsaVariant::power_limited: anchor_index = -half; break;
        case CpsaVariant::bandwidth_limited: anchor_index = 0; break;
        case CpsaVariant::intermediate: anchor_index = half / 2; break;
    }
    const SnrFactors* anchor = nullptr;
    for (const auto& f : factors) {
        if (f.period_index == anchor_index) anchor = &f;
    }
    if (anchor == nullptr) throw std::invalid_argument("cpsa: anchor period missing");

    const double c_sum = model.c_sum();
    const Allocation at_anchor =
        opsa(model, *anchor, r_th, beta_step, with_ici, c_sum);
    const double tol = detail::rate_tolerance(c_sum);

    std::vector<Allocation> out;
    out.reserve(factors.size());
    for (const auto& f : factors) {
        Allocation a;
        a.period_index = f.period_index;
        a.time_s = f.time_s;
        a.beta = at_anchor.beta;
        a.eta = at_anchor.eta;
        a.c_mr_bps = model.g1(a.eta, a.beta, f, with_ici);
        a.c_users_bps = model.g2(a.eta, a.beta, f);
        a.feasible = a.c_users_bps >= r_th - tol;
        out.push_back(a);
    }
    return out;
}

/// Capacity bounds of one period: the ICI-as-noise allocation is the
/// achievable lower bound, the ICI-free one the upper bound an ideal
/// canceller could approach.  gap = (upper - lower)/upper, defined as
/// 0 when the upper bound is 0.
inline GapReport bounds_and_gap(const CapacityModel& model,
                                const SnrFactors& factors, double r_th,
                                double beta_step, double c_sum_hint = -1.0) {
    const Allocation lower = opsa(model, factors, r_th, beta_step, true, c_sum_hint);
    const Allocation upper = opsa(model, factors, r_th, beta_step, false, c_sum_hint);
    GapReport g;
    g.period_index = factors.period_index;
    g.time_s = factors.time_s;
    g.c_lower_bps = lower.c_mr_bps;
    g.c_upper_bps = upper.c_mr_bps;
    g.gap = upper.c_mr_bps > 0.0
                ? (upper.c_mr_bps - lower.c_mr_bps) / upper.c_mr_bps
                : 0.0;
    return g;
}

}  // namespace mralloc
