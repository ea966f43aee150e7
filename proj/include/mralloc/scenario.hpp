#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mralloc/params.hpp"

namespace mralloc {

/// Large-scale path loss in linear scale: d^alpha
/// (10*alpha*log10(d) in dB).
inline double pathloss_linear(double distance_m, double alpha) {
    if (!(distance_m > 0.0)) {
        throw std::invalid_argument("pathloss_linear: distance must be > 0");
    }
    return std::pow(distance_m, alpha);
}

/// Geometry of one scheduling period: the MR sits at the point the
/// train reaches at t = i*tau_l, and distance, path loss and Doppler
/// shift are held constant over the period.
struct PeriodGeometry {
    int index = 0;              ///< i in [-I, I]; 0 = closest approach
    double time_s = 0.0;        ///< i * tau_l
    double mr_distance_m = 0.0; ///< d0(i) = sqrt(d_v^2 + (v i tau_l)^2)
    double pathloss = 1.0;      ///< d0(i)^alpha, linear
    double doppler_hz = 0.0;    ///< f_D(i), signed (negative while approaching)
};

struct Trajectory {
    double half_chord_m = 0.0;  ///< d_s/2, half the in-cell track segment
    double dwell_s = 0.0;       ///< T_s = d_s/v
    int half_periods = 0;       ///< I = ceil(T_s / (2 tau_l))
    std::vector<PeriodGeometry> periods;  ///< 2I+1 entries, i = -I..I

    const PeriodGeometry& at(int index) const {
        return periods.at(static_cast<std::size_t>(index + half_periods));
    }
};

/// Chord geometry and the per-period distance/path-loss/Doppler table
/// for the pass through the cell.  The Doppler shift is the radial
/// velocity projection,
///   f_D(i) = (v f_c / c) * (v i tau_l) / d0(i),
/// evaluated once per scheduling period.
inline Trajectory derive_trajectory(const SystemParams& params) {
    params.validate();
    const double r = params.cell_radius_m;
    const double dv = params.vertical_distance_m;
    if (!(dv < r)) {
        throw std::invalid_argument(
            "derive_trajectory: vertical_distance_m must be < cell_radius_m");
    }
    Trajectory traj;
    const double ds = 2.0 * std::sqrt(r * r - dv * dv);
    traj.half_chord_m = 0.5 * ds;
    traj.dwell_s = ds / params.velocity_m_s;
    traj.half_periods =
        static_cast<int>(std::ceil(traj.dwell_s / (2.0 * params.sched_period_s)));

    const double fd_scale = params.max_doppler_hz();
    traj.periods.reserve(2 * traj.half_periods + 1);
    for (int i = -traj.half_periods; i <= traj.half_periods; ++i) {
        PeriodGeometry g;
        g.index = i;
        g.time_s = i * params.sched_period_s;
        const double along = params.velocity_m_s * g.time_s;
        g.mr_distance_m = std::sqrt(dv * dv + along * along);
        g.pathloss = std::pow(g.mr_distance_m, params.pathloss_exponent);
        g.doppler_hz = fd_scale * along / g.mr_distance_m;
        traj.periods.push_back(g);
    }
    return traj;
}

}  // namespace mralloc
