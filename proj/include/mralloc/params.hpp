#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mralloc {

/// All scalar system constants plus derived OFDM timing.
///
/// Defaults are the common simulation parameter set: 5 MHz / 512
/// subcarriers / 10 W cell at 3 GHz, a 100 m/s train on a track 1 km
/// from the base station of a 5 km cell, 50 local users, 1 s
/// scheduling periods.
struct SystemParams {
    double bandwidth_hz = 5e6;           ///< B
    int n_subcarriers = 512;             ///< N
    double power_w = 10.0;               ///< P
    double noise_density_w_hz = 6.32e-16;///< N0
    double carrier_hz = 3e9;             ///< f_c
    double velocity_m_s = 100.0;         ///< v (train)
    double pathloss_exponent = 3.0;      ///< alpha
    double cell_radius_m = 5000.0;       ///< R
    double vertical_distance_m = 1000.0; ///< d_v (track to BS)
    int n_users = 50;                    ///< M local users
    double sched_period_s = 1.0;         ///< tau_l (long time-scale)
    double slot_s = 1e-3;                ///< tau_s (short time-scale; inert)
    double rho = 0.5;                    ///< local-user rate fraction of C_sum
    double beta_step = 1e-3;             ///< beta sweep step of the solver
    double lightspeed_m_s = 3e8;         ///< c
    double cp_s = 1.28e-5;               ///< T_CP (carried, unused in capacity)

    /// Effective OFDM symbol length T = N/B (no CP).
    double symbol_s() const { return n_subcarriers / bandwidth_hz; }

    /// Subcarrier spacing B/N.
    double subcarrier_spacing_hz() const { return bandwidth_hz / n_subcarriers; }

    /// Noise power over the full band, N0*B.
    double noise_power_w() const { return noise_density_w_hz * bandwidth_hz; }

    /// Largest Doppler shift the trajectory can produce, v*f_c/c.
    double max_doppler_hz() const {
        return velocity_m_s * carrier_hz / lightspeed_m_s;
    }

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0)) {
                throw std::invalid_argument(std::string(name) + " must be > 0");
            }
        };
        positive(bandwidth_hz, "bandwidth_hz");
        positive(power_w, "power_w");
        positive(noise_density_w_hz, "noise_density_w_hz");
        positive(carrier_hz, "carrier_hz");
        positive(velocity_m_s, "velocity_m_s");
        positive(pathloss_exponent, "pathloss_exponent");
        positive(cell_radius_m, "cell_radius_m");
        positive(vertical_distance_m, "vertical_distance_m");
        positive(sched_period_s, "sched_period_s");
        positive(slot_s, "slot_s");
        positive(lightspeed_m_s, "lightspeed_m_s");
        positive(cp_s, "cp_s");
        if (n_subcarriers < 2) {
            throw std::invalid_argument("n_subcarriers must be >= 2");
        }
        if (n_users < 1) throw std::invalid_argument("n_users must be >= 1");
        if (!(vertical_distance_m < cell_radius_m)) {
            throw std::invalid_argument(
                "vertical_distance_m must be < cell_radius_m");
        }
        if (!(rho >= 0.0 && rho <= 1.0)) {
            throw std::invalid_argument("rho must be in [0, 1]");
        }
        if (!(beta_step > 0.0 && beta_step < 1.0)) {
            throw std::invalid_argument("beta_step must be in (0, 1)");
        }
    }
};

/// A ring of local users at a common distance from the BS.
struct UserGroup {
    double distance_m = 0.0;
    int count = 0;
};

struct UserPopulation {
    std::vector<UserGroup> groups;

    int total_users() const {
        int n = 0;
        for (const auto& g : groups) n += g.count;
        return n;
    }

    void validate(const SystemParams& params) const {
        if (groups.empty()) {
            throw std::invalid_argument("user_groups must not be empty");
        }
        for (const auto& g : groups) {
            if (g.count < 1) {
                throw std::invalid_argument("user_groups: count must be >= 1");
            }
            if (!(g.distance_m > 0.0 && g.distance_m <= params.cell_radius_m)) {
                throw std::invalid_argument(
                    "user_groups: distance must be in (0, cell_radius_m]");
            }
        }
        if (total_users() != params.n_users) {
            throw std::invalid_argument(
                "user_groups: counts must sum to n_users");
        }
    }
};

/// Five equal groups at 100/1325/2550/3775/5000 m, ten users each.
inline UserPopulation default_population() {
    return UserPopulation{{{100.0, 10},
                           {1325.0, 10},
                           {2550.0, 10},
                           {3775.0, 10},
                           {5000.0, 10}}};
}

}  // namespace mralloc
