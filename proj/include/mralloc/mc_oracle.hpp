#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mralloc/capacity.hpp"
#include "mralloc/channel.hpp"
#include "mralloc/ici.hpp"
#include "mralloc/params.hpp"
#include "mralloc/rng.hpp"

namespace mralloc {

/// One tap of the two-path Doppler model:
///   h(t) = sqrt(power/2) (e^{j(2 pi f_D t + phi1)} + e^{j(-2 pi f_D t + phi2)})
/// with independent uniform phases, so that
/// E[h(t1) h*(t2)] = power * cos(2 pi f_D (t2 - t1)).
struct TwoPathTap {
    double amp = 0.0;  ///< sqrt(power/2)
    double doppler_hz = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;

    std::complex<double> value(double t) const {
        const double w = 2.0 * pi * doppler_hz * t;
        return amp * (std::complex<double>(std::cos(w + phi1), std::sin(w + phi1)) +
                      std::complex<double>(std::cos(-w + phi2), std::sin(-w + phi2)));
    }
};

inline TwoPathTap realize_two_path_tap(double power, double doppler_hz,
                                       RngStream& rng) {
    if (!(power > 0.0)) {
        throw std::invalid_argument("realize_two_path_tap: power must be > 0");
    }
    TwoPathTap tap;
    tap.amp = std::sqrt(0.5 * power);
    tap.doppler_hz = doppler_hz;
    tap.phi1 = rng.phase();
    tap.phi2 = rng.phase();
    return tap;
}

namespace detail {

// Per-tap time series on the in-block lattice t = k T/N, k = 0..N-1,
// by phasor recurrence.
inline void tap_series(const TwoPathTap& tap, double symbol_s, int n,
                       std::vector<std::complex<double>>& out) {
    out.assign(static_cast<std::size_t>(n), {});
    const double w = 2.0 * pi * tap.doppler_hz * symbol_s / n;
    const std::complex<double> step(std::cos(w), std::sin(w));
    std::complex<double> fwd = tap.amp * std::complex<double>(std::cos(tap.phi1),
                                                              std::sin(tap.phi1));
    std::complex<double> bwd = tap.amp * std::complex<double>(std::cos(tap.phi2),
                                                              std::sin(tap.phi2));
    for (int k = 0; k < n; ++k) {
        out[k] = fwd + bwd;
        fwd *= step;
        bwd *= std::conj(step);
    }
}

}  // namespace detail

/// Restricted DFT coupling matrix of one channel realization:
///   H(n,p) = (1/N) sum_k h(k T/N, n/T) e^{j 2 pi (n-p) k / N}
/// for n, p inside [window_lo, window_lo + window_size).
struct ChannelRealization {
    int n_subcarriers = 0;
    int window_lo = 0;
    int window_size = 0;
    std::vector<TwoPathTap> taps;
    std::vector<std::complex<double>> matrix;  ///< row-major window x window

    const std::complex<double>& at(int n, int p) const {
        const int r = n - window_lo;
        const int c = p - window_lo;
        if (r < 0 || r >= window_size || c < 0 || c >= window_size) {
            throw std::out_of_range("ChannelRealization::at: outside window");
        }
        return matrix[static_cast<std::size_t>(r) * window_size + c];
    }
};

/// Brute-force realization of the coupling matrix: sample the tapped
/// delay line on the block's time-frequency lattice and apply the DFT
/// sum directly.  The delay profile is normalized first so that the
/// realization carries unit total tap power.
inline ChannelRealization dft_channel_matrix(const DelayProfile& profile,
                                             double doppler_hz,
                                             const SystemParams& params,
                                             int window_lo, int window_size,
                                             RngStream& rng) {
    const int n = params.n_subcarriers;
    if (window_lo < 0 || window_size < 1 || window_lo + window_size > n) {
        throw std::invalid_argument("dft_channel_matrix: window outside [0, N)");
    }
    const DelayProfile prof = normalize_profile(profile);
    const double symbol = params.symbol_s();

    ChannelRealization real;
    real.n_subcarriers = n;
    real.window_lo = window_lo;
    real.window_size = window_size;
    for (const auto& tap : prof.taps) {
        real.taps.push_back(realize_two_path_tap(tap.power, doppler_hz, rng));
    }

    const std::size_t l_count = prof.taps.size();
    std::vector<std::vector<std::complex<double>>> series(l_count);
    for (std::size_t l = 0; l < l_count; ++l) {
        detail::tap_series(real.taps[l], symbol, n, series[l]);
    }

    real.matrix.assign(static_cast<std::size_t>(window_size) * window_size, {});
    std::vector<std::complex<double>> h_n(static_cast<std::size_t>(n));
    for (int row = 0; row < window_size; ++row) {
        const int sub_n = window_lo + row;
        // h(t, n/T) = sum_l h_l(t) e^{-j 2 pi (n/T) tau_l}
        for (int k = 0; k < n; ++k) h_n[k] = 0.0;
        for (std::size_t l = 0; l < l_count; ++l) {
            const double ph = -2.0 * pi * (sub_n / symbol) * prof.taps[l].delay_s;
            const std::complex<double> w(std::cos(ph), std::sin(ph));
            for (int k = 0; k < n; ++k) h_n[k] += series[l][k] * w;
        }
        for (int col = 0; col < window_size; ++col) {
            const int sub_p = window_lo + col;
            const double wd = 2.0 * pi * (sub_n - sub_p) / n;
            const std::complex<double> step(std::cos(wd), std::sin(wd));
            std::complex<double> rot(1.0, 0.0);
            std::complex<double> acc(0.0, 0.0);
            for (int k = 0; k < n; ++k) {
                acc += h_n[k] * rot;
                rot *= step;
            }
            real.matrix[static_cast<std::size_t>(row) * window_size + col] =
                acc / static_cast<double>(n);
        }
    }
    return real;
}

/// One full row H(n, p), p = 0..N-1, of a fresh realization, plus the
/// time-average power (1/N) sum_k |h(kT/N, n/T)|^2 of the same row
/// (its Parseval partner).
inline std::pair<std::vector<std::complex<double>>, double> dft_channel_row(
    const DelayProfile& profile, double doppler_hz, const SystemParams& params,
    int sub_n, RngStream& rng) {
    const int n = params.n_subcarriers;
    if (sub_n < 0 || sub_n >= n) {
        throw std::invalid_argument("dft_channel_row: n outside [0, N)");
    }
    const DelayProfile prof = normalize_profile(profile);
    const double symbol = params.symbol_s();

    std::vector<std::complex<double>> h_n(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> series;
    for (const auto& tap : prof.taps) {
        const TwoPathTap t = realize_two_path_tap(tap.power, doppler_hz, rng);
        detail::tap_series(t, symbol, n, series);
        const double ph = -2.0 * pi * (sub_n / symbol) * tap.delay_s;
        const std::complex<double> w(std::cos(ph), std::sin(ph));
        for (int k = 0; k < n; ++k) h_n[k] += series[k] * w;
    }
    double time_avg = 0.0;
    for (int k = 0; k < n; ++k) time_avg += std::norm(h_n[k]);
    time_avg /= n;

    std::vector<std::complex<double>> row(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) {
        const double wd = 2.0 * pi * (sub_n - p) / n;
        const std::complex<double> step(std::cos(wd), std::sin(wd));
        std::complex<double> rot(1.0, 0.0);
        std::complex<double> acc(0.0, 0.0);
        for (int k = 0; k < n; ++k) {
            acc += h_n[k] * rot;
            rot *= step;
        }
        row[p] = acc / static_cast<double>(n);
    }
    return {std::move(row), time_avg};
}

/// Monte-Carlo second moments E|H(p+k, p)|^2 for |k| <= k_max around a
/// middle subcarrier, averaged over `trials` independent realizations.
/// Index 0 of the result is k = -k_max.
inline std::vector<double> mc_ici_second_moments(const DelayProfile& profile,
                                                 double doppler_hz,
                                                 const SystemParams& params,
                                                 int k_max, int trials,
                                                 RngStream& rng) {
    if (k_max < 0 || trials < 1) {
        throw std::invalid_argument("mc_ici_second_moments: bad k_max/trials");
    }
    const int p = params.n_subcarriers / 2;
    if (p - k_max < 0 || p + k_max >= params.n_subcarriers) {
        throw std::invalid_argument("mc_ici_second_moments: window outside band");
    }
    std::vector<double> acc(static_cast<std::size_t>(2 * k_max + 1), 0.0);
    for (int t = 0; t < trials; ++t) {
        const ChannelRealization real = dft_channel_matrix(
            profile, doppler_hz, params, p - k_max, 2 * k_max + 1, rng);
        for (int k = -k_max; k <= k_max; ++k) {
            acc[static_cast<std::size_t>(k + k_max)] += std::norm(real.at(p + k, p));
        }
    }
    for (auto& v : acc) v /= trials;
    return acc;
}

/// Brute-force slot-level scheduling simulation of the local users:
/// every slot draws i.i.d. unit-mean exponential gains per user per
/// subcarrier, gives each subcarrier to its best user (smallest index
/// on ties) with equal power P/N, applies that user's path loss after
/// selection, and time-averages the sum capacity.
inline double mc_sum_capacity(const SystemParams& params,
                              const UserPopulation& pop, int slots,
                              RngStream& rng) {
    params.validate();
    pop.validate(params);
    if (slots < 1000) {
        throw std::invalid_argument("mc_sum_capacity: needs >= 1000 slots");
    }
    const int n = params.n_subcarriers;
    const int m = params.n_users;
    std::vector<double> user_gamma;
    user_gamma.reserve(static_cast<std::size_t>(m));
    for (const auto& g : pop.groups) {
        const double gamma = params.power_w /
                             (pathloss_linear(g.distance_m, params.pathloss_exponent) *
                              params.noise_power_w());
        for (int u = 0; u < g.count; ++u) user_gamma.push_back(gamma);
    }

    const double subcarrier_bw = params.bandwidth_hz / n;
    const double ln_base = log_base_scale();
    double acc = 0.0;
    for (int slot = 0; slot < slots; ++slot) {
        double slot_rate = 0.0;
        for (int p = 0; p < n; ++p) {
            // max over the uniforms selects the same user as max over
            // the exponential gains (monotone transform).
            double best_u = rng.u01();
            int best_m = 0;
            for (int u = 1; u < m; ++u) {
                const double cand = rng.u01();
                if (cand > best_u) {
                    best_u = cand;
                    best_m = u;
                }
            }
            const double gain = -std::log1p(-best_u);
            slot_rate += subcarrier_bw *
                         std::log1p(gain * user_gamma[best_m]) / ln_base;
        }
        acc += slot_rate;
    }
    return acc / slots;
}

// ---------------------------------------------------------------------------
// Validation suite: every closed form in the library against its
// brute-force counterpart, reported as measured error vs threshold.

struct ValidationRow {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

namespace detail {

inline ValidationRow make_row(std::string name, double measured,
                              double threshold) {
    return ValidationRow{std::move(name), measured, threshold,
                         measured < threshold};
}

}  // namespace detail

/// Runs all oracle checks at the given sizes.  Deterministic for a
/// fixed seed.
inline std::vector<ValidationRow> validation_report(
    const SystemParams& params, const UserPopulation& pop,
    const DelayProfile& profile, std::uint64_t seed, int trials, int slots) {
    params.validate();
    pop.validate(params);
    std::vector<ValidationRow> rows;
    RngStream root(seed);
    const double fd_edge =
        derive_trajectory(params).periods.back().doppler_hz;
    const double symbol = params.symbol_s();
    const int n = params.n_subcarriers;

    {  // two-path tap: mean power and lag autocorrelation
        const int reps = 100000;
        RngStream rng = root.split(1);
        const double t0 = 0.37 * symbol;
        double power_acc = 0.0;
        for (int i = 0; i < reps; ++i) {
            const TwoPathTap tap = realize_two_path_tap(1.0, fd_edge, rng);
            power_acc += std::norm(tap.value(t0));
        }
        rows.push_back(detail::make_row("two_path_mean_power_rel_err",
                                        std::abs(power_acc / reps - 1.0), 0.01));

        RngStream rng2 = root.split(11);
        const double dt = 0.5 / fd_edge;  // f_D dt = 1/2 -> R = -power
        double corr_acc = 0.0;
        for (int i = 0; i < reps; ++i) {
            const TwoPathTap tap = realize_two_path_tap(1.0, fd_edge, rng2);
            const double t = symbol * rng2.u01();
            corr_acc += (tap.value(t) * std::conj(tap.value(t + dt))).real();
        }
        rows.push_back(detail::make_row("two_path_lag_autocorr_err",
                                        std::abs(corr_acc / reps + 1.0), 0.015));
    }

    {  // zero Doppler: coupling matrix diagonal to numerical precision
        RngStream rng = root.split(2);
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            const ChannelRealization real =
                dft_channel_matrix(profile, 0.0, params, n / 2 - 5, 11, rng);
            for (int a = 0; a < 11; ++a) {
                for (int b = 0; b < 11; ++b) {
                    if (a == b) continue;
                    worst = std::max(worst, std::abs(real.matrix[a * 11 + b]));
                }
            }
        }
        rows.push_back(detail::make_row("zero_doppler_offdiag_max", worst, 1e-10));
    }

    {  // second moments vs the closed forms at edge Doppler
        RngStream rng = root.split(3);
        const auto mc = mc_ici_second_moments(profile, fd_edge, params, 5,
                                              trials, rng);
        const double diag_ref = mr_diag_gain_mean(fd_edge, symbol, n);
        rows.push_back(detail::make_row(
            "mr_diag_gain_rel_err", std::abs(mc[5] / diag_ref - 1.0), 0.03));
        double worst = 0.0;
        double mc_window = 0.0;
        for (int k = -5; k <= 5; ++k) {
            if (k == 0) continue;
            const double ref = ici_coeff_exact(k, fd_edge, symbol, n);
            worst = std::max(worst, std::abs(mc[k + 5] / ref - 1.0));
            mc_window += mc[k + 5];
        }
        rows.push_back(detail::make_row("ici_coeff_rel_err_max", worst, 0.05));
        const double x = fd_edge * symbol;
        const double analytic_window = std::sin(pi * x) * std::sin(pi * x) /
                                       (static_cast<double>(n) * n) *
                                       ici_window_sum(5, n);
        rows.push_back(detail::make_row(
            "ici_window_aggregate_rel_err",
            std::abs(mc_window / analytic_window - 1.0), 0.10));
    }

    {  // Parseval: row power equals the row's time-average power
        RngStream rng = root.split(4);
        const auto [row, time_avg] =
            dft_channel_row(profile, fd_edge, params, n / 2, rng);
        double freq_power = 0.0;
        for (const auto& v : row) freq_power += std::norm(v);
        rows.push_back(detail::make_row("parseval_row_rel_err",
                                        std::abs(freq_power / time_avg - 1.0),
                                        1e-10));
    }

    {  // statistical C_sum vs slot-level scheduling simulation
        RngStream rng = root.split(5);
        CapacityOptions opt;
        opt.method = ErgodicMethod::quadrature;
        const CapacityModel model(params, pop, opt);
        const double analytic = model.c_sum();
        const double mc = mc_sum_capacity(params, pop, slots, rng);
        rows.push_back(detail::make_row("sum_capacity_rel_err",
                                        std::abs(mc / analytic - 1.0), 0.02));
    }

    {  // ergodic capacity: quadrature vs closed form vs sampling
        RngStream rng = root.split(6);
        const FadingLaw laws[] = {FadingLaw::exponential(1.0),
                                  FadingLaw::max_of(params.n_users)};
        double worst_closed = 0.0, worst_mc = 0.0;
        for (const auto& law : laws) {
            for (double gamma : {0.0253, 1.0, 3164.6}) {
                const double quad = ergodic_log_capacity(gamma, law);
                const double closed = ergodic_log_capacity_closed(gamma, law);
                worst_closed =
                    std::max(worst_closed, std::abs(closed / quad - 1.0));
                double acc = 0.0;
                const int n_samples = 1000000;
                for (int i = 0; i < n_samples; ++i) {
                    acc += std::log1p(gamma * sample_gain(law, rng));
                }
                acc /= n_samples * log_base_scale();
                worst_mc = std::max(worst_mc, std::abs(acc / quad - 1.0));
            }
        }
        rows.push_back(detail::make_row("ergodic_quad_vs_closed_rel",
                                        worst_closed, 0.005));
        rows.push_back(detail::make_row("ergodic_quad_vs_mc_rel", worst_mc, 0.005));
    }

    {  // sampling law vs analytic CDF (Kolmogorov-Smirnov)
        for (int which = 0; which < 2; ++which) {
            const FadingLaw law = which == 0 ? FadingLaw::exponential(1.0)
                                             : FadingLaw::max_of(params.n_users);
            RngStream rng = root.split(7 + which);
            const int n_samples = 100000;
            std::vector<double> xs(n_samples);
            for (auto& x : xs) x = sample_gain(law, rng);
            std::sort(xs.begin(), xs.end());
            double ks = 0.0;
            for (int i = 0; i < n_samples; ++i) {
                const double f = cdf_gain(law, xs[i]);
                ks = std::max(ks, std::abs(f - (i + 1.0) / n_samples));
                ks = std::max(ks, std::abs(f - static_cast<double>(i) / n_samples));
            }
            rows.push_back(detail::make_row(
                which == 0 ? "ks_stat_exp" : "ks_stat_max_of_m", ks, 0.01));
        }
    }

    {  // Monte-Carlo convergence: 4x the trials halves the error
        const int n_streams = 10;
        const int base = 2000;
        double rmse_small = 0.0, rmse_big = 0.0;
        for (int s = 0; s < n_streams; ++s) {
            RngStream rng = root.split(100 + s);
            double acc = 0.0;
            for (int i = 0; i < 4 * base; ++i) {
                const TwoPathTap tap = realize_two_path_tap(1.0, fd_edge, rng);
                acc += std::norm(tap.value(0.0));
                if (i + 1 == base) {
                    const double err = acc / base - 1.0;
                    rmse_small += err * err;
                }
            }
            const double err = acc / (4 * base) - 1.0;
            rmse_big += err * err;
        }
        rows.push_back(detail::make_row(
            "mc_convergence_ratio",
            std::sqrt(rmse_big / n_streams) / std::sqrt(rmse_small / n_streams),
            0.8));
    }

    return rows;
}

}  // namespace mralloc
