#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "mralloc/numeric.hpp"
#include "mralloc/rng.hpp"

namespace mralloc {

struct Tap {
    double delay_s = 0.0;
    double power = 0.0;
};

/// Tapped-delay-line power profile.  `sigma_s` is the average delay of
/// the exponential profile S(tau) = exp(-tau/sigma)/sigma from which
/// the tap powers are drawn.
struct DelayProfile {
    std::vector<Tap> taps;
    double sigma_s = 1e-6;

    double total_power() const {
        double s = 0.0;
        for (const auto& t : taps) s += t.power;
        return s;
    }
};

/// Six taps at 0..5 us with powers exp(-tau/1us), not yet normalized.
inline DelayProfile default_delay_profile() {
    return DelayProfile{{{0e-6, 1.000},
                         {1e-6, 0.368},
                         {2e-6, 0.135},
                         {3e-6, 0.050},
                         {4e-6, 0.018},
                         {5e-6, 0.007}},
                        1e-6};
}

/// Scale tap powers to unit total so that path loss alone sets the
/// mean SNR.  Idempotent; delays are untouched.
inline DelayProfile normalize_profile(const DelayProfile& raw) {
    if (raw.taps.empty()) {
        throw std::invalid_argument("normalize_profile: no taps");
    }
    double prev_delay = -1.0;
    for (const auto& t : raw.taps) {
        if (!(t.power > 0.0)) {
            throw std::invalid_argument("normalize_profile: tap powers must be > 0");
        }
        if (t.delay_s < prev_delay) {
            throw std::invalid_argument("normalize_profile: delays must be nondecreasing");
        }
        prev_delay = t.delay_s;
    }
    const double total = raw.total_power();
    DelayProfile out = raw;
    for (auto& t : out.taps) t.power /= total;
    return out;
}

/// Time-domain autocorrelation of the two-path Doppler model,
/// R(dt) = cos(2 pi f_D dt).
inline double time_autocorr(double doppler_hz, double dt_s) {
    return std::cos(2.0 * pi * doppler_hz * dt_s);
}

/// Cross covariance of the channel process over a frequency offset df
/// and a time lag dt under the exponential delay profile and two-path
/// Doppler model:
///   (1 + j 2 pi sigma df) / (1 + (2 pi sigma df)^2) * cos(2 pi f_D dt).
/// f_D = 0 gives the quasi-static local-user expression.
inline std::complex<double> cross_covariance(double sigma_s, double df_hz,
                                             double dt_s, double doppler_hz) {
    if (!(sigma_s > 0.0)) {
        throw std::invalid_argument("cross_covariance: sigma must be > 0");
    }
    const double a = 2.0 * pi * sigma_s * df_hz;
    const std::complex<double> freq(1.0 / (1.0 + a * a), a / (1.0 + a * a));
    return freq * time_autocorr(doppler_hz, dt_s);
}

/// Mean diagonal channel-gain attenuation caused by Doppler spread
/// within one OFDM symbol:
///   E|H(p,p)|^2 = sin^2(pi f_D T) / (N^2 sin^2(pi f_D T / N)),
/// equal to 1 in the time-invariant limit f_D -> 0.
inline double mr_diag_gain_mean(double doppler_hz, double symbol_s, int n) {
    const double x = std::abs(doppler_hz) * symbol_s;
    if (!(x < 0.5)) {
        throw std::domain_error("mr_diag_gain_mean: requires |f_D|*T < 0.5");
    }
    if (x == 0.0) return 1.0;
    const double num = std::sin(pi * x);
    const double den = static_cast<double>(n) * std::sin(pi * x / n);
    return (num * num) / (den * den);
}

/// Distribution of a squared channel gain |H|^2.
///
/// exp_unit: exponential with mean mu (Rayleigh envelope).
/// max_of_m: max over m unit-mean exponentials, CDF (1 - e^-x)^m --
/// the gain seen by a subcarrier after best-CSI user selection.
struct FadingLaw {
    enum class Kind { exp_unit, max_of_m };

    Kind kind = Kind::exp_unit;
    double mean_mu = 1.0;
    int m_users = 1;

    static FadingLaw exponential(double mu = 1.0) {
        if (!(mu > 0.0)) throw std::invalid_argument("FadingLaw: mu must be > 0");
        return FadingLaw{Kind::exp_unit, mu, 1};
    }
    static FadingLaw max_of(int m) {
        if (m < 1) throw std::invalid_argument("FadingLaw: m must be >= 1");
        return FadingLaw{Kind::max_of_m, 1.0, m};
    }
};

inline double cdf_gain(const FadingLaw& law, double x) {
    if (x < 0.0) throw std::invalid_argument("cdf_gain: x must be >= 0");
    if (law.kind == FadingLaw::Kind::exp_unit) {
        return -std::expm1(-x / law.mean_mu);
    }
    return std::pow(-std::expm1(-x), law.m_users);
}

inline double pdf_gain(const FadingLaw& law, double x) {
    if (x < 0.0) return 0.0;
    if (law.kind == FadingLaw::Kind::exp_unit) {
        return std::exp(-x / law.mean_mu) / law.mean_mu;
    }
    const int m = law.m_users;
    return m * std::pow(-std::expm1(-x), m - 1) * std::exp(-x);
}

/// Inverse CDF; u in [0, 1).
inline double quantile_gain(const FadingLaw& law, double u) {
    if (law.kind == FadingLaw::Kind::exp_unit) {
        return -law.mean_mu * std::log1p(-u);
    }
    return -std::log1p(-std::pow(u, 1.0 / law.m_users));
}

inline double sample_gain(const FadingLaw& law, RngStream& rng) {
    return quantile_gain(law, rng.u01());
}

/// E[X] under the law: mu, or the harmonic number H_m for max_of_m.
inline double mean_gain(const FadingLaw& law) {
    if (law.kind == FadingLaw::Kind::exp_unit) return law.mean_mu;
    double h = 0.0;
    for (int k = 1; k <= law.m_users; ++k) h += 1.0 / k;
    return h;
}

}  // namespace mralloc
