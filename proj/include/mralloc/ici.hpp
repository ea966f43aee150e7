#pragma once

#include <cmath>
#include <map>
#include <stdexcept>

#include "mralloc/channel.hpp"
#include "mralloc/numeric.hpp"
#include "mralloc/params.hpp"
#include "mralloc/scenario.hpp"

namespace mralloc {

/// Mean subcarrier-coupling power E|H(n,p)|^2 of the two-path Doppler
/// channel, as the literal finite double-cosine sum
///   1/N + (2/N^2) sum_{j=1}^{N-1} (N-j)/2 (cos(A j) + cos(B j)),
/// A = 2 pi (f_D T + k)/N, B = 2 pi (f_D T - k)/N, k = n - p.
///
/// This is the slow reference form; ici_coeff_exact is its closed
/// equivalent and is checked against it term by term in the tests.
inline double ici_coeff_sum(int k, double doppler_hz, double symbol_s, int n) {
    if (std::abs(k) >= n) {
        throw std::invalid_argument("ici_coeff_sum: requires |n - p| < N");
    }
    const double x = doppler_hz * symbol_s;
    const double a = 2.0 * pi * (x + k) / n;
    const double b = 2.0 * pi * (x - k) / n;
    double acc = 0.0;
    for (int j = 1; j < n; ++j) {
        acc += 0.5 * (n - j) * (std::cos(a * j) + std::cos(b * j));
    }
    return 1.0 / n + 2.0 / (static_cast<double>(n) * n) * acc;
}

namespace detail {

// sin^2(theta N / 2) / sin^2(theta / 2), with the removable
// singularity at theta == 0 (mod 2 pi) evaluated as the limit N^2.
// The argument is reduced mod 2 pi first; the reduction leaves both
// sines unchanged because N is an integer.
inline double dirichlet_power(double theta, int n, double arg_tol = 1e-12) {
    const double d = std::remainder(theta, 2.0 * pi);
    if (std::abs(d) < arg_tol) return static_cast<double>(n) * n;
    const double num = std::sin(0.5 * d * n);
    const double den = std::sin(0.5 * d);
    return (num * num) / (den * den);
}

}  // namespace detail

/// Closed form of ici_coeff_sum:
///   (1 / 2N^2) [ sin^2(A N/2)/sin^2(A/2) + sin^2(B N/2)/sin^2(B/2) ].
inline double ici_coeff_exact(int k, double doppler_hz, double symbol_s, int n) {
    if (std::abs(k) >= n) {
        throw std::invalid_argument("ici_coeff_exact: requires |n - p| < N");
    }
    const double x = doppler_hz * symbol_s;
    const double a = 2.0 * pi * (x + k) / n;
    const double b = 2.0 * pi * (x - k) / n;
    const double nn = static_cast<double>(n) * n;
    return (detail::dirichlet_power(a, n) + detail::dirichlet_power(b, n)) /
           (2.0 * nn);
}

/// Off-diagonal small-Doppler approximation
///   (1/N^2) sin^2(pi f_D T) / sin^2(pi k / N),
/// obtained by dropping the f_D T / N term from the denominators of
/// the closed form.  Valid for k != 0 and f_D T well below 1.
inline double ici_coeff_approx(int k, double doppler_hz, double symbol_s, int n) {
    if (k == 0) {
        throw std::invalid_argument("ici_coeff_approx: k = 0 is the diagonal");
    }
    if (std::abs(k) >= n) {
        throw std::invalid_argument("ici_coeff_approx: requires |n - p| < N");
    }
    const double x = doppler_hz * symbol_s;
    if (!(std::abs(x) < 0.2)) {
        throw std::domain_error("ici_coeff_approx: requires |f_D|*T < 0.2");
    }
    const double num = std::sin(pi * x);
    const double den = std::sin(pi * k / n);
    return (num * num) / (static_cast<double>(n) * n * den * den);
}

/// Two-sided truncation window sum sum_{k=1..W} 2 / sin^2(pi k / N).
inline double ici_window_sum(int window, int n) {
    if (window < 1 || 2 * window >= n) {
        throw std::invalid_argument("ici_window_sum: requires 1 <= W < N/2");
    }
    double acc = 0.0;
    for (int k = 1; k <= window; ++k) {
        const double s = std::sin(pi * k / n);
        acc += 2.0 / (s * s);
    }
    return acc;
}

/// Truncation/approximation policy for the ICI model.  ICI from
/// subcarriers more than `window` indices away is dropped (the
/// coupling decays like 1/k^2); `use_approx` selects the small-Doppler
/// form for the coefficient table.
struct IciSpec {
    int window = 5;
    bool use_approx = false;
};

/// Coefficient table for index differences -W..W at one Doppler
/// shift.  k = 0 always carries the exact diagonal value.
inline std::map<int, double> ici_coeff_table(const IciSpec& spec,
                                             double doppler_hz,
                                             double symbol_s, int n) {
    std::map<int, double> table;
    table[0] = ici_coeff_exact(0, doppler_hz, symbol_s, n);
    for (int k = 1; k <= spec.window; ++k) {
        const double v = spec.use_approx
                             ? ici_coeff_approx(k, doppler_hz, symbol_s, n)
                             : ici_coeff_exact(k, doppler_hz, symbol_s, n);
        table[k] = v;
        table[-k] = v;
    }
    return table;
}

struct IciPower {
    /// Normalized aggregate ICI factor of one scheduling period:
    ///   gamma_ici0 = sin^2(pi f_D T) P / (N^2 d0^alpha N0 B)
    ///                * sum_{k=1..W} 2/sin^2(pi k/N).
    /// The SINR of an interior MR subcarrier is
    /// gamma0*eta / (gamma_ici0*eta + beta).
    double gamma_ici0 = 0.0;
    /// gamma_ici0 * N0 * B; multiply by the MR power fraction eta to
    /// get the in-band aggregate ICI power in watts.
    double p_ici_watts = 0.0;
};

/// Aggregate in-band ICI factor for one period.  Every MR subcarrier
/// is treated as interior and assigned the full two-sided window sum,
/// which makes the factor independent of beta; beta only enters the
/// validity check that the band actually spans the window.
inline IciPower gamma_ici0(const PeriodGeometry& period, double beta,
                           const SystemParams& params, const IciSpec& spec) {
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw std::invalid_argument("gamma_ici0: beta must be in (0, 1]");
    }
    if (spec.window > beta * params.n_subcarriers) {
        throw std::invalid_argument(
            "gamma_ici0: window exceeds the MR band (W > beta*N)");
    }
    const int n = params.n_subcarriers;
    const double x = period.doppler_hz * params.symbol_s();
    const double s = std::sin(pi * x);
    const double prefactor =
        s * s * params.power_w /
        (static_cast<double>(n) * n * period.pathloss * params.noise_power_w());
    IciPower out;
    out.gamma_ici0 = prefactor * ici_window_sum(spec.window, n);
    out.p_ici_watts = out.gamma_ici0 * params.noise_power_w();
    return out;
}

/// Diagnostic only: normalized cross-band ICI leaking from the
/// local-user band into a boundary MR subcarrier (one-sided window at
/// per-subcarrier user power (1-eta)P/((1-beta)N)).  The optimizer
/// path drops this term; consecutive MR subcarriers make it a pure
/// boundary effect.
inline double gamma_ici_cross(const PeriodGeometry& period, double eta,
                              double beta, const SystemParams& params,
                              const IciSpec& spec) {
    if (!(beta > 0.0 && beta < 1.0)) {
        throw std::invalid_argument("gamma_ici_cross: beta must be in (0, 1)");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("gamma_ici_cross: eta must be in [0, 1]");
    }
    const int n = params.n_subcarriers;
    const double x = period.doppler_hz * params.symbol_s();
    const double s = std::sin(pi * x);
    const double prefactor =
        s * s * params.power_w /
        (static_cast<double>(n) * n * period.pathloss * params.noise_power_w());
    return prefactor * (1.0 - eta) / (1.0 - beta) * 0.5 *
           ici_window_sum(spec.window, n);
}

}  // namespace mralloc
