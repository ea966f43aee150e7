#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "mralloc/channel.hpp"
#include "mralloc/ici.hpp"
#include "mralloc/numeric.hpp"
#include "mralloc/params.hpp"
#include "mralloc/scenario.hpp"

namespace mralloc {

/// Capacities are reported in bit/s; changing the base here rescales
/// every rate in the library consistently.
inline constexpr double capacity_log_base = 2.0;

inline double log_base_scale() { return std::log(capacity_log_base); }

/// E[log2(1 + gamma X)] with X distributed per `law`, by
/// panel-doubling Gauss-Legendre quadrature on a log axis
/// (t = ln x), run to 1e-9 relative change.  This is the reference
/// evaluator; the closed forms below cross-check it.
inline double ergodic_log_capacity(double gamma, const FadingLaw& law,
                                   double rel_tol = 1e-9) {
    if (gamma < 0.0) {
        throw std::invalid_argument("ergodic_log_capacity: gamma must be >= 0");
    }
    if (gamma == 0.0) return 0.0;
    const double mu =
        law.kind == FadingLaw::Kind::exp_unit ? law.mean_mu : 1.0;
    const double x_lo = 1e-12 * mu;
    const double x_hi = law.kind == FadingLaw::Kind::exp_unit
                            ? 750.0 * mu
                            : 745.0 + std::log(static_cast<double>(law.m_users)) + 5.0;
    auto integrand = [&](double t) {
        const double x = std::exp(t);
        return x * pdf_gain(law, x) * std::log1p(gamma * x);
    };
    const double nats = integrate_doubling(integrand, std::log(x_lo),
                                           std::log(x_hi), rel_tol, 32);
    return nats / log_base_scale();
}

/// Closed forms of the same expectation:
///   exp(mu):   e^{1/(gamma mu)} E1(1/(gamma mu))
///   max_of_m:  sum_{j=1..m} C(m,j) (-1)^{j+1} e^{j/gamma} E1(j/gamma)
/// The alternating sum is evaluated in extended precision; it loses
/// roughly m bits to cancellation, so it is restricted to m <= 120.
inline double ergodic_log_capacity_closed(double gamma, const FadingLaw& law) {
    if (gamma < 0.0) {
        throw std::invalid_argument("ergodic_log_capacity_closed: gamma must be >= 0");
    }
    if (gamma == 0.0) return 0.0;
    if (law.kind == FadingLaw::Kind::exp_unit) {
        return exp_e1(1.0 / (gamma * law.mean_mu)) / log_base_scale();
    }
    const int m = law.m_users;
    if (m > 120) {
        throw std::invalid_argument(
            "ergodic_log_capacity_closed: alternating sum unstable for m > 120");
    }
    long double sum = 0.0L;
    long double binom = 1.0L;  // C(m, j), starting at j = 1
    for (int j = 1; j <= m; ++j) {
        binom = binom * static_cast<long double>(m - j + 1) / j;
        const long double term =
            binom * exp_e1(static_cast<long double>(j) / gamma);
        sum += (j % 2 == 1) ? term : -term;
    }
    return static_cast<double>(sum) / log_base_scale();
}

/// Monotone-cubic interpolant of gamma -> E[log2(1 + gamma X)] in
/// t = ln gamma, with nodes computed by the quadrature evaluator.
/// Outside the tabulated range the exact asymptotes take over
/// (linear in gamma below, log2(gamma) + const above).
class ErgodicTable {
  public:
    explicit ErgodicTable(const FadingLaw& law, double node_tol = 1e-9) {
        const int n = 2049;
        const double t_lo = std::log(1e-10);
        const double t_hi = std::log(1e10);
        const double dt = (t_hi - t_lo) / (n - 1);
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) {
            y[i] = ergodic_log_capacity(std::exp(t_lo + i * dt), law, node_tol);
        }
        interp_ = MonotoneCubic(t_lo, dt, std::move(y));
    }

    double operator()(double gamma) const {
        if (gamma <= 0.0) return 0.0;
        const double t = std::log(gamma);
        if (t < interp_.x_min()) {
            return interp_.front() * std::exp(t - interp_.x_min());
        }
        if (t > interp_.x_max()) {
            return interp_.back() + (t - interp_.x_max()) / log_base_scale();
        }
        return interp_(t);
    }

  private:
    MonotoneCubic interp_;
};

enum class ErgodicMethod {
    cached_table,  ///< interpolate quadrature-built tables (fast path)
    quadrature,    ///< evaluate the reference integral on every call
    closed_form,   ///< exponential-integral closed forms
};

/// Normalized SNR factors of one scheduling period.  gamma0 and
/// group_gamma scale as P / (d^alpha N0 B); gamma_ici0 is the
/// aggregate ICI factor of the period.
struct SnrFactors {
    int period_index = 0;
    double time_s = 0.0;
    double gamma0 = 0.0;
    double gamma_ici0 = 0.0;
    std::vector<double> group_gamma;
    std::vector<int> group_count;
};

struct RateTarget {
    double c_sum_bps = 0.0;
    double rho = 0.0;
    double r_th_bps = 0.0;
};

struct CapacityOptions {
    ErgodicMethod method = ErgodicMethod::cached_table;
    bool doppler_attenuation = true;  ///< fold E|H0(p,p)|^2 < 1 into gamma0
    IciSpec ici;
};

/// Ergodic-capacity model tying the fading laws, the SNR factors and
/// the two functions of the allocation program together.
///
/// G1 (MR objective):
///   g1 = beta B E[log(1 + gamma0 X eta / (gamma_ici0 eta + beta))]
/// G2 (local-user constraint, left-hand side):
///   g2 = sum_m (1-beta) B/M E[log(1 + gamma_m X (1-eta)/(1-beta))]
/// Both extend continuously by 0 at beta = 0 resp. beta = 1 / eta = 1.
///
/// All evaluators are immutable after construction; concurrent reads
/// are safe.
class CapacityModel {
  public:
    CapacityModel(const SystemParams& params, const UserPopulation& pop,
                  const CapacityOptions& options = {})
        : params_(params),
          pop_(pop),
          options_(options),
          mr_law_(FadingLaw::exponential(1.0)),
          user_law_(FadingLaw::max_of(params.n_users)) {
        params_.validate();
        pop_.validate(params_);
        if (options_.method == ErgodicMethod::cached_table) {
            mr_table_ = std::make_shared<ErgodicTable>(mr_law_);
            user_table_ = std::make_shared<ErgodicTable>(user_law_);
        }
    }

    const SystemParams& params() const { return params_; }
    const UserPopulation& population() const { return pop_; }
    const CapacityOptions& options() const { return options_; }

    /// Statistical sum capacity of the local users with all system
    /// resources, and the threshold r_th = rho * C_sum.
    RateTarget rate_target(double rho) const {
        if (!(rho >= 0.0 && rho <= 1.0)) {
            throw std::invalid_argument("rate_target: rho must be in [0, 1]");
        }
        RateTarget t;
        t.rho = rho;
        const double per_user_bw = params_.bandwidth_hz / params_.n_users;
        for (const auto& g : pop_.groups) {
            t.c_sum_bps += g.count * per_user_bw * eval_user(snr_scale(g.distance_m));
        }
        t.r_th_bps = rho * t.c_sum_bps;
        return t;
    }

    double c_sum() const { return rate_target(0.0).c_sum_bps; }

    /// SNR factors of one trajectory period.
    SnrFactors factors_for(const PeriodGeometry& period) const {
        SnrFactors f;
        f.period_index = period.index;
        f.time_s = period.time_s;
        f.gamma0 = params_.power_w / (period.pathloss * params_.noise_power_w());
        if (options_.doppler_attenuation) {
            f.gamma0 *= mr_diag_gain_mean(period.doppler_hz, params_.symbol_s(),
                                          params_.n_subcarriers);
        }
        f.gamma_ici0 = gamma_ici0(period, 1.0, params_, options_.ici).gamma_ici0;
        for (const auto& g : pop_.groups) {
            f.group_gamma.push_back(snr_scale(g.distance_m));
            f.group_count.push_back(g.count);
        }
        return f;
    }

    std::vector<SnrFactors> factors_for(const Trajectory& traj) const {
        std::vector<SnrFactors> out;
        out.reserve(traj.periods.size());
        for (const auto& p : traj.periods) out.push_back(factors_for(p));
        return out;
    }

    /// MR objective in bit/s.  with_ici = false drops the ICI term
    /// (the capacity upper bound); interference only lowers the SINR,
    /// so g1(no ici) >= g1(ici) pointwise.
    double g1(double eta, double beta, const SnrFactors& factors,
              bool with_ici) const {
        check_unit("g1", eta, beta);
        if (eta <= 0.0 || beta <= 0.0) return 0.0;
        const double gici = with_ici ? factors.gamma_ici0 : 0.0;
        const double scale = factors.gamma0 * eta / (gici * eta + beta);
        return beta * params_.bandwidth_hz * eval_mr(scale);
    }

    /// Local-user constraint left-hand side in bit/s.
    double g2(double eta, double beta, const SnrFactors& factors) const {
        check_unit("g2", eta, beta);
        if (eta >= 1.0 || beta >= 1.0) return 0.0;
        const double share = (1.0 - eta) / (1.0 - beta);
        double acc = 0.0;
        const double per_user_bw = params_.bandwidth_hz / params_.n_users;
        for (std::size_t g = 0; g < factors.group_gamma.size(); ++g) {
            acc += factors.group_count[g] * (1.0 - beta) * per_user_bw *
                   eval_user(factors.group_gamma[g] * share);
        }
        return acc;
    }

    /// E[log2(1 + gamma X)] under the MR (unit-mean exponential) or
    /// local-user (max-of-M) law, via the configured evaluator.
    double eval_mr(double gamma) const { return eval(gamma, mr_law_, mr_table_); }
    double eval_user(double gamma) const {
        return eval(gamma, user_law_, user_table_);
    }

  private:
    static void check_unit(const char* who, double eta, double beta) {
        if (!(eta >= 0.0 && eta <= 1.0 && beta >= 0.0 && beta <= 1.0)) {
            throw std::invalid_argument(std::string(who) +
                                        ": eta, beta must be in [0, 1]");
        }
    }

    double snr_scale(double distance_m) const {
        return params_.power_w /
               (pathloss_linear(distance_m, params_.pathloss_exponent) *
                params_.noise_power_w());
    }

    double eval(double gamma, const FadingLaw& law,
                const std::shared_ptr<ErgodicTable>& table) const {
        switch (options_.method) {
            case ErgodicMethod::cached_table:
                return (*table)(gamma);
            case ErgodicMethod::quadrature:
                return ergodic_log_capacity(gamma, law);
            case ErgodicMethod::closed_form:
                return ergodic_log_capacity_closed(gamma, law);
        }
        throw std::logic_error("CapacityModel: unknown method");
    }

    SystemParams params_;
    UserPopulation pop_;
    CapacityOptions options_;
    FadingLaw mr_law_;
    FadingLaw user_law_;
    std::shared_ptr<ErgodicTable> mr_table_;
    std::shared_ptr<ErgodicTable> user_table_;
};

}  // namespace mralloc
