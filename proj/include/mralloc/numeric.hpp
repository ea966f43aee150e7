#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace mralloc {

inline constexpr double pi = 3.14159265358979323846;

/// e^x * E1(x) for x > 0, where E1 is the exponential integral
/// int_x^inf e^{-t}/t dt.  The scaled form stays representable for
/// arbitrarily large x (E1 alone underflows past x ~ 700).
///
/// x <= 1.5 uses the power series of E1, larger x the modified Lentz
/// continued fraction, which directly yields the scaled value.
template <typename F = double>
F exp_e1(F x) {
    if (!(x > F(0))) throw std::domain_error("exp_e1: requires x > 0");
    if (x <= F(1.5)) {
        // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
        const F euler_gamma = F(0.57721566490153286060651209008240243L);
        F sum = F(0);
        F term = F(1);
        for (int k = 1; k < 64; ++k) {
            term *= -x / F(k);
            F add = -term / F(k);
            sum += add;
            if (std::abs(add) < std::abs(sum) * F(1e-20) + F(1e-300)) break;
        }
        return std::exp(x) * (-euler_gamma - std::log(x) + sum);
    }
    // e^x E1(x) = 1 / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...)))
    F b = x + F(1);
    F c = F(1) / F(1e-300);
    F d = F(1) / b;
    F h = d;
    for (int i = 1; i < 200; ++i) {
        F a = -F(i) * F(i);
        b += F(2);
        d = F(1) / (a * d + b);
        c = b + a / c;
        F del = c * d;
        h *= del;
        if (std::abs(del - F(1)) < F(1e-20)) break;
    }
    return h;
}

/// E1(x) itself; underflows to 0 for x beyond ~740.
inline double exp_integral_e1(double x) {
    return std::exp(-x) * exp_e1(x);
}

namespace detail {

// 16-point Gauss-Legendre abscissae/weights on [-1, 1].
inline constexpr std::array<double, 8> gl16_x = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
inline constexpr std::array<double, 8> gl16_w = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

}  // namespace detail

/// Composite 16-point Gauss-Legendre rule with `panels` equal panels.
template <typename Fn>
double integrate_gl16(Fn&& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double half = 0.5 * h;
        double acc = 0.0;
        for (std::size_t i = 0; i < detail::gl16_x.size(); ++i) {
            const double dx = half * detail::gl16_x[i];
            acc += detail::gl16_w[i] * (f(mid + dx) + f(mid - dx));
        }
        total += acc * half;
    }
    return total;
}

/// Panel-doubling Gauss-Legendre integration: doubles the panel count
/// until successive values agree to rel_tol (with a tiny absolute
/// floor).  Throws if max_panels is reached without convergence.
template <typename Fn>
double integrate_doubling(Fn&& f, double a, double b, double rel_tol,
                          int init_panels = 16, int max_panels = 1 << 13) {
    double prev = integrate_gl16(f, a, b, init_panels);
    for (int panels = init_panels * 2; panels <= max_panels; panels *= 2) {
        double cur = integrate_gl16(f, a, b, panels);
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + 1e-300) {
            return cur;
        }
        prev = cur;
    }
    throw std::runtime_error("integrate_doubling: quadrature did not converge");
}

/// Monotonicity-preserving cubic Hermite interpolant on a uniform
/// grid.  Interior slopes come from a fourth-order five-point stencil
/// and are then capped per Steffen (1990), so smooth monotone data
/// interpolates to ~(dx)^4 accuracy while the result never overshoots
/// the nodes.
class MonotoneCubic {
  public:
    MonotoneCubic() = default;

    MonotoneCubic(double x0, double dx, std::vector<double> y)
        : x0_(x0), dx_(dx), y_(std::move(y)) {
        if (y_.size() < 5 || dx_ <= 0.0) {
            throw std::invalid_argument("MonotoneCubic: need >= 5 nodes, dx > 0");
        }
        const std::size_t n = y_.size();
        slope_.resize(n);
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / dx_;
        auto limited = [](double raw, double d_left, double d_right) {
            if (d_left * d_right <= 0.0) return 0.0;
            const double cap = 2.0 * std::min(std::abs(d_left), std::abs(d_right));
            const double mag = std::min(std::abs(raw), cap);
            return (d_left > 0 ? 1.0 : -1.0) * mag;
        };
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double raw;
            if (i >= 2 && i + 2 < n) {
                raw = (-y_[i + 2] + 8.0 * y_[i + 1] - 8.0 * y_[i - 1] + y_[i - 2]) /
                      (12.0 * dx_);
            } else {
                raw = 0.5 * (d[i - 1] + d[i]);
            }
            slope_[i] = limited(raw, d[i - 1], d[i]);
        }
        auto end_slope = [](double d0, double d1) {
            const double p = 1.5 * d0 - 0.5 * d1;
            if (p * d0 <= 0.0) return 0.0;
            if (std::abs(p) > 2.0 * std::abs(d0)) return 2.0 * d0;
            return p;
        };
        slope_.front() = end_slope(d.front(), d[1]);
        slope_.back() = end_slope(d.back(), d[n - 3]);
    }

    double x_min() const { return x0_; }
    double x_max() const { return x0_ + dx_ * (y_.size() - 1); }
    double front() const { return y_.front(); }
    double back() const { return y_.back(); }

    /// Evaluate at x, which must lie inside [x_min, x_max].
    double operator()(double x) const {
        const std::size_t n = y_.size();
        double s = (x - x0_) / dx_;
        std::size_t i = static_cast<std::size_t>(s);
        if (s < 0.0) i = 0;
        if (i > n - 2) i = n - 2;
        const double t = s - static_cast<double>(i);
        const double y0 = y_[i], y1 = y_[i + 1];
        const double m0 = slope_[i] * dx_, m1 = slope_[i + 1] * dx_;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 +
               (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
    }

  private:
    double x0_ = 0.0;
    double dx_ = 1.0;
    std::vector<double> y_;
    std::vector<double> slope_;
};

}  // namespace mralloc
