#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace zsinh {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr double default_kd = 0.9;

// z = sigma + i b sinh(i omega + y). The strip |Im y| < d_half is the region
// where the integrand must stay analytic.
struct SinhContour {
  double sigma = 0.0;
  double b = 1.0;
  double omega = 0.0;
  double d_half = 0.0;

  void validate() const {
    if (!(b > 0.0) || !std::isfinite(b)) throw domain_error("sinh contour: b must be positive and finite");
    if (!std::isfinite(sigma)) throw domain_error("sinh contour: sigma must be finite");
    if (!(std::abs(omega) < pi / 2)) throw domain_error("sinh contour: |omega| must be below pi/2");
    if (!(d_half >= 0.0) || !(d_half < pi / 2 - std::abs(omega)))
      throw domain_error("sinh contour: need 0 <= d_half < pi/2 - |omega|");
  }
  bool operator==(const SinhContour&) const = default;
};

// z = sigma + i y ln(A + y^2); d_half is the strip half-width used for the
// discretization estimate.
struct LogContour {
  double sigma = 1.0;
  double A = 2.0;
  double d_half = 0.0;

  void validate() const {
    if (!(A > 1.0)) throw domain_error("log contour: A must exceed 1");
    if (!(d_half >= 0.0) || !(d_half * d_half < A - 1.0))
      throw domain_error("log contour: need 0 <= d_half < sqrt(A - 1)");
  }
};

struct StripImage {
  double r_minus;
  double r_plus;
  double origin_distance;
};

struct StripAngles {
  double omega;
  double d_half;
};

struct SinhFit {
  double sigma;
  double b;
};

inline cplx sinh_map(const SinhContour& c, double y) {
  return {c.sigma - c.b * std::sin(c.omega) * std::cosh(y), c.b * std::cos(c.omega) * std::sinh(y)};
}

inline cplx sinh_map(const SinhContour& c, cplx y) {
  return c.sigma + cplx(0, c.b) * std::sinh(cplx(0, c.omega) + y);
}

// dz/dy = i b cosh(i omega + y)
inline cplx sinh_map_derivative(const SinhContour& c, double y) {
  return {-c.b * std::sin(c.omega) * std::sinh(y), c.b * std::cos(c.omega) * std::cosh(y)};
}

inline cplx log_map(const LogContour& c, double y) { return {c.sigma, y * std::log(c.A + y * y)}; }

inline cplx log_map(const LogContour& c, cplx y) { return c.sigma + cplx(0, 1) * y * std::log(c.A + y * y); }

// d Im z / dy; the full Jacobian is i times this.
inline double log_map_derivative(const LogContour& c, double y) {
  double q = c.A + y * y;
  return std::log(q) + 2.0 * y * y / q;
}

inline SinhFit fit_sinh_to_interval(double r_minus, double r_plus, double omega, double d_half) {
  if (!(r_minus > 0.0) || !(r_minus < r_plus)) throw domain_error("fit_sinh_to_interval: need 0 < r_minus < r_plus");
  double den = 2.0 * std::cos(omega) * std::sin(d_half);
  if (!(d_half > 0.0) || !(std::abs(den) > 1e-300) || !std::isfinite(den))
    throw domain_error("fit_sinh_to_interval: degenerate 2 cos(omega) sin(d_half)");
  return {(r_plus * std::sin(omega + d_half) - r_minus * std::sin(omega - d_half)) / den, (r_plus - r_minus) / den};
}

// Equivalent to b > sigma sin(omega + d) for the fitted contour; only
// meaningful when omega + d >= 0, otherwise trivially true.
inline bool admissible_rpm(double r_minus, double r_plus, double omega, double d_half) {
  if (omega + d_half < 0.0) return true;
  double sp = std::sin(omega + d_half), sm = std::sin(omega - d_half);
  return r_minus * (1.0 - sp * sm) < r_plus * (1.0 - sp * sp);
}

// Angles for left-opening contours squeezed into a thin annulus
// r_minus < |z| < r_minus + delta.
inline StripAngles small_angle_params(double delta) {
  if (!(delta > 0.0)) throw domain_error("small_angle_params: delta must be positive");
  double omega = std::sqrt(9.0 / 48.0) * std::sqrt(delta);
  return {omega, 2.0 * omega / 3.0};
}

namespace detail {

// Minimum of |sigma + i b sinh(i theta + y)| over real y. With t = cosh y the
// squared modulus is sigma^2 - 2 sigma b sin(theta) t + b^2 t^2 - b^2 cos^2(theta).
inline double curve_origin_distance(double sigma, double b, double theta) {
  if (b == 0.0) return std::abs(sigma);
  double s = std::sin(theta), co = std::cos(theta);
  if (b < sigma * s) return co * std::sqrt(std::max(0.0, sigma * sigma - b * b));
  return std::abs(sigma - b * s);
}

}  // namespace detail

// Distance from the origin to the contour itself (at_strip_edge = false) or
// to the closed strip image. The second is the minimum over both edges unless
// the strip contains the origin.
inline double origin_distance(const SinhContour& c, bool at_strip_edge) {
  if (!at_strip_edge) return detail::curve_origin_distance(c.sigma, c.b, c.omega);
  if (c.b > 0.0) {
    double q = c.sigma / c.b;
    if (q >= std::sin(c.omega - c.d_half) && q <= std::sin(c.omega + c.d_half)) return 0.0;
  }
  return std::min(detail::curve_origin_distance(c.sigma, c.b, c.omega + c.d_half),
                  detail::curve_origin_distance(c.sigma, c.b, c.omega - c.d_half));
}

inline StripImage strip_image(const SinhContour& c) {
  return {c.sigma - c.b * std::sin(c.omega + c.d_half), c.sigma - c.b * std::sin(c.omega - c.d_half),
          origin_distance(c, true)};
}

namespace detail {

template <int N>
struct gauss_legendre_rule {
  std::array<double, N> x{};
  std::array<double, N> w{};
  gauss_legendre_rule() {
    for (int i = 0; i < (N + 1) / 2; ++i) {
      double z = std::cos(pi * (i + 0.75) / (N + 0.5)), dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= N; ++k) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = N * (z * p0 - p1) / (z * z - 1.0);
        double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = -z;
      x[N - 1 - i] = z;
      w[i] = w[N - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

template <int N, class F>
double gauss_legendre(F&& f, double lo, double hi) {
  static const gauss_legendre_rule<N> rule;
  double h = 0.5 * (hi - lo), m = 0.5 * (hi + lo), s = 0.0;
  for (int i = 0; i < N; ++i) s += rule.w[i] * f(m + h * rule.x[i]);
  return h * s;
}

}  // namespace detail

// Length of the part of the contour inside the unit disc. |z|^2 is a convex
// quadratic in cosh(y), so the inside set is one interval in cosh(y).
inline double arc_length_inside_unit_disc(const SinhContour& c) {
  double co = std::cos(c.omega), s = std::sin(c.omega);
  double disc = 1.0 + co * co * (c.b * c.b - c.sigma * c.sigma);
  if (disc <= 0.0) return 0.0;
  double t_hi = (c.sigma * s + std::sqrt(disc)) / c.b;
  double t_lo = std::max(1.0, (c.sigma * s - std::sqrt(disc)) / c.b);
  if (t_hi <= t_lo) return 0.0;
  double y_lo = std::acosh(t_lo), y_hi = std::acosh(t_hi);
  auto speed = [&](double y) {
    double sh = std::sinh(y);
    return c.b * std::sqrt(sh * sh + co * co);
  };
  return 2.0 * detail::gauss_legendre<64>(speed, y_lo, y_hi);
}

// Cone-angle rules. alpha/gamma are the half-angles of the cones where the
// transform is analytic and bounded.
inline StripAngles sinh1_angles(double alpha, double kd = default_kd) {
  if (!(alpha > pi / 2)) throw domain_error("Condition Z-SINH1 with alpha <= pi/2 leaves no admissible strip");
  return {pi / 4 - alpha / 2, kd * (alpha / 2 - pi / 4)};
}

// Angles in the w-plane for v(w) = u(w^2), optionally with w = w1^p.
inline StripAngles sinh2_angles(double alpha, double p = 1.0, double kd = default_kd) {
  if (!(alpha > pi / 2)) throw domain_error("Condition Z-SINH2 needs alpha > pi/2");
  if (p == 1.0) {
    double omega = pi / 4 - alpha / 2;
    return {omega, -kd * omega};
  }
  double gp = pi / (2 * p) - pi / 2, gm = (pi - alpha) / (2 * p) - pi / 2;
  return {(gp + gm) / 2, kd * (gp - gm) / 2};
}

inline StripAngles sinh3_angles(double gamma, double p = 1.0, double kd = default_kd) {
  if (!(gamma > 0.0)) throw domain_error("Condition Z-SINH3 needs gamma > 0");
  if (p == 1.0) return {0.0, kd * gamma};
  double gp = (pi / 2) * (1.0 / p - 1.0), gm = gp - gamma / p;
  return {(gp + gm) / 2, kd * (gp - gm) / 2};
}

// Largest d with sigma + d ln(A - d^2) = r_plus; the left crossing then sits
// at 2 sigma - r_plus = r_minus.
inline LogContour fit_log_to_interval(double r_minus, double r_plus, std::optional<double> A_override = {}) {
  if (!(r_minus > 0.0) || !(r_minus < r_plus)) throw domain_error("fit_log_to_interval: need 0 < r_minus < r_plus");
  LogContour c;
  c.sigma = 0.5 * (r_plus + r_minus);
  c.A = A_override ? *A_override : 1.0 + std::pow(r_plus - r_minus, 0.25);
  if (!(c.A > 1.0)) throw domain_error("fit_log_to_interval: A must exceed 1");
  double target = r_plus - c.sigma;
  auto g = [&](double d) { return d * std::log(c.A - d * d); };
  auto gp = [&](double d) { return std::log(c.A - d * d) - 2.0 * d * d / (c.A - d * d); };
  double lo = 0.0, hi = std::sqrt(c.A - 1.0);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (gp(mid) > 0.0 ? lo : hi) = mid;
  }
  double peak = 0.5 * (lo + hi);
  if (g(peak) < target) throw domain_error("fit_log_to_interval: interval too wide for this A");
  lo = 0.0;
  hi = peak;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) < target ? lo : hi) = mid;
  }
  c.d_half = 0.5 * (lo + hi);
  return c;
}

// min |z| over the strip edges (the two edges are complex conjugates).
inline double log_origin_distance(const LogContour& c) {
  auto f = [&](double y) { return std::abs(log_map(c, cplx(y, c.d_half))); };
  constexpr int K = 2000;
  constexpr double Y = 12.0;
  int best = 0;
  double fbest = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= K; ++k) {
    double v = f(-Y + 2.0 * Y * k / K);
    if (v < fbest) fbest = v, best = k;
  }
  double lo = -Y + 2.0 * Y * std::max(best - 1, 0) / K, hi = -Y + 2.0 * Y * std::min(best + 1, K) / K;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 80; ++it) {
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    if (f(x1) < f(x2))
      hi = x2;
    else
      lo = x1;
  }
  return std::min(fbest, f(0.5 * (lo + hi)));
}

}  // namespace zsinh
