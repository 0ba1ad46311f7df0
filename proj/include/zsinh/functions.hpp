#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "contours.hpp"
#include "errors.hpp"

namespace zsinh {

enum class ConditionKind { sinh1, sinh2, sinh3, log, annulus_only };

inline const char* condition_name(ConditionKind k) {
  switch (k) {
    case ConditionKind::sinh1: return "Z-SINH1";
    case ConditionKind::sinh2: return "Z-SINH2";
    case ConditionKind::sinh3: return "Z-SINH3";
    case ConditionKind::log: return "Z-LOG";
    case ConditionKind::annulus_only: return "annulus-only";
  }
  return "?";
}

// What is known about where the transform can be continued. Several
// conditions may hold at once; `kind` and `cone_angle` name the first one in
// the order sinh1, sinh2, sinh3, log.
struct AnalyticityDescriptor {
  double a_minus = 0.0;
  double a_plus = 1.0;
  ConditionKind kind = ConditionKind::annulus_only;
  double cone_angle = std::numeric_limits<double>::quiet_NaN();
  double growth_m = 0.0;
  double growth_C = 1.0;

  std::optional<double> sinh1_alpha;
  bool sinh1_positive_omega_only = false;  // drift: contours must open to the left
  std::optional<double> sinh2_alpha;       // for v(w) = u(w^2), w-plane cone
  std::optional<double> sinh3_gamma;
  bool log_ok = false;
  double log_growth = 0.0;  // polynomial growth on the log region

  bool supports(ConditionKind k) const {
    switch (k) {
      case ConditionKind::sinh1: return sinh1_alpha.has_value();
      case ConditionKind::sinh2: return sinh2_alpha.has_value();
      case ConditionKind::sinh3: return sinh3_gamma.has_value();
      case ConditionKind::log: return log_ok;
      case ConditionKind::annulus_only: return true;
    }
    return false;
  }

  void refresh_kind() {
    cone_angle = std::numeric_limits<double>::quiet_NaN();
    if (sinh1_alpha) {
      kind = ConditionKind::sinh1;
      cone_angle = *sinh1_alpha;
    } else if (sinh2_alpha) {
      kind = ConditionKind::sinh2;
      cone_angle = *sinh2_alpha;
    } else if (sinh3_gamma) {
      kind = ConditionKind::sinh3;
      cone_angle = *sinh3_gamma;
    } else if (log_ok) {
      kind = ConditionKind::log;
    } else {
      kind = ConditionKind::annulus_only;
    }
  }
};

struct AnalyticFunction {
  std::function<cplx(cplx)> evaluator;
  AnalyticityDescriptor descriptor;
  bool conjugate_symmetric = true;
  std::string label;

  cplx operator()(cplx z) const { return evaluator(z); }
};

namespace detail {

// Principal power with the cut (-inf, 0] enforced.
inline cplx principal_pow(cplx base, double p, const char* what) {
  if (base.imag() == 0.0 && base.real() <= 0.0)
    throw domain_error(std::string(what) + ": argument on the branch cut (-inf, 0]");
  return std::exp(p * std::log(base));
}

inline cplx ipow(cplx x, long k) {
  bool inv = k < 0;
  unsigned long e = inv ? -static_cast<unsigned long>(k) : static_cast<unsigned long>(k);
  cplx r = 1.0;
  while (e) {
    if (e & 1u) r *= x;
    x *= x;
    e >>= 1u;
  }
  return inv ? 1.0 / r : r;
}

inline bool is_integer(double m) { return std::isfinite(m) && m == std::round(m) && std::abs(m) < 1e9; }

// base^m; integer orders avoid branch questions altogether.
inline cplx order_pow(cplx base, double m, const char* what) {
  if (m == 0.0) return 1.0;
  if (is_integer(m)) return ipow(base, static_cast<long>(m));
  return principal_pow(base, m, what);
}

// Gamma at negative non-integer -nu via the reflection formula.
inline double gamma_neg(double nu) { return -pi / (std::sin(pi * nu) * std::tgamma(1.0 + nu)); }

}  // namespace detail

// Points on the circle inside the annulus and on canonical contours of every
// supported condition; used both to calibrate C and by the bound checks.
inline std::vector<cplx> domain_samples(const AnalyticityDescriptor& d, int per_curve = 200, double shrink = 1.0) {
  std::vector<cplx> pts;
  double top = std::min(1.0, d.a_plus);
  double r0 = std::max(0.5 * (d.a_minus + top), top * (1.0 - 0.01 * shrink));
  for (int k = 0; k < per_curve; ++k) pts.push_back(std::polar(r0, 2 * pi * k / per_curve));
  double rm = top * (1.0 - 0.02 * shrink), rp = top;
  if (rm <= d.a_minus) rm = 0.5 * (d.a_minus + rp);
  auto ys = [&](int k) { return -12.0 + 24.0 * k / (per_curve - 1); };
  if (d.sinh1_alpha) {
    StripAngles a = d.sinh1_positive_omega_only ? small_angle_params(rp - rm) : sinh1_angles(*d.sinh1_alpha);
    auto f = fit_sinh_to_interval(rm, rp, a.omega, a.d_half);
    for (double edge : {-1.0, 0.0, 1.0}) {
      SinhContour c{f.sigma, f.b, a.omega + 0.9 * edge * a.d_half, 0.0};
      for (int k = 0; k < per_curve; ++k) pts.push_back(sinh_map(c, ys(k)));
    }
  }
  if (d.sinh2_alpha) {
    StripAngles a = sinh2_angles(*d.sinh2_alpha);
    auto f = fit_sinh_to_interval(std::sqrt(rm), std::sqrt(rp), a.omega, a.d_half);
    SinhContour c{f.sigma, f.b, a.omega, 0.0};
    for (int k = 0; k < per_curve; ++k) {
      cplx w = sinh_map(c, ys(k));
      pts.push_back(w * w);
    }
  }
  if (d.sinh3_gamma) {
    StripAngles a = sinh3_angles(*d.sinh3_gamma);
    auto f = fit_sinh_to_interval(rm, rp, a.omega, a.d_half);
    SinhContour c{f.sigma, f.b, a.omega + 0.9 * a.d_half, 0.0};
    for (int k = 0; k < per_curve; ++k) {
      cplx z = sinh_map(c, ys(k));
      pts.push_back(z);
      pts.push_back(-z);
    }
  }
  if (d.log_ok) {
    LogContour c = fit_log_to_interval(top * (1.0 - 0.06 * shrink), top);
    for (int k = 0; k < per_curve; ++k) {
      cplx z = log_map(c, ys(k));
      pts.push_back(z);
      pts.push_back(-z);
    }
  }
  return pts;
}

// C = 1.5 max |u(z)| / (1 + |z|)^m over the domain samples.
inline double calibrate_growth_constant(const std::function<cplx(cplx)>& u, const AnalyticityDescriptor& d) {
  double best = 0.0;
  for (cplx z : domain_samples(d)) {
    double v = std::abs(u(z)) / std::pow(1.0 + std::abs(z), d.growth_m);
    if (std::isfinite(v)) best = std::max(best, v);
  }
  return 1.5 * std::max(best, std::numeric_limits<double>::min());
}

// Moment generating function exp(mu z + c Gamma(-nu)((lambda - z)^nu - lambda^nu)).
inline AnalyticFunction kobol_mgf(double c, double nu, double lambda, double mu = 0.0) {
  if (!(c > 0.0)) throw domain_error("kobol: c must be positive");
  if (!(nu > 0.0 && nu < 2.0) || nu == 1.0) throw domain_error("kobol: nu must lie in (0,2) and differ from 1");
  if (!(lambda > 1.0)) throw domain_error("kobol: lambda must exceed 1");
  double cg = c * detail::gamma_neg(nu);
  cplx lam_nu = detail::principal_pow(lambda, nu, "kobol");

  AnalyticFunction f;
  f.label = "kobol";
  f.evaluator = [=](cplx z) { return std::exp(mu * z + cg * (detail::principal_pow(lambda - z, nu, "kobol") - lam_nu)); };
  auto& d = f.descriptor;
  d.a_minus = 0.0;
  d.a_plus = lambda;
  if (nu < 1.0) {
    // bounded where |arg(lambda - z)| < pi/(2 nu)
    double alpha = std::min(pi, pi / (2 * nu));
    if (mu == 0.0) {
      d.sinh1_alpha = alpha;
      d.sinh2_alpha = std::min(pi, 0.5 * (pi + alpha));
      d.sinh3_gamma = std::min(pi / 2, alpha - pi / 2);
    } else if (mu > 0.0) {
      d.sinh1_alpha = pi / 2;
      d.sinh1_positive_omega_only = true;
      d.sinh2_alpha = std::min(0.5 * (pi + alpha), 3 * pi / 4);
    }
  } else {
    d.sinh3_gamma = (pi / 2) * std::min(1.0 - 1.0 / nu, 3.0 / nu - 1.0);
  }
  d.log_ok = true;
  d.log_growth = std::abs(mu);
  d.refresh_kind();
  d.growth_C = calibrate_growth_constant(f.evaluator, d);
  return f;
}

// Symmetric normal tempered stable: exp(mu z + delta(lambda^nu - (lambda^2 - z^2)^{nu/2})).
inline AnalyticFunction nts_mgf(double delta, double nu, double lambda, double mu = 0.0) {
  if (!(delta > 0.0)) throw domain_error("nts: delta must be positive");
  if (!(nu > 0.0 && nu < 2.0)) throw domain_error("nts: nu must lie in (0,2)");
  if (!(lambda > 1.0)) throw domain_error("nts: lambda must exceed 1");
  double lam_nu = std::pow(lambda, nu);
  double l2 = lambda * lambda;

  AnalyticFunction f;
  f.label = "nts";
  f.evaluator = [=](cplx z) {
    return std::exp(mu * z + delta * (lam_nu - detail::principal_pow(l2 - z * z, nu / 2, "nts")));
  };
  auto& d = f.descriptor;
  d.a_minus = 0.0;
  d.a_plus = lambda;
  if (mu == 0.0 || nu > 1.0) d.sinh3_gamma = (pi / 2) * std::min(1.0 / nu, 1.0);
  d.log_ok = true;
  d.log_growth = std::abs(mu);
  d.refresh_kind();
  d.growth_C = calibrate_growth_constant(f.evaluator, d);
  return f;
}

// The asymmetric family has no worked-out continuation data here.
inline AnalyticFunction nts_mgf_asymmetric(double, double, double, double, double) {
  throw unsupported_error("nts: the non-symmetric variant is not implemented");
}

// w e^{mu z} + (1 - w) base(z), e.g. a distribution with an atom at mu.
inline AnalyticFunction atom_mixture(double w, double mu, const AnalyticFunction& base) {
  if (!(w >= 0.0 && w <= 1.0)) throw domain_error("atom_mixture: weight must lie in [0,1]");
  AnalyticFunction f;
  f.label = "mixture";
  auto be = base.evaluator;
  f.evaluator = [=](cplx z) { return w * std::exp(mu * z) + (1.0 - w) * be(z); };
  f.conjugate_symmetric = base.conjugate_symmetric;
  auto d = base.descriptor;
  if (w > 0.0 && mu != 0.0) {
    bool had3 = d.sinh3_gamma.has_value();
    if (mu > 0.0) {
      if (d.sinh1_alpha) {
        d.sinh1_alpha = std::min(*d.sinh1_alpha, pi / 2);
        d.sinh1_positive_omega_only = true;
      }
      if (d.sinh2_alpha) d.sinh2_alpha = std::min(*d.sinh2_alpha, 3 * pi / 4);
    } else {
      d.sinh1_alpha.reset();
      d.sinh1_positive_omega_only = false;
      d.sinh2_alpha.reset();
    }
    d.sinh3_gamma.reset();
    d.log_ok = d.log_ok || had3;
    d.log_growth = std::max(d.log_growth, std::abs(mu));
  }
  d.refresh_kind();
  d.growth_C = calibrate_growth_constant(f.evaluator, d);
  f.descriptor = d;
  return f;
}

// Power spectral density on the unit circle together with the data the
// factorization needs: A(z) = a^m PSD(z) / (c_inf (a-z)^{m+} (a-1/z)^{m+} (a+z)^{m-} (a+1/z)^{m-})
// tends to 1 at 0 and infinity like |z|^{-delta}.
struct PSDSpec {
  std::function<cplx(cplx)> evaluator;
  double a = 2.0;
  double gamma = pi / 2;
  double m_plus = 0.0;
  double m_minus = 0.0;
  double c_inf = 1.0;
  double delta = 1.0;

  cplx operator()(cplx z) const { return evaluator(z); }
  double m() const { return m_plus + m_minus; }

  void validate() const {
    if (!evaluator) throw config_error("psd: no evaluator");
    if (!(a > 1.0)) throw domain_error("psd: a must exceed 1");
    if (!(gamma > 0.0 && gamma <= pi / 2)) throw domain_error("psd: gamma must lie in (0, pi/2]");
    if (!(c_inf > 0.0)) throw domain_error("psd: c_inf must be positive");
    if (!(delta > 0.0 && delta <= 1.0)) throw domain_error("psd: delta must lie in (0, 1]");
    for (int k = 0; k < 64; ++k) {
      cplx z = std::polar(1.0, 2 * pi * (k + 0.37) / 64);
      cplx p = evaluator(z), q = evaluator(1.0 / z);
      if (!(p.real() > 0.0) || std::abs(p.imag()) > 1e-10 * std::abs(p))
        throw domain_error("psd: PSD must be positive on the unit circle");
      if (std::abs(p - q) > 1e-10 * std::abs(p)) throw domain_error("psd: PSD(1/z) != PSD(z)");
    }
  }
};

struct RationalPSD {
  PSDSpec psd;
  std::function<cplx(cplx)> H;       // H(z) = sum h[n] z^{-n}
  std::function<cplx(cplx)> H_plus;  // H(1/z) = sum h[n] z^n
  double a_plus, a_minus, m_plus, m_minus;
};

// PSD(z) = H(z) H(1/z) with H(z) = (a+ - 1/z)^{m+} (a- + 1/z)^{m-}.
inline RationalPSD rational_psd(double a_plus, double a_minus, double m_plus, double m_minus) {
  if (!(a_plus > 1.0) || !(a_minus > 1.0)) throw domain_error("rational_psd: a_plus and a_minus must exceed 1");
  RationalPSD r{{}, {}, {}, a_plus, a_minus, m_plus, m_minus};
  auto Hp = [=](cplx x) {  // H as a function of x = 1/z
    return detail::order_pow(a_plus - x, m_plus, "rational_psd") * detail::order_pow(a_minus + x, m_minus, "rational_psd");
  };
  r.H = [=](cplx z) { return Hp(1.0 / z); };
  r.H_plus = Hp;
  r.psd.evaluator = [=](cplx z) { return Hp(z) * Hp(1.0 / z); };
  r.psd.a = std::min(a_plus, a_minus);
  r.psd.gamma = pi / 2;
  r.psd.m_plus = m_plus;
  r.psd.m_minus = m_minus;
  // exact leading coefficient so that A -> 1 at infinity
  r.psd.c_inf = std::pow(a_plus, m_plus) * std::pow(a_minus, m_minus);
  r.psd.delta = 1.0;
  return r;
}

// Direction phi of the axis {e^{i phi}, -e^{i phi}} farthest (in angle) from
// every pole. Rotating by phi - pi/2 moves that axis onto the imaginary axis,
// where the symmetric sinh contours live. Ties go to the smallest |phi|.
inline double select_rotation(const std::vector<cplx>& poles) {
  if (poles.empty()) return 0.0;
  // work modulo pi: an axis and its opposite are the same line
  std::vector<double> t;
  for (cplx p : poles) {
    if (std::abs(std::abs(p) - 1.0) < 1e-14) throw domain_error("select_rotation: pole on the unit circle");
    double a = std::fmod(std::arg(p), pi);
    if (a < 0) a += pi;
    t.push_back(a);
  }
  std::sort(t.begin(), t.end());
  double best_gap = -1.0;
  std::vector<double> cands;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double lo = t[i], hi = (i + 1 < t.size()) ? t[i + 1] : t[0] + pi;
    double gap = hi - lo;
    double mid = 0.5 * (lo + hi);
    if (gap > best_gap + 1e-12) {
      best_gap = gap;
      cands.assign(1, mid);
    } else if (std::abs(gap - best_gap) <= 1e-12) {
      cands.push_back(mid);
    }
  }
  double best = 0.0, best_abs = std::numeric_limits<double>::infinity();
  for (double c : cands) {
    for (double rep : {c, c - pi, c + pi, c - 2 * pi}) {
      if (rep < -pi || rep >= pi) continue;
      double a = std::abs(rep);
      if (a < best_abs - 1e-12 || (std::abs(a - best_abs) <= 1e-12 && rep > best)) {
        best_abs = a;
        best = rep;
      }
    }
  }
  return best;
}

}  // namespace zsinh
