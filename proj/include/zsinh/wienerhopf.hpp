#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "contours.hpp"
#include "errors.hpp"
#include "functions.hpp"
#include "invz.hpp"
#include "parallel.hpp"
#include "summation.hpp"

namespace zsinh {

enum class DMethod { circle_trapezoid, sinh, automatic };

struct WHFOptions {
  double eps = 1e-15;
  double k_d = default_kd;
  double r_plus_frac = 0.5;    // r_plus = 1 + frac (a - 1)
  double delta_prime = 0.9;    // inner truncation rate 1 + delta_prime * delta
  std::optional<int> N_outer;  // half sizes: nodes j = -N..N
  std::optional<int> N_inner;
  std::optional<double> zeta;
  DMethod d_method = DMethod::automatic;
  int threads = 1;
};

inline cplx regularized_A(const PSDSpec& psd, cplx z) {
  const double a = psd.a;
  cplx reg = detail::order_pow(a - z, psd.m_plus, "regularized_A") *
             detail::order_pow(a - 1.0 / z, psd.m_plus, "regularized_A") *
             detail::order_pow(a + z, psd.m_minus, "regularized_A") *
             detail::order_pow(a + 1.0 / z, psd.m_minus, "regularized_A");
  return std::pow(a, psd.m()) * psd(z) / (psd.c_inf * reg);
}

namespace detail {

// Principal ln A along an ordered node list; a jump of more than pi in the
// imaginary part means A winds around 0 between two nodes.
inline std::vector<cplx> log_A_along(const PSDSpec& psd, const std::vector<cplx>& zs, const char* where) {
  std::vector<cplx> out(zs.size());
  for (std::size_t k = 0; k < zs.size(); ++k) {
    cplx A = regularized_A(psd, zs[k]);
    if (!(std::isfinite(A.real()) && std::isfinite(A.imag())) || A == 0.0)
      throw numerical_error(std::string("ln A undefined on the ") + where);
    out[k] = std::log(A);
    if (k > 0 && std::abs(out[k].imag() - out[k - 1].imag()) > pi)
      throw numerical_error(std::string("ln A jumps across the branch cut on the ") + where +
                            "; A winds around 0 (PSD must avoid (-inf, 0])");
  }
  return out;
}

// Contour shared by the inner (ln A_-) and outer (inversion) sums.
inline SinhContour whf_contour(const PSDSpec& psd, const WHFOptions& o) {
  if (!(o.r_plus_frac > 0.0 && o.r_plus_frac < 1.0)) throw config_error("r_plus_frac must lie in (0,1)");
  double omega = -psd.gamma / 2, d = o.k_d * psd.gamma / 2;
  auto fit = fit_sinh_to_interval(1.0, 1.0 + o.r_plus_frac * (psd.a - 1.0), omega, d);
  SinhContour c{fit.sigma, fit.b, omega, d};
  c.validate();
  return c;
}

inline double whf_step(const SinhContour& c, int n_hi, const WHFOptions& o) {
  if (o.zeta) return *o.zeta;
  double rho = std::min(1.0, origin_distance(c, true));
  return 2 * pi * c.d_half / (log_hardy(rho, n_hi) - std::log(o.eps));
}

struct InnerSum {
  QuadratureGrid grid;
  std::vector<cplx> lnA_plus, lnA_minus, w;
  double est_truncation = 0.0;
};

inline InnerSum inner_sum(const PSDSpec& psd, const SinhContour& c, double zeta, const WHFOptions& o) {
  InnerSum s;
  auto lnA_abs = [&](cplx z) {
    cplx A = regularized_A(psd, z);
    return std::abs(std::log(A));
  };
  auto mag = [&](double y) {
    cplx x = sinh_map(c, y);
    double ax = std::abs(x);
    return 1.5 * c.b / (2 * pi) * std::abs(std::cosh(cplx(y, c.omega))) / ax * (lnA_abs(x) + lnA_abs(-x)) /
           std::max(ax - 1.0, 1e-300);
  };
  int N1;
  if (o.N_inner) {
    N1 = *o.N_inner;
  } else {
    double L1 = envelope_lambda(mag, zeta, 1.0 + o.delta_prime * psd.delta, o.eps, &s.est_truncation);
    N1 = static_cast<int>(std::ceil(L1 / zeta));
  }
  s.grid = make_grid([&](double y) { return sinh_map(c, y); }, [&](double y) { return sinh_map_derivative(c, y); },
                     zeta, N1, false);
  std::vector<cplx> neg(s.grid.size());
  for (std::size_t k = 0; k < neg.size(); ++k) neg[k] = -s.grid.nodes[k];
  s.lnA_plus = log_A_along(psd, s.grid.nodes, "inner contour");
  s.lnA_minus = log_A_along(psd, neg, "reflected inner contour");
  s.w.resize(s.grid.size());
  for (std::size_t k = 0; k < s.w.size(); ++k)
    s.w[k] = zeta / (2 * pi) * (s.grid.weights[k] * cplx(0.0, -1.0)) / s.grid.nodes[k];
  return s;
}

inline double d_from_inner(const InnerSum& s) {
  compensated_sum<cplx> acc;
  for (std::size_t k = 0; k < s.w.size(); ++k) acc.add(s.w[k] * (s.lnA_plus[k] + s.lnA_minus[k]));
  return -acc.value().real();
}

inline double d_from_circle(const PSDSpec& psd) {
  auto mean_lnA = [&](long N) {
    std::vector<cplx> zs(N);
    for (long k = 0; k < N; ++k) zs[k] = std::polar(1.0, 2 * pi * (static_cast<double>(k) + 0.5) / N);
    auto l = log_A_along(psd, zs, "unit circle");
    return pairwise_sum<cplx>(l) / static_cast<double>(N);
  };
  cplx prev = mean_lnA(1L << 10);
  for (long N = 1L << 11; N <= (1L << 22); N *= 2) {
    cplx cur = mean_lnA(N);
    if (std::abs(cur - prev) < 1e-15) return -cur.real();
    prev = cur;
  }
  throw numerical_error("compute_d: circle trapezoid did not converge; use the sinh method");
}

inline DMethod resolve_d_method(const PSDSpec& psd, DMethod m) {
  if (m != DMethod::automatic) return m;
  return psd.a - 1.0 < 0.01 ? DMethod::sinh : DMethod::circle_trapezoid;
}

}  // namespace detail

inline double compute_d(const PSDSpec& psd, DMethod method, const WHFOptions& o = {}) {
  psd.validate();
  method = detail::resolve_d_method(psd, method);
  if (method == DMethod::circle_trapezoid) return detail::d_from_circle(psd);
  auto c = detail::whf_contour(psd, o);
  double zeta = detail::whf_step(c, 1, o);
  return detail::d_from_inner(detail::inner_sum(psd, c, zeta, o));
}

struct Factorization {
  PSDSpec psd;
  SinhContour contour;
  double d = 0.0;
  double c_plus = 1.0, c_minus = 1.0;
  QuadratureGrid inner_grid, outer_grid;
  std::vector<cplx> lnA_plus, lnA_minus, inner_w;  // ln A(+-chi^1_j), zeta/(2 pi) chi'/(i chi)
  std::vector<cplx> u_plus, u_minus;               // PSD/H_- at +-chi_k
  int n_lo = 0, n_hi = 0;
  double est_truncation_outer = 0.0, est_truncation_inner = 0.0;
};

// ln A_-(z) from the doubled contour; valid for |z| >= 1.
inline cplx ln_A_minus(const Factorization& f, cplx z) {
  compensated_sum<cplx> acc;
  for (std::size_t j = 0; j < f.inner_w.size(); ++j) {
    cplx x = f.inner_grid.nodes[j];
    cplx p = z * x - 1.0, q = z * x + 1.0;
    if (std::abs(p) < 1e-300 || std::abs(q) < 1e-300) throw domain_error("ln_A_minus: z lies on the inner contour");
    acc.add(f.inner_w[j] * (f.lnA_plus[j] / p - f.lnA_minus[j] / q));
  }
  return acc.value();
}

namespace detail {

// z_inv is passed by callers that start from 1/z: near a zero of H at a the
// rounded 1/(1/z) would cost |m| eps / |a - z| in relative accuracy
inline cplx H_minus_direct(const Factorization& f, cplx z, cplx z_inv) {
  const auto& p = f.psd;
  return f.c_minus * order_pow(p.a - z_inv, p.m_plus, "H_minus") * order_pow(p.a + z_inv, p.m_minus, "H_minus") *
         std::exp(ln_A_minus(f, z));
}

inline cplx H_minus_direct(const Factorization& f, cplx z) { return H_minus_direct(f, z, 1.0 / z); }

}  // namespace detail

inline cplx A_minus(const Factorization& f, cplx z) {
  if (std::abs(z) >= 1.0 - 1e-12) return std::exp(ln_A_minus(f, z));
  // A_-(z) = A(z) / A_+(z) and A_+(z) = A_-(1/z)
  return regularized_A(f.psd, z) / std::exp(ln_A_minus(f, 1.0 / z));
}

inline cplx A_plus(const Factorization& f, cplx z) {
  if (std::abs(z) <= 1.0 + 1e-12) return std::exp(ln_A_minus(f, 1.0 / z));
  return regularized_A(f.psd, z) / std::exp(ln_A_minus(f, z));
}

inline cplx H_minus(const Factorization& f, cplx z) {
  if (std::abs(z) >= 1.0 - 1e-12) return detail::H_minus_direct(f, z);
  return f.psd(z) / detail::H_minus_direct(f, 1.0 / z, z);
}

inline cplx H_plus(const Factorization& f, cplx z) {
  if (std::abs(z) <= 1.0 + 1e-12) return detail::H_minus_direct(f, 1.0 / z, z);
  const auto& p = f.psd;
  return f.c_plus * detail::order_pow(p.a - z, p.m_plus, "H_plus") * detail::order_pow(p.a + z, p.m_minus, "H_plus") *
         A_plus(f, z);
}

inline std::pair<cplx, cplx> H_factors(const Factorization& f, cplx z) { return {H_plus(f, z), H_minus(f, z)}; }

inline Factorization factorize(const PSDSpec& psd, int n_lo, int n_hi, const WHFOptions& o = {}) {
  psd.validate();
  if (n_lo > n_hi) throw config_error("factorize: need n_lo <= n_hi");
  if (!(n_lo > psd.m()))
    throw config_error("n_lo = " + std::to_string(n_lo) + " must exceed m_plus + m_minus = " + std::to_string(psd.m()));
  Factorization f;
  f.psd = psd;
  f.n_lo = n_lo;
  f.n_hi = n_hi;
  f.contour = detail::whf_contour(psd, o);
  const auto& c = f.contour;
  double zeta = detail::whf_step(c, n_hi, o);

  auto inner = detail::inner_sum(psd, c, zeta, o);
  f.inner_grid = std::move(inner.grid);
  f.lnA_plus = std::move(inner.lnA_plus);
  f.lnA_minus = std::move(inner.lnA_minus);
  f.inner_w = std::move(inner.w);
  f.est_truncation_inner = inner.est_truncation;
  {
    compensated_sum<cplx> acc;
    for (std::size_t k = 0; k < f.inner_w.size(); ++k) acc.add(f.inner_w[k] * (f.lnA_plus[k] + f.lnA_minus[k]));
    f.d = detail::resolve_d_method(psd, o.d_method) == DMethod::sinh ? -acc.value().real() : detail::d_from_circle(psd);
  }
  const double m = psd.m();
  f.c_minus = std::sqrt(psd.c_inf) * std::pow(psd.a, -m / 2) * std::exp(-f.d / 2);
  f.c_plus = std::sqrt(psd.c_inf) * std::pow(psd.a, -m / 2) * std::exp(f.d / 2);

  // outer grid: |u~| ~ sqrt|PSD| on the contour
  auto mag = [&](double y) {
    cplx x = sinh_map(c, y);
    double root = std::sqrt(std::abs(psd(x))) + std::sqrt(std::abs(psd(-x)));
    return 1.5 * c.b / (2 * pi) * std::abs(std::cosh(cplx(y, c.omega))) * root * std::pow(std::abs(x), -n_lo - 1.0);
  };
  int N;
  if (o.N_outer) {
    N = *o.N_outer;
  } else {
    double L = envelope_lambda(mag, zeta, n_lo - m, o.eps, &f.est_truncation_outer);
    N = static_cast<int>(std::ceil(L / zeta));
  }
  f.outer_grid = make_grid([&](double y) { return sinh_map(c, y); }, [&](double y) { return sinh_map_derivative(c, y); },
                           zeta, N, false);
  const std::size_t K = f.outer_grid.size();
  f.u_plus.resize(K);
  f.u_minus.resize(K);
  parallel_for(
      K, o.threads,
      [&](std::size_t k) {
        cplx x = f.outer_grid.nodes[k];
        f.u_plus[k] = psd(x) / detail::H_minus_direct(f, x);
        f.u_minus[k] = psd(-x) / detail::H_minus_direct(f, -x);
      },
      16);
  return f;
}

struct ImpulseResponse {
  int n_lo = 0;
  std::vector<double> h;
  double max_imag_ratio = 0.0;  // max |Im h| / max |h| before discarding
  int outer_nodes = 0;
  int inner_nodes = 0;
};

inline ImpulseResponse impulse_response(const Factorization& f, int n_lo, int n_hi, int threads = 1) {
  if (n_lo > n_hi) throw config_error("impulse_response: need n_lo <= n_hi");
  if (!(n_lo > f.psd.m())) throw config_error("impulse_response: n_lo must exceed m_plus + m_minus");
  const auto& g = f.outer_grid;
  const std::size_t K = g.size();
  std::vector<cplx> logx(K), pre_p(K), pre_m(K);
  for (std::size_t k = 0; k < K; ++k) {
    logx[k] = std::log(g.nodes[k]);
    cplx jac = g.zeta / (2 * pi) * g.weights[k] * cplx(0.0, -1.0);
    pre_p[k] = jac * f.u_plus[k];
    pre_m[k] = jac * f.u_minus[k];
  }
  const int count = n_hi - n_lo + 1;
  std::vector<cplx> vals(count);
  parallel_for(
      static_cast<std::size_t>(count), threads,
      [&](std::size_t i) {
        int n = n_lo + static_cast<int>(i);
        double sgn = n % 2 == 0 ? 1.0 : -1.0;
        compensated_sum<cplx> acc;
        for (std::size_t k = 0; k < K; ++k) {
          cplx e = -(n + 1.0) * logx[k];
          if (e.real() > 700.0) throw numerical_error("impulse_response: overflow of z^{-n-1}");
          acc.add((pre_p[k] + sgn * pre_m[k]) * std::exp(e));
        }
        vals[i] = acc.value();
      },
      16);
  ImpulseResponse r;
  r.n_lo = n_lo;
  r.h.resize(count);
  double hmax = 0.0, imax = 0.0;
  for (int i = 0; i < count; ++i) {
    r.h[i] = vals[i].real();
    hmax = std::max(hmax, std::abs(vals[i]));
    imax = std::max(imax, std::abs(vals[i].imag()));
  }
  r.max_imag_ratio = hmax > 0.0 ? imax / hmax : 0.0;
  r.outer_nodes = static_cast<int>(K);
  r.inner_nodes = static_cast<int>(f.inner_grid.size());
  return r;
}

inline ImpulseResponse impulse_response(const PSDSpec& psd, int n_lo, int n_hi, const WHFOptions& o = {}) {
  auto f = factorize(psd, n_lo, n_hi, o);
  return impulse_response(f, n_lo, n_hi, o.threads);
}

}  // namespace zsinh
