#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "errors.hpp"
#include "functions.hpp"
#include "invz.hpp"
#include "parallel.hpp"
#include "summation.hpp"

namespace zsinh {

struct OracleResult {
  double value = 0.0;
  cplx complex_value;
  long N_used = 0;
  double stability_gap = 0.0;  // |T_N - T_{N/2}|
  bool converged = false;
};

// Default oracle radius: the unit circle when the annulus contains it,
// otherwise just inside the outer singularity.
inline double oracle_radius(const AnalyticityDescriptor& d, int n) {
  if (d.a_plus > 1.0 && d.a_minus < 1.0) return 1.0;
  return d.a_plus * std::exp(-1.0 / std::max(n, 1));
}

inline OracleResult trapezoid_oracle(const AnalyticFunction& u, int n, double r, double eps, int threads = 1) {
  detail::check_trap_radius(u.descriptor, n, r);
  OracleResult out;
  constexpr long N_first = 1L << 10, N_last = 1L << 22;
  cplx prev = detail::trapezoid_sum(u.evaluator, n, r, N_first, threads).first;
  for (long N = 2 * N_first; N <= N_last; N *= 2) {
    cplx cur = detail::trapezoid_sum(u.evaluator, n, r, N, threads).first;
    out.stability_gap = std::abs(cur - prev);
    out.complex_value = cur;
    out.value = cur.real();
    out.N_used = N;
    if (out.stability_gap < eps) {
      out.converged = true;
      return out;
    }
    prev = cur;
  }
  return out;
}

inline OracleResult trapezoid_oracle(const AnalyticFunction& u, int n, double eps = 1e-17) {
  return trapezoid_oracle(u, n, oracle_radius(u.descriptor, n), eps);
}

// Coefficients of (a+ - x)^{m+} (a- + x)^{m-} in powers of x = 1/z, i.e. the
// impulse response of H(z) = (a+ - 1/z)^{m+} (a- + 1/z)^{m-}.
inline std::vector<double> binomial_series_h(double a_plus, double a_minus, double m_plus, double m_minus, int n_max) {
  if (!(a_plus > 1.0) || !(a_minus > 1.0)) throw domain_error("binomial_series_h: a_plus and a_minus must exceed 1");
  if (n_max < 0) throw domain_error("binomial_series_h: n_max must be non-negative");
  using ld = long double;
  // (c + s x)^m = c^m sum_k binom(m, k) (s x / c)^k; stops once the
  // coefficient is exactly zero (non-negative integer m)
  auto series = [&](ld c, ld s, ld m, int& len) {
    std::vector<ld> out(n_max + 1, 0.0L);
    ld coef = std::pow(c, m), q = s / c;
    len = n_max + 1;
    for (int k = 0; k <= n_max; ++k) {
      out[k] = coef;
      coef *= (m - k) / (k + 1) * q;
      if (coef == 0.0L) {
        len = k + 1;
        break;
      }
    }
    return out;
  };
  int la = 0, lb = 0;
  auto A = series(a_plus, -1.0L, m_plus, la);
  auto B = series(a_minus, 1.0L, m_minus, lb);
  if (la > lb) {
    std::swap(A, B);
    std::swap(la, lb);
  }
  std::vector<double> h(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    compensated_sum<ld> acc;
    for (int j = 0; j < la && j <= n; ++j) acc.add(A[j] * B[n - j]);
    h[n] = static_cast<double>(acc.value());
  }
  return h;
}

// h[n] = (1/2 pi i) \oint_{|z|=r} H_plus(z) z^{-n-1} dz by the N-point
// trapezoid rule. H_plus is evaluated once per node; every n reuses the
// cached values with an exact integer phase index.
inline std::vector<double> reference_impulse_response(const std::function<cplx(cplx)>& H_plus, int n_lo, int n_hi,
                                                      double r, long N, int threads = 1) {
  if (n_lo < 0 || n_lo > n_hi) throw domain_error("reference_impulse_response: need 0 <= n_lo <= n_hi");
  if (N < 1) throw domain_error("reference_impulse_response: N must be positive");
  if (!(r > 0.0)) throw domain_error("reference_impulse_response: r must be positive");
  if (n_hi * std::log(1.0 / r) > 700.0) throw domain_error("reference_impulse_response: r^{-n} overflows");
  std::vector<cplx> vals(N), roots(N);
  parallel_for(static_cast<std::size_t>(N), threads, [&](std::size_t k) {
    double t = 2 * pi * static_cast<double>(k) / N;
    vals[k] = H_plus(std::polar(r, t));
    roots[k] = std::polar(1.0, -t);
  });
  const int count = n_hi - n_lo + 1;
  std::vector<double> out(count);
  parallel_for(
      static_cast<std::size_t>(count), threads,
      [&](std::size_t i) {
        long long n = n_lo + static_cast<long long>(i);
        compensated_sum<double> acc;
        long long ph = 0;
        for (long k = 0; k < N; ++k) {
          acc.add((vals[k] * roots[ph]).real());
          ph += n;
          if (ph >= N) ph %= N;
        }
        out[i] = acc.value() * std::pow(r, -static_cast<double>(n)) / static_cast<double>(N);
      },
      1);
  return out;
}

}  // namespace zsinh
