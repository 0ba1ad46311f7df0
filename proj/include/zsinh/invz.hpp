#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "contours.hpp"
#include "errors.hpp"
#include "functions.hpp"
#include "parallel.hpp"
#include "summation.hpp"

namespace zsinh {

enum class Method { trap, sinh1, sinh2, sinh3, log, automatic };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::trap: return "trap";
    case Method::sinh1: return "sinh1";
    case Method::sinh2: return "sinh2";
    case Method::sinh3: return "sinh3";
    case Method::log: return "log";
    case Method::automatic: return "auto";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) {
  for (Method m : {Method::trap, Method::sinh1, Method::sinh2, Method::sinh3, Method::log, Method::automatic})
    if (s == method_name(m)) return m;
  return std::nullopt;
}

inline ConditionKind required_condition(Method m) {
  switch (m) {
    case Method::sinh1: return ConditionKind::sinh1;
    case Method::sinh2: return ConditionKind::sinh2;
    case Method::sinh3: return ConditionKind::sinh3;
    case Method::log: return ConditionKind::log;
    default: return ConditionKind::annulus_only;
  }
}

enum class Truncation { envelope, formula };
enum class Fold { automatic, never };

// Nodes chi(j zeta) and Jacobians dchi/dy for j = -N..N, or j = 0..N when the
// sum is folded by conjugate symmetry.
struct QuadratureGrid {
  double zeta = 0.0;
  int N_half = 0;
  double Lambda = 0.0;
  bool folded = false;
  std::vector<cplx> nodes;
  std::vector<cplx> weights;

  std::size_t size() const { return nodes.size(); }
  int index(std::size_t k) const { return folded ? static_cast<int>(k) : static_cast<int>(k) - N_half; }
};

template <class Map, class Deriv>
QuadratureGrid make_grid(Map&& chi, Deriv&& dchi, double zeta, int N_half, bool folded) {
  QuadratureGrid g;
  g.zeta = zeta;
  g.N_half = N_half;
  g.Lambda = N_half * zeta;
  g.folded = folded;
  int lo = folded ? 0 : -N_half;
  for (int j = lo; j <= N_half; ++j) {
    double y = j * zeta;
    g.nodes.push_back(chi(y));
    g.weights.push_back(dchi(y));
  }
  return g;
}

struct InversionReport {
  cplx value;
  int nodes_used = 0;
  double est_discretization_error = 0.0;
  double est_truncation_error = 0.0;
  Method method = Method::trap;

  double real() const { return value.real(); }
};

struct InversionOptions {
  double eps = 1e-15;
  std::optional<double> r_minus, r_plus;  // crossing radii (w-plane for sinh2/sinh3 with p != 1)
  std::optional<double> M;                // overflow budget r^{-n} <= e^{M + M1}
  double M1_ratio = 0.9;
  double k_d = default_kd;
  std::optional<double> omega, d_half;
  double p = 1.0;
  double phi = 0.0;  // sinh3: evaluate u(z e^{i phi})
  Truncation truncation = Truncation::envelope;
  double reduce = 1.0;
  std::optional<double> zeta;
  std::optional<int> N_half;
  Fold fold = Fold::automatic;
  std::optional<double> trap_r;
  std::optional<long> trap_N;
  int threads = 1;
};

// ---------------------------------------------------------------------------
// Plain trapezoid rule on |z| = r

inline double trapezoid_error_bound(double hardy_norm, double rho, long N) {
  if (!(rho > 1.0)) throw domain_error("trapezoid_error_bound: rho must exceed 1");
  double q = std::pow(rho, -static_cast<double>(N));
  return hardy_norm * q / (1.0 - q);
}

// Node count for r = e^{-M/n} when the nearest singularity sits near |z| = 1.
inline long trapezoid_node_estimate(double eps, int n, double M) {
  return static_cast<long>(std::ceil((n / M) * (std::log(1.0 / eps) + 2.0 * M)));
}

namespace detail {

inline void check_trap_radius(const AnalyticityDescriptor& d, int n, double r) {
  if (!(r > d.a_minus && r < d.a_plus))
    throw domain_error("trapezoid: radius " + std::to_string(r) + " outside the annulus of analyticity");
  if (n * std::log(1.0 / r) > 700.0) throw domain_error("trapezoid: r^{-n} overflows");
}

// (1/N) sum u(r w^k) w^{-kn}, w = e^{2 pi i/N}; phases reduced exactly in
// integers so large N does not lose the root of unity.
inline std::pair<cplx, double> trapezoid_sum(const std::function<cplx(cplx)>& u, int n, double r, long N,
                                             int threads) {
  std::vector<cplx> vals(N);
  std::vector<double> mags(N);
  parallel_for(static_cast<std::size_t>(N), threads, [&](std::size_t k) {
    double t = 2 * pi * static_cast<double>(k) / N;
    cplx f = u(std::polar(r, t));
    long long ph = (static_cast<long long>(k) * n) % N;
    vals[k] = f * std::polar(1.0, -2 * pi * static_cast<double>(ph) / N);
    mags[k] = std::abs(f);
  });
  cplx s = pairwise_sum<cplx>(vals);
  return {s * std::pow(r, -n) / static_cast<double>(N), *std::max_element(mags.begin(), mags.end())};
}

}  // namespace detail

inline cplx trapezoid_invert(const AnalyticFunction& u, int n, double r, long N, int threads = 1) {
  if (N < 1) throw domain_error("trapezoid: N must be positive");
  if (n < 0) throw domain_error("trapezoid: n must be non-negative");
  detail::check_trap_radius(u.descriptor, n, r);
  return detail::trapezoid_sum(u.evaluator, n, r, N, threads).first;
}

// Radius for a given N. With a singularity beyond the unit circle the aliased
// coefficient u_{n+N} r^N is about (r/a+)^N a+^{-n}, so r is pushed as close
// to 1 as that allows (rounding grows like r^{-n}). Otherwise solve
// N = (n/M)(E + 2M) for M.
inline double trapezoid_radius(int n, long N, double eps, double a_plus) {
  double E = std::log(1.0 / eps);
  if (a_plus > 1.0 && std::isfinite(a_plus)) {
    double s = (E - static_cast<double>(N + n) * std::log(a_plus)) / static_cast<double>(N);
    return std::exp(-std::max(s, 0.0));
  }
  if (a_plus > 1.0) return 1.0;
  double r = N > 2L * n ? std::exp(-E / static_cast<double>(N - 2L * n)) : std::exp(-4.0 / std::max(n, 1));
  return std::min(r, a_plus * std::exp(-1.0 / std::max(n, 1)));
}

inline InversionReport trapezoid_report(const AnalyticFunction& u, int n, const InversionOptions& o) {
  const auto& d = u.descriptor;
  constexpr double default_trap_M = 4.0;
  long N = o.trap_N ? *o.trap_N : trapezoid_node_estimate(o.eps, std::max(n, 1), default_trap_M);
  // for a+ <= 1 and the default N this is e^{-M/n}
  double r = o.trap_r ? *o.trap_r : trapezoid_radius(n, N, o.eps, d.a_plus);
  if (N < 1) throw domain_error("trapezoid: N must be positive");
  detail::check_trap_radius(d, n, r);
  auto [v, umax] = detail::trapezoid_sum(u.evaluator, n, r, N, o.threads);
  double est = 0.0;
  if (std::isfinite(d.a_plus)) est += trapezoid_error_bound(umax, d.a_plus / r, N) * std::pow(r, -n);
  if (d.a_minus > 0.0) est += trapezoid_error_bound(umax, r / d.a_minus, N) * std::pow(r, -n);
  return {v, static_cast<int>(N), est, 0.0, Method::trap};
}

// ---------------------------------------------------------------------------
// Step and truncation

inline double step_from_hardy(double d_half, double H_appr, double eps) {
  if (!(d_half > 0.0) || !(H_appr > 0.0) || !(eps > 0.0)) throw domain_error("step_from_hardy: arguments must be positive");
  double l = std::log(H_appr / eps);
  if (!(l > 0.0)) throw domain_error("step_from_hardy: need H_appr > eps");
  return 2 * pi * d_half / l;
}

// Truncation from a generic bound C(1+|z|)^m; lambda0 is the arc length of
// the contour inside the unit disc.
inline double truncation_lambda(int n, double m_u, double C_u, double b, double eps, double reduce, double lambda0 = 0.0) {
  if (!(n > m_u)) throw domain_error("truncation_lambda: need n > m");
  if (!(b > 0.0)) throw domain_error("truncation_lambda: b must be positive");
  if (!(reduce > 0.0 && reduce <= 1.0)) throw domain_error("truncation_lambda: reduce must lie in (0,1]");
  return (std::log(C_u / eps) / (n - m_u) - std::log(b / 2) + lambda0) * reduce;
}

// Smallest Lambda such that the geometric tail bound of the integrand beyond
// +-Lambda stays below eps. mag(y) bounds |f(y)|; rate is the exponential
// decay rate of the tail in y.
template <class Mag>
double envelope_tail(Mag&& mag, double zeta, double rate, double y) {
  double geo = zeta / (1.0 - std::exp(-std::max(rate, 1e-3) * zeta));
  double a = mag(y), b = mag(-y);
  return std::max(std::isfinite(a) ? a : 0.0, std::isfinite(b) ? b : 0.0) * geo;
}

template <class Mag>
double envelope_lambda(Mag&& mag, double zeta, double rate, double eps, double* tail_at_lambda = nullptr) {
  auto g = [&](double y) { return envelope_tail(mag, zeta, rate, y); };
  double hi = 1.0;
  while (g(hi) > 1e-3 * eps) {
    hi *= 2.0;
    if (hi > 1e6) throw numerical_error("integrand does not decay along the contour");
  }
  // scan down for the last crossing; relative steps keep long log tails cheap
  double y = hi, h = 0.02;
  while (y > 0.0 && g(y) <= eps) {
    h = std::max(0.02, 0.01 * y);
    y -= h;
  }
  if (y <= 0.0) {
    if (tail_at_lambda) *tail_at_lambda = g(0.0);
    return 0.0;
  }
  double lo = y, up = y + h;
  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (lo + up);
    (g(mid) > eps ? lo : up) = mid;
  }
  if (tail_at_lambda) *tail_at_lambda = g(up);
  return up;
}

// r^{-n} budget: M + M1 = 1.5 + ln(eps / eps_machine), clamped to [1.5, 20].
inline double default_overflow_budget(double eps, double M1_ratio = 0.9) {
  double T = std::clamp(1.5 + std::log(eps / DBL_EPSILON), 1.5, 20.0);
  return T / (1.0 + M1_ratio);
}

// ---------------------------------------------------------------------------
// Deformed contours

struct InversionPlan {
  Method method = Method::sinh1;
  std::variant<SinhContour, LogContour> contour;
  QuadratureGrid grid;
  double p = 1.0;
  double phi = 0.0;
  double n_factor = 1.0;  // effective exponent = n_factor * n
  double ln_H = 0.0;      // log of the Hardy-norm estimate at n_hi
  double rho = 1.0;       // distance from the strip to the origin
  double C = 1.0;
  double est_truncation = 0.0;
  int n_lo = 0;
  int n_hi = 0;

  double d_half() const {
    return std::visit([](const auto& c) { return c.d_half; }, contour);
  }
};

namespace detail {

inline double log_hardy(double rho, double n_eff) {
  if (!(rho > 0.0)) throw domain_error("contour strip touches the origin");
  double a = -n_eff * std::log(rho);
  if (a > 700.0) throw domain_error("z^{-n-1} overflows on the strip; move r_minus closer to 1");
  double l10 = std::log(10.0);
  return std::max(a, l10) + std::log1p(std::exp(-std::abs(a - l10)));
}

inline std::string condition_failure(const AnalyticFunction& u, Method m) {
  std::string msg = std::string("Condition ") + condition_name(required_condition(m)) + " fails for model '" +
                    u.label + "'";
  std::string alt;
  for (Method c : {Method::sinh2, Method::sinh1, Method::sinh3, Method::log})
    if (u.descriptor.supports(required_condition(c))) alt += (alt.empty() ? "" : ", ") + std::string(method_name(c));
  msg += alt.empty() ? "; only the trapezoid rule applies" : "; try " + alt;
  return msg;
}

// Bracket evaluated at a node w for exponent parity `odd`.
struct NodeValues {
  cplx plus;   // u(z)
  cplx minus;  // u(-z), only for two-sided brackets
};

inline bool two_sided(Method m) { return m == Method::sinh3 || m == Method::log; }

inline double prefactor(Method m, double p) {
  switch (m) {
    case Method::sinh2: return p / pi;
    case Method::sinh3: return p / (2 * pi);
    default: return 1.0 / (2 * pi);
  }
}

// z as a function of the integration variable w
inline cplx z_of_w(Method m, cplx w, double p, double phi) {
  switch (m) {
    case Method::sinh2: return p == 1.0 ? w * w : std::exp(2 * p * std::log(w));
    case Method::sinh3: {
      cplx z = p == 1.0 ? w : std::exp(p * std::log(w));
      return phi == 0.0 ? z : z * std::polar(1.0, phi);
    }
    default: return w;
  }
}

inline NodeValues eval_node(const AnalyticFunction& u, Method m, cplx w, double p, double phi) {
  cplx z = z_of_w(m, w, p, phi);
  NodeValues v{u(z), 0.0};
  if (two_sided(m)) v.minus = u(-z);
  return v;
}

}  // namespace detail

// Builds contour and grid for n in [n_lo, n_hi]: the Hardy estimate uses n_hi
// (largest |z|^{-n} on the strip), truncation uses n_lo (slowest decay).
// When u is null the bracket bound falls back to the descriptor constant.
inline InversionPlan plan_inversion(Method method, const AnalyticFunction& u, int n_lo, int n_hi,
                                    const InversionOptions& o, bool calibrate = true) {
  const auto& d = u.descriptor;
  if (method == Method::trap || method == Method::automatic)
    throw config_error("plan_inversion: needs a deformation method");
  if (n_lo > n_hi) std::swap(n_lo, n_hi);
  if (!d.supports(required_condition(method))) throw domain_error(detail::condition_failure(u, method));
  double m_u = method == Method::log ? std::max(d.growth_m, d.log_growth) : d.growth_m;
  if (!(n_lo > m_u))
    throw domain_error("n = " + std::to_string(n_lo) + " must exceed the growth order " + std::to_string(m_u) +
                       "; the deformation is not justified");
  if (!(o.eps > 0.0 && o.eps < 1.0)) throw config_error("eps must lie in (0,1)");
  if (!(o.p >= 1.0)) throw config_error("p must be >= 1");

  InversionPlan plan;
  plan.method = method;
  plan.p = o.p;
  plan.phi = method == Method::sinh3 ? o.phi : 0.0;
  plan.n_factor = method == Method::sinh2 ? 2 * o.p : (method == Method::sinh3 ? o.p : 1.0);
  plan.n_lo = n_lo;
  plan.n_hi = n_hi;
  const double ne_lo = plan.n_factor * n_lo, ne_hi = plan.n_factor * n_hi;
  // radii of the annulus seen from the integration variable
  const double root = method == Method::sinh2 ? 2 * o.p : (method == Method::sinh3 ? o.p : 1.0);
  const double wa_minus = std::pow(d.a_minus, 1.0 / root), wa_plus = std::pow(d.a_plus, 1.0 / root);

  double M = o.M ? *o.M : default_overflow_budget(o.eps, o.M1_ratio);
  double M1 = o.M1_ratio * M;
  if (!(M > 0.0) || !(M1 > 0.0 && M1 < M + 1e-300)) throw config_error("need M > 0 and 0 < M1 < M");

  double r_minus, r_plus;
  if (o.r_minus && o.r_plus) {
    r_minus = *o.r_minus;
    r_plus = *o.r_plus;
  } else if (method == Method::log) {
    r_plus = d.a_plus > 1.0 ? 1.0 : d.a_plus * std::exp(-1.0 / ne_hi);
    // the log contour cannot span much more than 0.3 with A = 1 + width^{1/4}
    r_minus = std::max(std::exp(-2.0 * (M + M1) / ne_hi), r_plus - 0.3);
  } else {
    r_minus = std::exp(-(M + M1) / ne_hi);
    r_plus = std::exp(-(M - M1) / ne_hi);
  }
  if (!(r_minus > wa_minus && r_plus < wa_plus && r_minus < r_plus))
    throw domain_error("crossing radii must satisfy a_minus < r_minus < r_plus < a_plus");

  // bracket magnitude used for calibration and the tail envelope
  auto bracket_abs = [&](cplx w) {
    auto v = detail::eval_node(u, method, w, plan.p, plan.phi);
    return std::abs(v.plus) + std::abs(v.minus);
  };
  const double growth_power = d.growth_m * root;  // growth in |w|

  if (method == Method::log) {
    LogContour c = fit_log_to_interval(r_minus, r_plus);
    c.validate();
    plan.contour = c;
    plan.rho = log_origin_distance(c);
    plan.ln_H = detail::log_hardy(plan.rho, ne_hi);
    double zeta = o.zeta ? *o.zeta : 2 * pi * c.d_half / (plan.ln_H - std::log(o.eps));
    double C = 2.0 * d.growth_C;
    if (calibrate) {
      double best = 0.0;
      for (int k = 0; k <= 240; ++k) {
        cplx z = log_map(c, -12.0 + 0.1 * k);
        best = std::max(best, bracket_abs(z) / std::pow(1.0 + std::abs(z), m_u));
      }
      C = 1.5 * best;
    }
    plan.C = C;
    auto mag = [&](double y) {
      double az = std::abs(log_map(c, y));
      // polynomial decay in y: the tail integral carries an extra factor ~ |y|
      return C / (2 * pi) * std::max(1.0, std::abs(y)) * std::abs(log_map_derivative(c, y)) *
             std::pow(1.0 + az, m_u) * std::pow(az, -ne_lo - 1);
    };
    int N;
    if (o.N_half) {
      N = *o.N_half;
    } else {
      double Lambda = envelope_lambda(mag, zeta, ne_lo - m_u, o.eps);
      if (o.truncation == Truncation::formula) Lambda *= o.reduce;
      N = static_cast<int>(std::ceil(Lambda / zeta));
    }
    plan.est_truncation = 2.0 * envelope_tail(mag, zeta, ne_lo - m_u, N * zeta);
    bool fold = o.fold == Fold::automatic && u.conjugate_symmetric;
    plan.grid = make_grid([&](double y) { return log_map(c, y); },
                          [&](double y) { return cplx(0.0, log_map_derivative(c, y)); }, zeta, N, fold);
    return plan;
  }

  StripAngles ang{};
  if (o.omega && o.d_half) {
    ang = {*o.omega, *o.d_half};
  } else if (method == Method::sinh1) {
    ang = d.sinh1_positive_omega_only ? small_angle_params(r_plus - r_minus) : sinh1_angles(*d.sinh1_alpha, o.k_d);
  } else if (method == Method::sinh2) {
    ang = sinh2_angles(*d.sinh2_alpha, o.p, o.k_d);
  } else {
    ang = sinh3_angles(*d.sinh3_gamma, o.p, o.k_d);
  }
  if (method == Method::sinh1 && d.sinh1_positive_omega_only && !(ang.omega > 0.0))
    throw domain_error("Condition Z-SINH1 holds only for left-opening contours here (omega > 0)");

  auto fit = fit_sinh_to_interval(r_minus, r_plus, ang.omega, ang.d_half);
  SinhContour c{fit.sigma, fit.b, ang.omega, ang.d_half};
  c.validate();
  // other contours only need the strip to stay off the origin (checked via rho)
  if (method == Method::sinh1 && !admissible_rpm(r_minus, r_plus, ang.omega, ang.d_half))
    throw domain_error("radii not admissible: the strip would come closer to the origin than r_minus");
  plan.contour = c;
  plan.rho = origin_distance(c, true);
  plan.ln_H = detail::log_hardy(plan.rho, ne_hi);
  double zeta = o.zeta ? *o.zeta : 2 * pi * c.d_half / (plan.ln_H - std::log(o.eps));
  if (!(zeta > 0.0)) throw domain_error("degenerate step");

  double C = (detail::two_sided(method) ? 2.0 : 1.0) * d.growth_C;
  if (calibrate) {
    double best = 0.0;
    for (int k = 0; k <= 240; ++k) {
      cplx w = sinh_map(c, -12.0 + 0.1 * k);
      best = std::max(best, bracket_abs(w) / std::pow(1.0 + std::abs(w), growth_power));
    }
    C = 1.5 * best;
  }
  plan.C = C;
  const double pref = detail::prefactor(method, plan.p);
  auto mag = [&](double y) {
    double aw = std::abs(sinh_map(c, y));
    return C * pref * std::abs(sinh_map_derivative(c, y)) * std::pow(1.0 + aw, growth_power) *
           std::pow(aw, -ne_lo - 1);
  };
  int N;
  if (o.N_half) {
    N = *o.N_half;
  } else {
    double Lambda = o.truncation == Truncation::formula
                        ? truncation_lambda(static_cast<int>(std::lround(ne_lo)), growth_power, C, c.b, o.eps,
                                            o.reduce, arc_length_inside_unit_disc(c))
                        : envelope_lambda(mag, zeta, ne_lo - growth_power, o.eps);
    N = static_cast<int>(std::ceil(Lambda / zeta));
  }
  plan.est_truncation = 2.0 * envelope_tail(mag, zeta, ne_lo - growth_power, N * zeta);
  bool fold = o.fold == Fold::automatic && u.conjugate_symmetric && plan.phi == 0.0;
  plan.grid = make_grid([&](double y) { return sinh_map(c, y); }, [&](double y) { return sinh_map_derivative(c, y); },
                        zeta, N, fold);
  return plan;
}

// Evaluates u_n for every n in ns on one shared grid. Node values are computed
// (possibly in parallel) once; each sum is then reduced in index order.
inline std::vector<InversionReport> invert_batch(const AnalyticFunction& u, std::span<const int> ns,
                                                 const InversionPlan& plan, int threads = 1) {
  const auto& g = plan.grid;
  const std::size_t K = g.size();
  std::vector<detail::NodeValues> vals(K);
  std::vector<cplx> logw(K), pre(K);
  const double pref = detail::prefactor(plan.method, plan.p);
  parallel_for(K, threads, [&](std::size_t k) {
    vals[k] = detail::eval_node(u, plan.method, g.nodes[k], plan.p, plan.phi);
    logw[k] = std::log(g.nodes[k]);
    pre[k] = pref * g.weights[k] * cplx(0.0, -1.0);
  });
  const bool two = detail::two_sided(plan.method);
  const double two_pi_d_over_zeta = 2 * pi * plan.d_half() / g.zeta;
  std::vector<InversionReport> out;
  out.reserve(ns.size());
  for (int n : ns) {
    if (!(n > (plan.method == Method::log ? std::max(u.descriptor.growth_m, u.descriptor.log_growth)
                                          : u.descriptor.growth_m)))
      throw domain_error("n must exceed the growth order of the transform");
    const double ne = plan.n_factor * n;
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    compensated_sum<cplx> acc;
    cplx first = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      cplx e = -(ne + 1.0) * logw[k];
      if (e.real() > 700.0) throw numerical_error("overflow of z^{-n-1} at a quadrature node");
      cplx F = two ? vals[k].plus + sgn * vals[k].minus : vals[k].plus;
      cplx t = pre[k] * F * std::exp(e);
      if (g.folded && k == 0)
        first = t;
      else
        acc.add(t);
    }
    cplx v;
    if (g.folded)
      v = g.zeta * (first.real() + 2.0 * acc.value().real());
    else
      v = g.zeta * acc.value();
    if (plan.phi != 0.0) v *= std::polar(1.0, -n * plan.phi);
    double lnH = detail::log_hardy(plan.rho, ne);
    double q = std::exp(-two_pi_d_over_zeta);
    InversionReport r;
    r.value = v;
    r.nodes_used = static_cast<int>(K);
    r.est_discretization_error = std::exp(lnH - two_pi_d_over_zeta) / (1.0 - q);
    r.est_truncation_error = plan.est_truncation;
    r.method = plan.method;
    out.push_back(r);
  }
  return out;
}

inline InversionReport invert_with_plan(const AnalyticFunction& u, int n, const InversionPlan& plan, int threads = 1) {
  int ns[1] = {n};
  return invert_batch(u, ns, plan, threads).front();
}

// Picks sinh2 > sinh1 > sinh3 > log > trap, the first the descriptor allows.
inline Method choose_method(const AnalyticFunction& u, int n) {
  const auto& d = u.descriptor;
  if (d.supports(ConditionKind::sinh2) && n > d.growth_m) return Method::sinh2;
  if (d.supports(ConditionKind::sinh1) && n > d.growth_m) return Method::sinh1;
  if (d.supports(ConditionKind::sinh3) && n > d.growth_m) return Method::sinh3;
  if (d.supports(ConditionKind::log) && n > std::max(d.growth_m, d.log_growth)) return Method::log;
  return Method::trap;
}

inline std::vector<InversionReport> invert_many(const AnalyticFunction& u, std::span<const int> ns, Method m,
                                                const InversionOptions& o = {}) {
  if (ns.empty()) return {};
  auto [lo, hi] = std::minmax_element(ns.begin(), ns.end());
  if (m == Method::automatic) m = choose_method(u, *lo);
  if (m == Method::trap) {
    std::vector<InversionReport> out;
    for (int n : ns) out.push_back(trapezoid_report(u, n, o));
    return out;
  }
  auto plan = plan_inversion(m, u, *lo, *hi, o);
  return invert_batch(u, ns, plan, o.threads);
}

inline InversionReport invert(const AnalyticFunction& u, int n, Method m, const InversionOptions& o = {}) {
  int ns[1] = {n};
  return invert_many(u, ns, m, o).front();
}

// Named entry points mirroring the individual engines.
inline std::pair<SinhContour, QuadratureGrid> sinh1_select_params(const AnalyticFunction& u, int n, double eps,
                                                                  double M, double M1) {
  InversionOptions o;
  o.eps = eps;
  o.M = M;
  o.M1_ratio = M1 / M;
  auto plan = plan_inversion(Method::sinh1, u, n, n, o, false);
  return {std::get<SinhContour>(plan.contour), plan.grid};
}

inline InversionReport sinh1_invert(const AnalyticFunction& u, int n, const InversionPlan& plan) {
  if (plan.method != Method::sinh1) throw config_error("sinh1_invert: plan built for another method");
  return invert_with_plan(u, n, plan);
}
inline InversionReport sinh2_invert(const AnalyticFunction& u, int n, const InversionPlan& plan) {
  if (plan.method != Method::sinh2) throw config_error("sinh2_invert: plan built for another method");
  return invert_with_plan(u, n, plan);
}
inline InversionReport sinh3_invert(const AnalyticFunction& u, int n, const InversionPlan& plan) {
  if (plan.method != Method::sinh3) throw config_error("sinh3_invert: plan built for another method");
  return invert_with_plan(u, n, plan);
}
inline InversionReport log_invert(const AnalyticFunction& u, int n, const InversionPlan& plan) {
  if (plan.method != Method::log) throw config_error("log_invert: plan built for another method");
  return invert_with_plan(u, n, plan);
}

}  // namespace zsinh
