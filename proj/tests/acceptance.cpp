// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.
#include <chrono>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "reference_values.hpp"
#include "zsinh/zsinh.hpp"

using namespace zsinh;

namespace {

int failures = 0;

void report(int k, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", k, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char b[128];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

template <class F>
double best_us(int reps, F&& fn) {
  double best = INFINITY;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

InversionOptions published_radii() {
  InversionOptions o;
  o.r_minus = 0.98;
  o.r_plus = 1.0;
  return o;
}

double scale_tol(double v) { return 1e-15 * std::max(1.0, std::abs(v)); }

struct Check {
  bool ok = true;
  std::string detail;
  void expect(bool c, const std::string& what) {
    if (!c) {
      ok = false;
      detail += " [" + what + "]";
    }
  }
  void note(const std::string& s) { detail += s; }
};

// --- 1 ---------------------------------------------------------------------

void criterion1() {
  Check c;
  auto k = kobol_mgf(0.1, 0.5, 1.01);
  struct Case {
    int n;
    double published;
    InversionOptions o;
  };
  for (const Case& cs : {Case{100, refs::published::kobol_mu100, published_radii()}, Case{500, refs::published::kobol_mu500, {}}}) {
    InversionReport r;
    double us = best_us(20, [&] { r = invert(k, cs.n, Method::sinh1, cs.o); });
    double oracle = trapezoid_oracle(k, cs.n).value;
    c.note(" n=" + std::to_string(cs.n) + ": nodes=" + std::to_string(r.nodes_used) + fmt(" |d_oracle|=%.1e", std::abs(r.real() - oracle)) +
           fmt(" |d_published|=%.1e", std::abs(r.real() - cs.published)) + fmt(" t=%.1fus", us));
    c.expect(r.nodes_used <= 40, "nodes > 40");
    c.expect(std::abs(r.real() - oracle) <= scale_tol(r.real()), "oracle");
    c.expect(std::abs(r.real() - cs.published) <= scale_tol(r.real()), "published value");
    c.expect(us < 1000.0, "time");
  }
  report(1, c.ok, c.detail);
}

// --- 2 ---------------------------------------------------------------------

void criterion2() {
  Check c;
  auto d = kobol_mgf(0.1, 0.5, 1.01, 0.05);
  double oracle = trapezoid_oracle(d, 100).value;
  for (auto [m, cap] : {std::pair{Method::sinh1, 330}, std::pair{Method::sinh2, 60}}) {
    auto r = invert(d, 100, m, published_radii());
    c.note(std::string(" ") + method_name(m) + ": nodes=" + std::to_string(r.nodes_used) +
           fmt(" |d_oracle|=%.1e", std::abs(r.real() - oracle)));
    c.expect(r.nodes_used <= cap, "node cap");
    c.expect(std::abs(r.real() - oracle) <= 1e-15, "oracle");
    c.expect(std::abs(r.real() - refs::published::drift_mu100) <= 1e-15, "published value");
  }
  report(2, c.ok, c.detail);
}

// --- 3 ---------------------------------------------------------------------

void criterion3() {
  Check c;
  auto mix = atom_mixture(0.3, 2.0, kobol_mgf(0.1, 0.5, 1.01));
  struct Row {
    Method m;
    double target;
    InversionOptions o;
  };
  InversionOptions trap;
  trap.trap_N = 1101;
  for (const Row& row : {Row{Method::trap, 1101, trap}, Row{Method::sinh1, 306, published_radii()},
                         Row{Method::sinh2, 56, published_radii()}}) {
    auto r = invert(mix, 100, row.m, row.o);
    c.note(std::string(" ") + method_name(row.m) + ": nodes=" + std::to_string(r.nodes_used) +
           fmt(" |d_published|=%.1e", std::abs(r.real() - refs::published::mixture_mu100)));
    c.expect(std::abs(r.nodes_used - row.target) <= 0.2 * row.target, std::string(method_name(row.m)) + " nodes");
    c.expect(std::abs(r.real() - refs::published::mixture_mu100) <= 1e-15, std::string(method_name(row.m)) + " value");
  }
  report(3, c.ok, c.detail);
}

// --- 4, 5 --------------------------------------------------------------------

void single_case(int k, const AnalyticFunction& u, Method m, const InversionOptions& o, int cap, double published,
                 double published_tol = 1e-15) {
  Check c;
  auto r = invert(u, 100, m, o);
  double oracle = trapezoid_oracle(u, 100).value;
  c.note(std::string(" ") + method_name(m) + ": nodes=" + std::to_string(r.nodes_used) +
         fmt(" value=%.15e", r.real()) + fmt(" |d_oracle|=%.1e", std::abs(r.real() - oracle)) +
         fmt(" |d_published|=%.1e", std::abs(r.real() - published)));
  c.expect(r.nodes_used <= cap, "node cap");
  c.expect(std::abs(r.real() - oracle) <= 1e-15, "oracle");
  c.expect(std::abs(r.real() - published) <= published_tol, "published value");
  report(k, c.ok, c.detail);
}

// --- 6, 7 --------------------------------------------------------------------

double filter_error(const RationalPSD& r, const WHFOptions& o, double* ms, ImpulseResponse* out = nullptr) {
  ImpulseResponse ir;
  double us = best_us(5, [&] { ir = impulse_response(r.psd, 100, 400, o); });
  if (ms) *ms = us / 1000.0;
  auto ref = binomial_series_h(r.a_plus, r.a_minus, r.m_plus, r.m_minus, 400);
  double e = 0.0;
  for (int n = 100; n <= 400; ++n) e = std::max(e, std::abs(ir.h[n - 100] - ref[n]) / std::abs(ref[n]));
  if (out) *out = ir;
  return e;
}

void criterion6() {
  Check c;
  auto r = rational_psd(1.0001, 1.00015, 3, -1);
  double ms = 0.0;
  ImpulseResponse ir;
  double e = filter_error(r, {}, &ms, &ir);
  c.note(" default grids (" + std::to_string(ir.outer_nodes) + "," + std::to_string(ir.inner_nodes) + ")" +
         fmt(": max rel %.1e", e) + fmt(" t=%.2fms", ms));
  c.expect(e <= 5e-14, "default accuracy");
  c.expect(ms < 100.0, "time");
  WHFOptions o;
  o.N_outer = 172;  // the published N, N^1 bound j in -N..N
  o.N_inner = 237;
  e = filter_error(r, o, &ms, &ir);
  c.note("; published grids (" + std::to_string(ir.outer_nodes) + "," + std::to_string(ir.inner_nodes) + ")" +
         fmt(": max rel %.1e", e) + fmt(" t=%.2fms", ms));
  c.expect(e <= 5e-14, "published-grid accuracy");
  c.expect(ms < 100.0, "time");
  report(6, c.ok, c.detail);
}

void criterion7() {
  Check c;
  double ms = 0.0;
  ImpulseResponse ir;
  double e = filter_error(rational_psd(1.0001, 1.00015, -1, -1), {}, &ms, &ir);
  c.note(fmt(" poles: max rel %.1e", e));
  c.expect(e <= 1e-10, "poles");
  auto narrow = rational_psd(1.00001, 1.000015, -1, -1);
  e = filter_error(narrow, {}, &ms, &ir);
  c.note("; narrow default (" + std::to_string(ir.outer_nodes) + "," + std::to_string(ir.inner_nodes) + ")" +
         fmt(": max rel %.1e", e));
  c.expect(e <= 5e-9, "narrow default");
  WHFOptions o;
  o.N_outer = 575;
  o.N_inner = 626;
  e = filter_error(narrow, o, &ms, &ir);
  c.note("; narrow published (" + std::to_string(ir.outer_nodes) + "," + std::to_string(ir.inner_nodes) + ")" +
         fmt(": max rel %.1e", e));
  c.expect(e <= 5e-9, "narrow published grids");
  report(7, c.ok, c.detail);
}

// --- 8 ---------------------------------------------------------------------

void criterion8() {
  Check c;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  // factorization identity, reciprocal symmetry, A_- -> 1
  double ident = 0.0, sym = 0.0;
  bool decay = true;
  for (auto [ap, am, mp, mm] : {std::tuple{1.0001, 1.00015, 3.0, -1.0}, std::tuple{1.0001, 1.00015, -1.0, -1.0},
                                std::tuple{1.00001, 1.000015, -1.0, -1.0}}) {
    auto r = rational_psd(ap, am, mp, mm);
    auto f = factorize(r.psd, 100, 400);
    for (int i = 0; i < 200; ++i) {
      cplx z = std::polar(i % 2 ? std::exp(3.0 * (U(rng) - 0.5)) : 1.0, 2 * pi * U(rng));
      const cplx w = 1.0 / z;  // 1/w reproduces z exactly
      z = 1.0 / w;
      auto [hp, hm] = H_factors(f, z);
      ident = std::max(ident, std::abs(hp * hm / r.psd(z) - 1.0));
      sym = std::max(sym, std::abs(H_minus(f, w) - hp) / std::abs(hp));
    }
    const double dp = 0.9 * r.psd.delta;
    double first = std::abs(A_minus(f, 1e2) - 1.0) * std::pow(1e2, dp);
    for (double R : {1e3, 1e4, 1e5})
      decay = decay && std::abs(A_minus(f, R) - 1.0) * std::pow(R, dp) <= 2.0 * first + 1e-11;
  }
  c.note(fmt(" identity=%.1e", ident) + fmt(" symmetry=%.1e", sym) + (decay ? " A->1 ok" : " A->1 bad"));
  c.expect(ident <= 1e-12, "identity");
  c.expect(sym <= 1e-12, "symmetry");
  c.expect(decay, "A decay");

  // map derivatives against central differences
  double dmax = 0.0;
  SinhContour s{0.9, 0.3, -0.35, 0.2};
  LogContour l{0.97, 1.4, 0.1};
  const double h = 1e-6;
  for (int i = 0; i < 200; ++i) {
    double y = 10.0 * U(rng) - 5.0;
    cplx fd = (sinh_map(s, y + h) - sinh_map(s, y - h)) / (2 * h);
    dmax = std::max(dmax, std::abs(sinh_map_derivative(s, y) - fd) / std::abs(fd));
    double fl = (log_map(l, y + h).imag() - log_map(l, y - h).imag()) / (2 * h);
    dmax = std::max(dmax, std::abs(log_map_derivative(l, y) / fl - 1.0));
  }
  c.note(fmt(" derivative=%.1e", dmax));
  c.expect(dmax <= 1e-8, "derivatives");

  // monomial exactness
  double mono = 0.0;
  for (int k = 0; k <= 12; ++k) {
    auto u = refs::entire([k](cplx z) { return detail::ipow(z, k); });
    for (int n = 0; n <= 12; ++n)
      mono = std::max(mono, std::abs(trapezoid_invert(u, n, 1.0, std::abs(k - n) + 1) - (k == n ? 1.0 : 0.0)));
  }
  c.note(fmt(" monomial=%.1e", mono));
  // exact up to rounding: at most 25 unit-modulus terms, z^k carries k ulps
  c.expect(mono <= 32 * DBL_EPSILON, "monomials");

  // deformation invariance
  auto kb = kobol_mgf(0.1, 0.5, 1.01);
  InversionOptions a = published_radii(), b;
  b.r_minus = 0.95;
  b.r_plus = 0.995;
  auto ang = sinh1_angles(pi);
  InversionOptions narrow = published_radii();
  narrow.omega = ang.omega;
  narrow.d_half = 0.8 * ang.d_half;
  double ref = invert(kb, 100, Method::sinh1, a).real();
  double def = std::max(std::abs(invert(kb, 100, Method::sinh1, b).real() - ref),
                        std::abs(invert(kb, 100, Method::sinh1, narrow).real() - ref));
  c.note(fmt(" deformation=%.1e", def));
  c.expect(def <= 1e-14, "deformation");

  // cross-method agreement on every shipped model
  double cross = 0.0;
  std::vector<AnalyticFunction> models = {kb,
                                          kobol_mgf(0.1, 0.5, 1.01, 0.05),
                                          kobol_mgf(0.1, 1.5, 1.01),
                                          nts_mgf(0.1, 0.8, 1.05),
                                          nts_mgf(0.1, 0.5, 1.01, 0.05),
                                          atom_mixture(0.3, 2.0, kb)};
  for (const auto& u : models) {
    for (int n : {10, 50, 100}) {
      double o = trapezoid_oracle(u, n).value;
      for (Method m : {Method::sinh1, Method::sinh2, Method::sinh3, Method::log}) {
        if (!u.descriptor.supports(required_condition(m))) continue;
        cross = std::max(cross, std::abs(invert(u, n, m).real() - o) / std::max(1.0, std::abs(o)));
      }
    }
  }
  c.note(fmt(" cross-method=%.1e", cross));
  c.expect(cross <= 1e-13, "cross-method");
  report(8, c.ok, c.detail);
}

// --- 9 ---------------------------------------------------------------------

// smallest N whose trapezoid error is within eps; the error is monotone in N
// up to rounding, so bisection is enough
long minimal_trap_N(const AnalyticFunction& u, int n, double r, double ref, double eps, long hi) {
  auto ok = [&](long N) { return std::abs(trapezoid_invert(u, n, r, N).real() - ref) <= eps; };
  while (!ok(hi)) hi *= 2;
  long lo = 1;
  while (hi - lo > 1) {
    long mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

void criterion9() {
  Check c;
  const double eps = 1e-12, M = 5.0;
  auto u = kobol_mgf(1.0, 0.5, 1.0001);
  InversionOptions so;
  so.eps = eps;
  std::vector<long> trap, sinh;
  for (int n : {100, 500, 2000}) {
    double ref = trapezoid_oracle(u, n).value;
    long appr = trapezoid_node_estimate(eps, n, M);
    long Nt = minimal_trap_N(u, n, std::exp(-M / n), ref, eps, 4 * appr);
    auto rs = invert(u, n, Method::sinh1, so);
    trap.push_back(Nt);
    sinh.push_back(rs.nodes_used);
    double ratio = static_cast<double>(Nt) / appr;
    c.note(" n=" + std::to_string(n) + ": trap=" + std::to_string(Nt) + " appr=" + std::to_string(appr) +
           " sinh1=" + std::to_string(rs.nodes_used) + fmt(" |sinh1-ref|=%.1e", std::abs(rs.real() - ref)));
    c.expect(ratio <= 3.0 && ratio >= 1.0 / 3.0, "trap vs appr at n=" + std::to_string(n));
    c.expect(std::abs(rs.real() - ref) <= eps, "sinh1 accuracy at n=" + std::to_string(n));
  }
  double ratio500 = static_cast<double>(trap[1]) / sinh[1];
  c.note(fmt(" ratio@500=%.1f", ratio500));
  c.expect(ratio500 >= 10.0, "ratio at n=500");
  // linear for trap; sinh1 bounded by the log ratio with slack
  c.expect(sinh[2] <= 2.0 * sinh[0] * std::log(2000.0) / std::log(100.0), "sinh1 growth");
  report(9, c.ok, c.detail);
}

}  // namespace

int main() {
  auto guard = [](int k, void (*f)()) {
    try {
      f();
    } catch (const std::exception& e) {
      report(k, false, std::string(" exception: ") + e.what());
    }
  };
  guard(1, criterion1);
  guard(2, criterion2);
  guard(3, criterion3);
  guard(4, [] {
    single_case(4, kobol_mgf(0.1, 1.5, 1.01), Method::sinh3, published_radii(), 80, refs::published::kobol15_mu100);
  });
  // the printed value is itself 1.15e-15 from the 50-digit reference, so it is
  // compared at 2e-15; the oracle comparison keeps 1e-15
  guard(5, [] {
    single_case(5, nts_mgf(0.1, 0.5, 1.01, 0.05), Method::log, {}, 110, refs::published::nts_drift_mu100, 2e-15);
  });
  guard(6, criterion6);
  guard(7, criterion7);
  guard(8, criterion8);
  guard(9, criterion9);
  std::printf("%s\n", failures ? "acceptance: FAIL" : "acceptance: PASS");
  return failures ? 1 : 0;
}
