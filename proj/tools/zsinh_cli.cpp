#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "run_config.hpp"

using namespace zsinh;
using namespace zsinh::cli;

namespace {

struct Flags {
  std::string preset, config_file, model, method, eps, n_range, truncation;
  std::string c, nu, lambda, mu, delta, weight, atom, a_plus, a_minus, m_plus, m_minus;
  std::string r_minus, r_plus, omega, d_half, M, zeta, p, phi, reduce, trap_r;
  int n = -1, N_half = -1, N_inner = -1, reps = -1;
  long trap_N = -1;
  bool dump = false, no_oracle = false;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--preset", f.preset, "start from a named preset (see `presets`)");
  sub->add_option("--config", f.config_file, "JSON config file");
  sub->add_flag("--dump-config", f.dump, "print the effective config as JSON and exit");
  sub->add_option("--model", f.model, "kobol | nts | mixture | rational_psd");
  sub->add_option("--c", f.c, "KoBoL intensity c");
  sub->add_option("--nu", f.nu, "order nu");
  sub->add_option("--lambda", f.lambda, "tempering lambda");
  sub->add_option("--mu", f.mu, "drift mu");
  sub->add_option("--delta", f.delta, "NTS delta");
  sub->add_option("--weight", f.weight, "mixture weight of the atom");
  sub->add_option("--atom", f.atom, "mixture atom location");
  sub->add_option("--a-plus", f.a_plus, "rational PSD a+");
  sub->add_option("--a-minus", f.a_minus, "rational PSD a-");
  sub->add_option("--m-plus", f.m_plus, "rational PSD m+");
  sub->add_option("--m-minus", f.m_minus, "rational PSD m-");
  sub->add_option("--n", f.n, "single index n");
  sub->add_option("--n-range", f.n_range, "index range lo:hi");
  sub->add_option("--method", f.method, "trap | sinh1 | sinh2 | sinh3 | log | auto");
  sub->add_option("--eps", f.eps, "error tolerance");
  sub->add_option("--N", f.trap_N, "trapezoid node count");
  sub->add_option("--trap-r", f.trap_r, "trapezoid radius");
  sub->add_option("--r-minus", f.r_minus, "inner crossing radius");
  sub->add_option("--r-plus", f.r_plus, "outer crossing radius");
  sub->add_option("--omega", f.omega, "contour angle omega");
  sub->add_option("--d-half", f.d_half, "strip half-width d");
  sub->add_option("--M", f.M, "overflow budget M");
  sub->add_option("--zeta", f.zeta, "step override");
  sub->add_option("--N-half", f.N_half, "truncation override (nodes j = -N..N)");
  sub->add_option("--N-inner", f.N_inner, "inner grid override for filters");
  sub->add_option("--p", f.p, "power p of the sinh2/sinh3 change of variables");
  sub->add_option("--phi", f.phi, "rotation angle for sinh3");
  sub->add_option("--truncation", f.truncation, "envelope | formula");
  sub->add_option("--reduce", f.reduce, "reduction factor for the formula truncation");
  sub->add_option("--reps", f.reps, "timing repetitions");
  sub->add_flag("--no-oracle", f.no_oracle, "skip the trapezoid oracle");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void set_if(std::optional<Decimal>& dst, const std::string& s) {
  if (!s.empty()) dst = Decimal::parse(s);
}
void set_if(Decimal& dst, const std::string& s) {
  if (!s.empty()) dst = Decimal::parse(s);
}

void apply_model_flags(RunConfig& c, const Flags& f) {
  if (!f.model.empty()) {
    if (f.model == "kobol") c.model = KobolModel{};
    else if (f.model == "nts") c.model = NtsModel{};
    else if (f.model == "mixture") c.model = MixtureModel{};
    else if (f.model == "rational_psd") c.model = RationalPsdModel{};
    else throw config_error("unknown model '" + f.model + "'");
  }
  auto reject = [](const std::string& v, const char* flag, const char* model) {
    if (!v.empty()) throw config_error(std::string(flag) + " does not apply to model " + model);
  };
  std::visit(
      [&](auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, KobolModel>) {
          set_if(m.c, f.c), set_if(m.nu, f.nu), set_if(m.lambda, f.lambda), set_if(m.mu, f.mu);
          reject(f.delta, "--delta", "kobol"), reject(f.weight, "--weight", "kobol"), reject(f.a_plus, "--a-plus", "kobol");
        } else if constexpr (std::is_same_v<T, NtsModel>) {
          set_if(m.delta, f.delta), set_if(m.nu, f.nu), set_if(m.lambda, f.lambda), set_if(m.mu, f.mu);
          reject(f.c, "--c", "nts"), reject(f.weight, "--weight", "nts"), reject(f.a_plus, "--a-plus", "nts");
        } else if constexpr (std::is_same_v<T, MixtureModel>) {
          set_if(m.weight, f.weight), set_if(m.atom, f.atom);
          set_if(m.base.c, f.c), set_if(m.base.nu, f.nu), set_if(m.base.lambda, f.lambda), set_if(m.base.mu, f.mu);
          reject(f.delta, "--delta", "mixture"), reject(f.a_plus, "--a-plus", "mixture");
        } else {
          set_if(m.a_plus, f.a_plus), set_if(m.a_minus, f.a_minus), set_if(m.m_plus, f.m_plus), set_if(m.m_minus, f.m_minus);
          reject(f.c, "--c", "rational_psd"), reject(f.nu, "--nu", "rational_psd");
        }
      },
      c.model);
}

RunConfig effective_config(const Flags& f, Task task) {
  RunConfig c;
  if (!f.preset.empty()) {
    auto it = presets().find(f.preset);
    if (it == presets().end()) throw config_error("unknown preset '" + f.preset + "'");
    c = it->second;
  }
  if (!f.config_file.empty()) c = parse_config(read_file(f.config_file));
  c.task = task;
  apply_model_flags(c, f);
  if (f.n >= 0) c.n_lo = c.n_hi = f.n;
  if (!f.n_range.empty()) {
    auto pos = f.n_range.find(':');
    if (pos == std::string::npos) throw config_error("--n-range expects lo:hi");
    try {
      c.n_lo = std::stoi(f.n_range.substr(0, pos));
      c.n_hi = std::stoi(f.n_range.substr(pos + 1));
    } catch (const std::exception&) {
      throw config_error("--n-range expects lo:hi");
    }
    if (c.n_lo > c.n_hi) throw config_error("--n-range needs lo <= hi");
  }
  if (!f.method.empty()) {
    auto m = parse_method(f.method);
    if (!m) throw config_error("unknown method '" + f.method + "'");
    c.method = *m;
  }
  set_if(c.eps, f.eps);
  auto& o = c.overrides;
  set_if(o.r_minus, f.r_minus), set_if(o.r_plus, f.r_plus), set_if(o.omega, f.omega), set_if(o.d_half, f.d_half);
  set_if(o.M, f.M), set_if(o.zeta, f.zeta), set_if(o.p, f.p), set_if(o.phi, f.phi), set_if(o.reduce, f.reduce);
  set_if(o.trap_r, f.trap_r);
  if (f.N_half >= 0) o.N_half = f.N_half;
  if (f.N_inner >= 0) o.N_inner = f.N_inner;
  if (f.trap_N >= 0) o.trap_N = f.trap_N;
  if (!f.truncation.empty()) o.truncation = f.truncation;
  if (f.reps > 0) c.repetitions = f.reps;
  if (f.no_oracle) c.oracle = false;
  if (c.n_lo < 0) throw config_error("n must be non-negative");
  return c;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string describe(const ModelSpec& m) { return model_to_json(m).dump(); }

template <class F>
double median_us(int reps, F&& fn) {
  std::vector<double> t;
  for (int r = 0; r < std::max(reps, 1); ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    t.push_back(std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

std::vector<int> index_list(const RunConfig& c) {
  std::vector<int> ns;
  for (int n = c.n_lo; n <= c.n_hi; ++n) ns.push_back(n);
  return ns;
}

std::vector<double> oracle_values(const AnalyticFunction& u, const std::vector<int>& ns) {
  std::vector<double> out;
  for (int n : ns) out.push_back(trapezoid_oracle(u, n).value);
  return out;
}

int cmd_moment(const RunConfig& c) {
  auto u = make_function(c.model);
  auto opts = inversion_options(c);
  auto ns = index_list(c);
  std::vector<InversionReport> reps;
  double t = median_us(c.repetitions, [&] { reps = invert_many(u, ns, c.method, opts); });
  std::vector<double> ref;
  if (c.oracle) ref = oracle_values(u, ns);
  std::printf("# model=%s eps=%s\n", describe(c.model).c_str(), c.eps.text.c_str());
  std::printf("n,value,abs_err_est,rel_err_vs_oracle,nodes,method\n");
  double worst = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto& r = reps[i];
    std::string rel = "nan";
    if (c.oracle) {
      double e = std::abs(r.real() - ref[i]) / std::abs(ref[i]);
      worst = std::max(worst, e);
      rel = fmt(e);
    }
    std::printf("%d,%s,%s,%s,%d,%s\n", ns[i], fmt(r.real()).c_str(),
                fmt(r.est_discretization_error + r.est_truncation_error).c_str(), rel.c_str(), r.nodes_used,
                method_name(r.method));
  }
  if (c.oracle) std::printf("# max_rel_err_vs_oracle=%s\n", fmt(worst).c_str());
  std::printf("# time_us_per_moment=%.3f\n", t / ns.size());
  return 0;
}

int cmd_filter(const RunConfig& c) {
  if (c.method != Method::sinh3 && c.method != Method::automatic)
    throw config_error("filters are computed with the sinh3 deformation; method must be sinh3 or auto");
  auto r = make_psd(c.model);
  auto opts = filter_options(c);
  if (!(c.n_lo > r.psd.m()))
    throw config_error("n_lo = " + std::to_string(c.n_lo) + " must exceed m_plus + m_minus = " +
                       std::to_string(r.psd.m()));
  Factorization f;
  ImpulseResponse h;
  double t = median_us(c.repetitions, [&] {
    f = factorize(r.psd, c.n_lo, c.n_hi, opts);
    h = impulse_response(f, c.n_lo, c.n_hi, opts.threads);
  });
  std::vector<double> ref;
  if (c.oracle) ref = binomial_series_h(r.a_plus, r.a_minus, r.m_plus, r.m_minus, c.n_hi);
  std::printf("# model=%s eps=%s\n", describe(c.model).c_str(), c.eps.text.c_str());
  std::printf("n,value,abs_err_est,rel_err_vs_oracle,nodes,method\n");
  double worst = 0.0;
  const double rel_est = opts.eps + f.est_truncation_inner + f.est_truncation_outer;
  for (int n = c.n_lo; n <= c.n_hi; ++n) {
    double v = h.h[n - c.n_lo];
    std::string rel = "nan";
    if (c.oracle) {
      double e = std::abs(v - ref[n]) / std::abs(ref[n]);
      worst = std::max(worst, e);
      rel = fmt(e);
    }
    std::printf("%d,%s,%s,%s,%d,sinh3\n", n, fmt(v).c_str(), fmt(rel_est * std::abs(v)).c_str(), rel.c_str(),
                h.outer_nodes);
  }
  std::printf("# outer_nodes=%d inner_nodes=%d d=%s max_imag_over_max_h=%s\n", h.outer_nodes, h.inner_nodes,
              fmt(f.d).c_str(), fmt(h.max_imag_ratio).c_str());
  if (c.oracle) std::printf("# max_rel_err_vs_oracle=%s\n", fmt(worst).c_str());
  std::printf("# time_ms=%.3f\n", t / 1000.0);
  return 0;
}

int cmd_bench(const RunConfig& c) {
  auto u = make_function(c.model);
  auto ns = index_list(c);
  auto ref = oracle_values(u, ns);
  std::vector<Method> methods = c.bench_methods;
  if (methods.empty()) methods = {Method::trap, c.method};
  std::printf("# model=%s eps=%s n=%d..%d\n", describe(c.model).c_str(), c.eps.text.c_str(), c.n_lo, c.n_hi);
  std::printf("method,nodes,max_abs_err_vs_oracle,median_time_us\n");
  for (Method m : methods) {
    auto opts = inversion_options(c);
    std::vector<InversionReport> reps;
    double t = median_us(c.repetitions, [&] { reps = invert_many(u, ns, m, opts); });
    double err = 0.0;
    int nodes = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      err = std::max(err, std::abs(reps[i].real() - ref[i]));
      nodes = std::max(nodes, reps[i].nodes_used);
    }
    std::printf("%s,%d,%s,%.3f\n", method_name(reps.front().method), nodes, fmt(err).c_str(), t);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coefficients of analytic functions and causal filters by sinh-deformed contours"};
  app.require_subcommand(1);
  Flags f;
  auto* moment = app.add_subcommand("moment", "Laurent/Taylor coefficients u_n of a model transform");
  auto* filter = app.add_subcommand("filter", "impulse response of the causal factor of a PSD");
  auto* bench = app.add_subcommand("bench", "node counts, errors and timings per method");
  auto* list = app.add_subcommand("presets", "list preset names");
  for (auto* s : {moment, filter, bench}) add_flags(s, f);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    if (list->parsed()) {
      for (const auto& [name, cfg] : presets()) std::printf("%s\t%s\n", name.c_str(), task_name(cfg.task));
      return 0;
    }
    Task task = moment->parsed() ? Task::moment : filter->parsed() ? Task::filter : Task::bench;
    RunConfig c = effective_config(f, task);
    if (f.dump) {
      std::printf("%s\n", serialize_config(c).c_str());
      return 0;
    }
    switch (task) {
      case Task::moment: return cmd_moment(c);
      case Task::filter: return cmd_filter(c);
      case Task::bench: return cmd_bench(c);
    }
  } catch (const config_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const numerical_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
  return 0;
}
