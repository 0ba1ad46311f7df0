#pragma once

#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "zsinh/zsinh.hpp"

namespace zsinh::cli {

// A parameter kept as the text it was written in; configs never lose digits
// through a binary round trip.
struct Decimal {
  std::string text;
  double value = 0.0;

  static Decimal parse(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
      throw config_error("not a decimal number: '" + s + "'");
    return {s, v};
  }
  bool operator==(const Decimal& o) const { return text == o.text; }
};

inline Decimal dec(const char* s) { return Decimal::parse(s); }

struct KobolModel {
  Decimal c = dec("0.1"), nu = dec("0.5"), lambda = dec("1.01"), mu = dec("0");
  bool operator==(const KobolModel&) const = default;
};
struct NtsModel {
  Decimal delta = dec("0.1"), nu = dec("0.5"), lambda = dec("1.01"), mu = dec("0");
  bool operator==(const NtsModel&) const = default;
};
struct MixtureModel {
  Decimal weight = dec("0.3"), atom = dec("2");
  KobolModel base;
  bool operator==(const MixtureModel&) const = default;
};
struct RationalPsdModel {
  Decimal a_plus = dec("1.0001"), a_minus = dec("1.00015"), m_plus = dec("3"), m_minus = dec("-1");
  bool operator==(const RationalPsdModel&) const = default;
};
using ModelSpec = std::variant<KobolModel, NtsModel, MixtureModel, RationalPsdModel>;

enum class Task { moment, filter, bench };

inline const char* task_name(Task t) {
  switch (t) {
    case Task::moment: return "moment";
    case Task::filter: return "filter";
    case Task::bench: return "bench";
  }
  return "?";
}

struct Overrides {
  std::optional<Decimal> r_minus, r_plus, omega, d_half, M, zeta, p, phi, reduce, trap_r;
  std::optional<int> N_half, N_inner;
  std::optional<long> trap_N;
  std::optional<std::string> truncation;
  bool operator==(const Overrides&) const = default;
};

struct RunConfig {
  int schema_version = 1;
  Task task = Task::moment;
  ModelSpec model = KobolModel{};
  int n_lo = 100, n_hi = 100;
  Method method = Method::automatic;
  std::vector<Method> bench_methods;
  Decimal eps = dec("1e-15");
  Overrides overrides;
  int repetitions = 5;
  bool oracle = true;
  bool operator==(const RunConfig&) const = default;
};

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;

namespace detail {

inline Decimal get_dec(const json& j, const char* key, const Decimal& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) return Decimal::parse(v.get<std::string>());
  if (v.is_number()) return Decimal::parse(v.dump());
  throw config_error(std::string("field '") + key + "' must be a decimal string");
}

inline std::optional<Decimal> get_opt_dec(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return get_dec(j, key, {});
}

inline Method get_method(const std::string& s) {
  auto m = parse_method(s);
  if (!m) throw config_error("unknown method '" + s + "' (trap, sinh1, sinh2, sinh3, log, auto)");
  return *m;
}

inline KobolModel kobol_from(const json& j) {
  KobolModel m;
  m.c = get_dec(j, "c", m.c);
  m.nu = get_dec(j, "nu", m.nu);
  m.lambda = get_dec(j, "lambda", m.lambda);
  m.mu = get_dec(j, "mu", m.mu);
  return m;
}

inline json kobol_to(const KobolModel& m) {
  return {{"type", "kobol"}, {"c", m.c.text}, {"nu", m.nu.text}, {"lambda", m.lambda.text}, {"mu", m.mu.text}};
}

}  // namespace detail

inline ModelSpec model_from_json(const json& j) {
  std::string type = j.value("type", "");
  if (type == "kobol") return detail::kobol_from(j);
  if (type == "nts") {
    NtsModel m;
    m.delta = detail::get_dec(j, "delta", m.delta);
    m.nu = detail::get_dec(j, "nu", m.nu);
    m.lambda = detail::get_dec(j, "lambda", m.lambda);
    m.mu = detail::get_dec(j, "mu", m.mu);
    return m;
  }
  if (type == "mixture") {
    MixtureModel m;
    m.weight = detail::get_dec(j, "weight", m.weight);
    m.atom = detail::get_dec(j, "atom", m.atom);
    if (j.contains("base")) m.base = detail::kobol_from(j.at("base"));
    return m;
  }
  if (type == "rational_psd") {
    RationalPsdModel m;
    m.a_plus = detail::get_dec(j, "a_plus", m.a_plus);
    m.a_minus = detail::get_dec(j, "a_minus", m.a_minus);
    m.m_plus = detail::get_dec(j, "m_plus", m.m_plus);
    m.m_minus = detail::get_dec(j, "m_minus", m.m_minus);
    return m;
  }
  throw config_error("unknown model type '" + type + "' (kobol, nts, mixture, rational_psd)");
}

inline json model_to_json(const ModelSpec& spec) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, KobolModel>) {
          return detail::kobol_to(m);
        } else if constexpr (std::is_same_v<T, NtsModel>) {
          return {{"type", "nts"}, {"delta", m.delta.text}, {"nu", m.nu.text}, {"lambda", m.lambda.text}, {"mu", m.mu.text}};
        } else if constexpr (std::is_same_v<T, MixtureModel>) {
          return {{"type", "mixture"}, {"weight", m.weight.text}, {"atom", m.atom.text}, {"base", detail::kobol_to(m.base)}};
        } else {
          return {{"type", "rational_psd"}, {"a_plus", m.a_plus.text}, {"a_minus", m.a_minus.text},
                  {"m_plus", m.m_plus.text}, {"m_minus", m.m_minus.text}};
        }
      },
      spec);
}

inline RunConfig config_from_json(const json& j) {
  RunConfig c;
  if (!j.is_object()) throw config_error("config must be a JSON object");
  c.schema_version = j.value("schema_version", 0);
  if (c.schema_version != 1) throw config_error("unsupported schema_version " + std::to_string(c.schema_version));
  std::string task = j.value("task", "moment");
  if (task == "moment") c.task = Task::moment;
  else if (task == "filter") c.task = Task::filter;
  else if (task == "bench") c.task = Task::bench;
  else throw config_error("unknown task '" + task + "'");
  if (!j.contains("model")) throw config_error("config has no model");
  c.model = model_from_json(j.at("model"));
  if (j.contains("n")) {
    c.n_lo = c.n_hi = j.at("n").get<int>();
  } else if (j.contains("n_range")) {
    auto r = j.at("n_range");
    if (!r.is_array() || r.size() != 2) throw config_error("n_range must be [n_lo, n_hi]");
    c.n_lo = r[0].get<int>();
    c.n_hi = r[1].get<int>();
  }
  if (c.n_lo > c.n_hi) throw config_error("n_range must satisfy n_lo <= n_hi");
  c.method = detail::get_method(j.value("method", "auto"));
  if (j.contains("bench_methods"))
    for (const auto& m : j.at("bench_methods")) c.bench_methods.push_back(detail::get_method(m.get<std::string>()));
  c.eps = detail::get_dec(j, "eps", c.eps);
  c.repetitions = j.value("repetitions", 5);
  c.oracle = j.value("oracle", true);
  if (j.contains("overrides")) {
    const auto& o = j.at("overrides");
    auto& v = c.overrides;
    v.r_minus = detail::get_opt_dec(o, "r_minus");
    v.r_plus = detail::get_opt_dec(o, "r_plus");
    v.omega = detail::get_opt_dec(o, "omega");
    v.d_half = detail::get_opt_dec(o, "d_half");
    v.M = detail::get_opt_dec(o, "M");
    v.zeta = detail::get_opt_dec(o, "zeta");
    v.p = detail::get_opt_dec(o, "p");
    v.phi = detail::get_opt_dec(o, "phi");
    v.reduce = detail::get_opt_dec(o, "reduce");
    v.trap_r = detail::get_opt_dec(o, "trap_r");
    if (o.contains("N_half")) v.N_half = o.at("N_half").get<int>();
    if (o.contains("N_inner")) v.N_inner = o.at("N_inner").get<int>();
    if (o.contains("trap_N")) v.trap_N = o.at("trap_N").get<long>();
    if (o.contains("truncation")) v.truncation = o.at("truncation").get<std::string>();
  }
  return c;
}

inline json config_to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["task"] = task_name(c.task);
  j["model"] = model_to_json(c.model);
  if (c.n_lo == c.n_hi)
    j["n"] = c.n_lo;
  else
    j["n_range"] = {c.n_lo, c.n_hi};
  j["method"] = method_name(c.method);
  if (!c.bench_methods.empty()) {
    json arr = json::array();
    for (Method m : c.bench_methods) arr.push_back(method_name(m));
    j["bench_methods"] = arr;
  }
  j["eps"] = c.eps.text;
  j["repetitions"] = c.repetitions;
  j["oracle"] = c.oracle;
  json o = json::object();
  const auto& v = c.overrides;
  auto put = [&](const char* k, const std::optional<Decimal>& d) {
    if (d) o[k] = d->text;
  };
  put("r_minus", v.r_minus);
  put("r_plus", v.r_plus);
  put("omega", v.omega);
  put("d_half", v.d_half);
  put("M", v.M);
  put("zeta", v.zeta);
  put("p", v.p);
  put("phi", v.phi);
  put("reduce", v.reduce);
  put("trap_r", v.trap_r);
  if (v.N_half) o["N_half"] = *v.N_half;
  if (v.N_inner) o["N_inner"] = *v.N_inner;
  if (v.trap_N) o["trap_N"] = *v.trap_N;
  if (v.truncation) o["truncation"] = *v.truncation;
  if (!o.empty()) j["overrides"] = o;
  return j;
}

inline RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw config_error(std::string("invalid JSON: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw config_error(std::string("invalid config: ") + e.what());
  }
}

inline std::string serialize_config(const RunConfig& c) { return config_to_json(c).dump(2); }

// ---------------------------------------------------------------------------
// Model construction

inline AnalyticFunction make_function(const ModelSpec& spec) {
  return std::visit(
      [](const auto& m) -> AnalyticFunction {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, KobolModel>) {
          return kobol_mgf(m.c.value, m.nu.value, m.lambda.value, m.mu.value);
        } else if constexpr (std::is_same_v<T, NtsModel>) {
          return nts_mgf(m.delta.value, m.nu.value, m.lambda.value, m.mu.value);
        } else if constexpr (std::is_same_v<T, MixtureModel>) {
          auto base = kobol_mgf(m.base.c.value, m.base.nu.value, m.base.lambda.value, m.base.mu.value);
          return atom_mixture(m.weight.value, m.atom.value, base);
        } else {
          throw config_error("rational_psd is a filter model; use the filter task");
        }
      },
      spec);
}

inline RationalPSD make_psd(const ModelSpec& spec) {
  const auto* m = std::get_if<RationalPsdModel>(&spec);
  if (!m) throw config_error("the filter task needs a rational_psd model");
  return rational_psd(m->a_plus.value, m->a_minus.value, m->m_plus.value, m->m_minus.value);
}

inline InversionOptions inversion_options(const RunConfig& c) {
  InversionOptions o;
  o.eps = c.eps.value;
  const auto& v = c.overrides;
  if (v.r_minus) o.r_minus = v.r_minus->value;
  if (v.r_plus) o.r_plus = v.r_plus->value;
  if (v.omega) o.omega = v.omega->value;
  if (v.d_half) o.d_half = v.d_half->value;
  if (v.M) o.M = v.M->value;
  if (v.zeta) o.zeta = v.zeta->value;
  if (v.p) o.p = v.p->value;
  if (v.phi) o.phi = v.phi->value;
  if (v.reduce) o.reduce = v.reduce->value;
  if (v.N_half) o.N_half = *v.N_half;
  if (v.trap_N) o.trap_N = *v.trap_N;
  if (v.trap_r) o.trap_r = v.trap_r->value;
  if (v.truncation) {
    if (*v.truncation == "envelope") o.truncation = Truncation::envelope;
    else if (*v.truncation == "formula") o.truncation = Truncation::formula;
    else throw config_error("truncation must be 'envelope' or 'formula'");
  }
  if ((o.r_minus.has_value()) != (o.r_plus.has_value())) throw config_error("give both r_minus and r_plus or neither");
  if ((o.omega.has_value()) != (o.d_half.has_value())) throw config_error("give both omega and d_half or neither");
  o.threads = threads_from_env();
  return o;
}

inline WHFOptions filter_options(const RunConfig& c) {
  WHFOptions o;
  o.eps = c.eps.value;
  const auto& v = c.overrides;
  if (v.N_half) o.N_outer = *v.N_half;
  if (v.N_inner) o.N_inner = *v.N_inner;
  if (v.zeta) o.zeta = v.zeta->value;
  o.threads = threads_from_env();
  return o;
}

// ---------------------------------------------------------------------------
// Presets: the worked examples under descriptive names

inline const std::map<std::string, RunConfig>& presets() {
  static const std::map<std::string, RunConfig> table = [] {
    std::map<std::string, RunConfig> t;
    RunConfig base;
    base.overrides.r_minus = dec("0.98");
    base.overrides.r_plus = dec("1");

    RunConfig k = base;
    k.method = Method::sinh1;
    t["kobol"] = k;

    RunConfig k500;
    k500.method = Method::sinh1;
    k500.n_lo = k500.n_hi = 500;
    t["kobol-n500"] = k500;

    RunConfig kd = base;
    kd.model = KobolModel{dec("0.1"), dec("0.5"), dec("1.01"), dec("0.05")};
    kd.method = Method::sinh1;
    t["kobol-drift"] = kd;
    kd.method = Method::sinh2;
    t["kobol-drift-sinh2"] = kd;

    RunConfig mix = base;
    mix.model = MixtureModel{};
    mix.method = Method::sinh2;
    t["atom-mixture"] = mix;

    RunConfig k15 = base;
    k15.model = KobolModel{dec("0.1"), dec("1.5"), dec("1.01"), dec("0")};
    k15.method = Method::sinh3;
    t["kobol-nu15"] = k15;

    RunConfig nd;
    nd.model = NtsModel{dec("0.1"), dec("0.5"), dec("1.01"), dec("0.05")};
    nd.method = Method::log;
    nd.overrides.r_minus = dec("0.94");
    nd.overrides.r_plus = dec("1");
    t["nts-drift"] = nd;

    RunConfig f;
    f.task = Task::filter;
    f.method = Method::sinh3;
    f.n_lo = 100;
    f.n_hi = 400;
    f.model = RationalPsdModel{};
    t["filter-cubic"] = f;
    f.model = RationalPsdModel{dec("1.0001"), dec("1.00015"), dec("-1"), dec("-1")};
    t["filter-poles"] = f;
    f.model = RationalPsdModel{dec("1.00001"), dec("1.000015"), dec("-1"), dec("-1")};
    t["filter-narrow"] = f;

    RunConfig bk = t["kobol"];
    bk.task = Task::bench;
    bk.bench_methods = {Method::trap, Method::sinh1};
    bk.overrides.trap_N = 1101;
    t["bench-kobol"] = bk;

    RunConfig bm = t["atom-mixture"];
    bm.task = Task::bench;
    bm.bench_methods = {Method::trap, Method::sinh1, Method::sinh2};
    bm.overrides.trap_N = 1101;
    t["bench-mixture"] = bm;

    RunConfig bn = t["nts-drift"];
    bn.task = Task::bench;
    bn.bench_methods = {Method::trap, Method::log};
    bn.overrides.trap_N = 900;
    bn.overrides.trap_r = dec("0.98");
    t["bench-nts"] = bn;
    return t;
  }();
  return table;
}

}  // namespace zsinh::cli
