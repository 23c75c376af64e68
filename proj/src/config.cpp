#include "qecm/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qecm/pauli.hpp"

namespace qecm {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::InvalidConfig, "field '" + field + "' " + why);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const json& need(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) bad(path.empty() ? "<root>" : path, "must be an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorKind::InvalidConfig, "missing field '" + join(path, key) + "'");
  return *it;
}

double as_number(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity")) {
    return std::numeric_limits<double>::infinity();
  }
  bad(field, "must be a number");
}

std::uint64_t as_count(const json& v, const std::string& field) {
  const double x = as_number(v, field);
  if (!(x >= 0.0) || x != std::floor(x) || x > 1.8e19) bad(field, "must be a non-negative integer");
  return static_cast<std::uint64_t>(x);
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) bad(field, "must be a string");
  return v.get<std::string>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& path) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, join(path, key));
}

std::uint64_t count_or(const json& obj, const std::string& key, std::uint64_t fallback, const std::string& path) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : as_count(*it, join(path, key));
}

std::string string_or(const json& obj, const std::string& key, const std::string& fallback, const std::string& path) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : as_string(*it, join(path, key));
}

cplx as_complex(const json& v, const std::string& field) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  bad(field, "must be a number or an [re, im] pair");
}

std::vector<cplx> as_vector(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) bad(field, "must be a nonempty array of amplitudes");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_complex(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::size_t register_qubits(std::size_t dim, const std::string& field) {
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim) bad(field, "needs a qubit register, dimension " + std::to_string(dim) + " is not 2^n");
  return n;
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

json number_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

}  // namespace

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidConfig, "config '" + path + "' is not valid JSON: " + e.what());
  }
}

std::string config_kind(const json& doc) { return as_string(need(doc, "kind", ""), "kind"); }

Tolerances parse_tolerances(const json& doc, const Tolerances& base) {
  Tolerances t = base;
  const auto it = doc.find("tolerances");
  if (it == doc.end()) return t;
  const json& o = *it;
  if (!o.is_object()) bad("tolerances", "must be an object");
  const std::string p = "tolerances";
  for (const auto& [key, value] : o.items()) {
    const std::string f = join(p, key);
    if (key == "herm") t.herm = as_number(value, f);
    else if (key == "proj") t.proj = as_number(value, f);
    else if (key == "norm") t.norm = as_number(value, f);
    else if (key == "trace") t.trace = as_number(value, f);
    else if (key == "psd") t.psd = as_number(value, f);
    else if (key == "cptp") t.cptp = as_number(value, f);
    else if (key == "condition") t.condition = as_number(value, f);
    else if (key == "diag") t.diag = as_number(value, f);
    else if (key == "max_sweeps") t.max_sweeps = static_cast<int>(as_count(value, f));
    else if (key == "max_dim") t.max_dim = static_cast<std::size_t>(as_count(value, f));
    else bad(f, "is not a known tolerance");
  }
  return t;
}

Matrix parse_operator(const json& value, const std::string& field) {
  if (value.is_string()) return pauli::materialize(pauli::parse(value.get<std::string>()));
  if (value.is_array()) {
    const std::size_t dim = value.size();
    if (dim == 0) bad(field, "is an empty matrix");
    std::vector<cplx> entries;
    for (std::size_t i = 0; i < dim; ++i) {
      const std::string row = field + "[" + std::to_string(i) + "]";
      if (!value[i].is_array() || value[i].size() != dim) bad(row, "must have " + std::to_string(dim) + " entries");
      for (std::size_t j = 0; j < dim; ++j) entries.push_back(as_complex(value[i][j], row + "[" + std::to_string(j) + "]"));
    }
    return Matrix(dim, std::move(entries));
  }
  bad(field, "must be a Pauli expression or a matrix of [re, im] entries");
}

CodeSpace parse_code(const json& value, const Tolerances& tol) {
  if (value.is_string()) {
    const std::string name = value.get<std::string>();
    if (name == "two_qubit_plus") return CodeSpace::two_qubit_plus();
    if (name.rfind("ghz:", 0) == 0) {
      std::size_t n = 0;
      try {
        n = std::stoul(name.substr(4));
      } catch (const std::exception&) {
        bad("code", "preset '" + name + "' has no qubit count");
      }
      return CodeSpace::ghz(n);
    }
    bad("code", "unknown preset '" + name + "' (expected two_qubit_plus or ghz:N)");
  }
  const json* basis = &value;
  if (value.is_object()) basis = &need(value, "basis", "code");
  if (!basis->is_array() || basis->empty()) bad("code.basis", "must be a nonempty list of amplitude vectors");
  std::vector<StateVector> vecs;
  for (std::size_t i = 0; i < basis->size(); ++i) {
    vecs.push_back(StateVector::normalized(as_vector((*basis)[i], "code.basis[" + std::to_string(i) + "]")));
  }
  return CodeSpace(std::move(vecs), tol);
}

QuantumChannel parse_channel(const json& value, std::size_t num_qubits, const Tolerances& tol) {
  const std::string p = "channel";
  const std::string type = as_string(need(value, "type", p), "channel.type");
  if (type == "kraus") {
    const json& ms = need(value, "matrices", p);
    if (!ms.is_array() || ms.empty()) bad("channel.matrices", "must be a nonempty list");
    std::vector<Matrix> k;
    for (std::size_t i = 0; i < ms.size(); ++i) k.push_back(parse_operator(ms[i], "channel.matrices[" + std::to_string(i) + "]"));
    const bool truncated = value.value("first_order_truncated", false);
    return QuantumChannel(std::move(k), string_or(value, "label", "kraus", p), truncated, tol);
  }
  const double prob = as_number(need(value, "p", p), "channel.p");
  const auto qubit = static_cast<std::size_t>(count_or(value, "qubit", 1, p));
  if (type == "dephasing") return dephasing_channel(prob, qubit, num_qubits);
  if (type == "collective_dephasing") return collective_dephasing_first_order(prob, num_qubits);
  if (type == "spontaneous_emission") return spontaneous_emission_channel(prob, qubit, num_qubits);
  if (type == "parallel_dephasing") {
    const std::string axis = string_or(value, "axis", "X", p);
    if (axis.size() != 1 || std::string("XYZ").find(axis[0]) == std::string::npos) bad("channel.axis", "must be X, Y or Z");
    return pauli_flip_channel(axis[0], prob, qubit, num_qubits);
  }
  bad("channel.type", "unknown channel type '" + type + "'");
}

CheckConfig parse_check(const json& doc) {
  const Tolerances tol = parse_tolerances(doc);
  CodeSpace code = parse_code(need(doc, "code", ""), tol);
  Matrix g = parse_operator(need(doc, "generator", ""), "generator");
  if (g.dim() != code.dim()) {
    bad("generator", "acts on dimension " + std::to_string(g.dim()) + " but the code lives in " +
                         std::to_string(code.dim()));
  }
  const json& chj = need(doc, "channel", "");
  const std::string type = as_string(need(chj, "type", "channel"), "channel.type");
  const std::size_t n = type == "kraus" ? 0 : register_qubits(code.dim(), "code");
  QuantumChannel ch = parse_channel(chj, n, tol);
  const std::string rec = string_or(doc, "recovery", "polar", "");
  if (rec != "polar" && rec != "syndrome") bad("recovery", "must be 'polar' or 'syndrome'");
  return CheckConfig{std::move(g), std::move(ch), std::move(code), tol, rec};
}

SimulateConfig parse_simulate(const json& doc, std::uint64_t seed) {
  SimulateConfig s;
  s.protocol = as_string(need(doc, "protocol", ""), "protocol");
  if (s.protocol != "standard" && s.protocol != "qec" && s.protocol != "ghz") {
    bad("protocol", "must be standard, qec or ghz");
  }
  ProtocolConfig& c = s.config;
  c.omega = as_number(need(doc, "omega", ""), "omega");
  c.T = as_number(need(doc, "T", ""), "T");
  c.gamma = as_number(need(doc, "gamma", ""), "gamma");
  c.n = as_count(need(doc, "n", ""), "n");
  c.r = count_or(doc, "r", 1, "");
  c.gamma_parallel = number_or(doc, "gamma_parallel", 0.0, "");
  c.t1 = number_or(doc, "t1", std::numeric_limits<double>::infinity(), "");
  c.p_error = number_or(doc, "p_error", 0.0, "");
  c.N = static_cast<std::size_t>(count_or(doc, "N", s.protocol == "ghz" ? 0 : 1, ""));
  if (s.protocol == "ghz" && doc.find("N") == doc.end()) throw Error(ErrorKind::InvalidConfig, "missing field 'N'");
  const std::string mode = string_or(doc, "mode", "exact_density", "");
  if (mode == "exact_density") c.mode = SimulationMode::exact_density;
  else if (mode == "monte_carlo") c.mode = SimulationMode::monte_carlo;
  else bad("mode", "must be exact_density or monte_carlo");
  c.seed = seed;
  s.recovery = string_or(doc, "recovery", "syndrome", "");
  if (s.recovery != "syndrome" && s.recovery != "polar") bad("recovery", "must be 'syndrome' or 'polar'");
  c.validate();
  return s;
}

SweepSpec parse_sweep(const json& doc, std::uint64_t seed) {
  SweepSpec s;
  const std::string preset = string_or(doc, "preset", "", "");
  if (preset == "fig2") s = default_fig2_spec();
  else if (preset == "figSI") s = default_figSI_spec();
  else if (preset == "qubit_count") s = default_qubit_count_spec();
  else if (!preset.empty()) bad("preset", "must be fig2, figSI or qubit_count");
  else {
    const auto axis = parse_axis(as_string(need(doc, "axis", ""), "axis"));
    if (!axis) bad("axis", "must be interrogation_time, total_time or qubit_count");
    s = *axis == SweepAxis::interrogation_time ? default_fig2_spec()
        : *axis == SweepAxis::total_time       ? default_figSI_spec()
                                               : default_qubit_count_spec();
  }
  if (const auto it = doc.find("axis"); it != doc.end()) {
    const auto axis = parse_axis(as_string(*it, "axis"));
    if (!axis) bad("axis", "must be interrogation_time, total_time or qubit_count");
    s.axis = *axis;
  }
  if (const auto it = doc.find("grid"); it != doc.end()) {
    if (it->is_array()) {
      s.grid.clear();
      for (std::size_t i = 0; i < it->size(); ++i) s.grid.push_back(as_number((*it)[i], "grid[" + std::to_string(i) + "]"));
    } else if (it->is_object()) {
      s.grid = log_grid(as_number(need(*it, "lo", "grid"), "grid.lo"), as_number(need(*it, "hi", "grid"), "grid.hi"),
                        static_cast<std::size_t>(count_or(*it, "per_decade", 24, "grid")));
    } else {
      bad("grid", "must be a list or {lo, hi, per_decade}");
    }
  }
  if (const auto it = doc.find("strategies"); it != doc.end()) {
    if (!it->is_array()) bad("strategies", "must be a list");
    s.strategies.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string f = "strategies[" + std::to_string(i) + "]";
      const auto st = parse_strategy(as_string((*it)[i], f));
      if (!st) bad(f, "is not a known strategy");
      s.strategies.push_back(*st);
    }
  }
  if (const auto it = doc.find("normalization"); it != doc.end()) {
    const auto n = parse_normalization(as_string(*it, "normalization"));
    if (!n) bad("normalization", "must be delta_omega_sqrt_tau or delta_omega_tau_N");
    s.normalization = *n;
  }
  if (const auto it = doc.find("base"); it != doc.end()) {
    const json& b = *it;
    if (!b.is_object()) bad("base", "must be an object");
    s.base.gamma = number_or(b, "gamma", s.base.gamma, "base");
    s.base.gamma_parallel = number_or(b, "gamma_parallel", s.base.gamma_parallel, "base");
    s.base.t1 = number_or(b, "t1", s.base.t1, "base");
    s.base.p_error = number_or(b, "p_error", s.base.p_error, "base");
    s.base.T = number_or(b, "T", s.base.T, "base");
    s.base.r = count_or(b, "r", s.base.r, "base");
    s.base.N = static_cast<std::size_t>(count_or(b, "N", s.base.N, "base"));
  }
  s.tau = number_or(doc, "tau", s.tau, "");
  s.parallel_ratio = number_or(doc, "parallel_ratio", s.parallel_ratio, "");
  s.imperfect_p_error = number_or(doc, "imperfect_p_error", s.imperfect_p_error, "");
  s.per_qubit_gamma_alpha = number_or(doc, "per_qubit_gamma_alpha", s.per_qubit_gamma_alpha, "");
  s.ghz_gamma_alpha = number_or(doc, "ghz_gamma_alpha", s.ghz_gamma_alpha, "");
  s.max_t_over_t1 = number_or(doc, "max_t_over_t1", s.max_t_over_t1, "");
  s.operating_points = static_cast<std::size_t>(count_or(doc, "operating_points", s.operating_points, ""));
  s.base.seed = seed;
  return s;
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const ProtocolConfig& c) {
  return {{"omega", c.omega},
          {"T", c.T},
          {"r", c.r},
          {"alpha", c.alpha()},
          {"gamma", c.gamma},
          {"gamma_parallel", c.gamma_parallel},
          {"t1", number_json(c.t1)},
          {"p_error", c.p_error},
          {"n", c.n},
          {"N", c.N},
          {"seed", c.seed},
          {"mode", to_string(c.mode)}};
}

json to_json(const EstimationResult& r) {
  return {{"protocol", r.protocol},
          {"p_plus_hat", r.p_plus_hat},
          {"p_plus", r.p_plus},
          {"phi_hat", r.phi_hat},
          {"omega_hat", r.omega_hat},
          {"delta_omega", number_json(r.delta_omega)},
          {"slope", r.slope},
          {"calibration", r.calibration},
          {"calibration_valid", r.calibration_valid},
          {"counts", {{"plus", r.n_plus}, {"minus", r.n_minus}}},
          {"config", to_json(r.config)}};
}

json to_json(const ConditionReport& r) {
  const char* names[] = {"commutator", "error_correction", "xi_positive"};
  json verdicts = json::object();
  for (std::size_t i = 0; i < 3; ++i) verdicts[names[i]] = r.verdicts[i];
  json amps = json::array();
  for (const auto& a : r.xi_state.amplitudes()) amps.push_back(complex_json(a));
  return {{"commutator_residual", r.commutator_residual},
          {"condition2_residual", r.condition2_residual},
          {"a_matrix", to_json(r.a_matrix)},
          {"xi", r.xi},
          {"spread", r.spread},
          {"spread_squared", r.spread * r.spread},
          {"compressed_spectrum", r.compressed_spectrum},
          {"xi_state", amps},
          {"verdicts", verdicts},
          {"all_pass", r.all_pass()},
          {"tolerances", {{"condition", r.tolerances.condition}, {"herm", r.tolerances.herm}}}};
}

json to_json(const RecoveryOperation& r) {
  json outcomes = json::array();
  for (std::size_t k = 0; k < r.syndrome_projectors.size(); ++k) {
    outcomes.push_back({{"projector", to_json(r.syndrome_projectors[k])},
                        {"correction", to_json(r.corrections[k])},
                        {"fail", static_cast<bool>(r.is_fail[k])},
                        {"rank", std::llround(trace(r.syndrome_projectors[k]).real())}});
  }
  return {{"description", r.description}, {"outcomes", outcomes}, {"dropped_weights", r.dropped_weights}};
}

json to_json(const SweepSpec& s) {
  json strategies = json::array();
  for (const auto st : s.strategies) strategies.push_back(to_string(st));
  return {{"axis", to_string(s.axis)},
          {"grid", s.grid},
          {"strategies", strategies},
          {"normalization", to_string(s.normalization)},
          {"base", to_json(s.base)},
          {"tau", s.tau},
          {"parallel_ratio", s.parallel_ratio},
          {"imperfect_p_error", s.imperfect_p_error},
          {"per_qubit_gamma_alpha", s.per_qubit_gamma_alpha},
          {"ghz_gamma_alpha", s.ghz_gamma_alpha},
          {"max_t_over_t1", s.max_t_over_t1},
          {"operating_points", s.operating_points}};
}

}  // namespace qecm
