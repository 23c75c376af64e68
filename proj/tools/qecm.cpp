// qecm command-line entry point: check | recover | simulate | analytic | sweep.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "qecm/analytics.hpp"
#include "qecm/config.hpp"

namespace {

using namespace qecm;

struct Options {
  std::string config;
  std::uint64_t seed = 0xD1CE;
  std::string out = "-";
  std::string format;
  std::string formula;
  std::vector<std::string> params;
};

// Writes via a temp file in the target directory and renames it into place.
void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write output '" + path + "'");
    f << text;
    f.flush();
    if (!f) {
      std::filesystem::remove(tmp);
      throw Error(ErrorKind::InvalidConfig, "write failed for '" + path + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string resolve_format(const std::string& requested, const std::string& fallback,
                           std::initializer_list<const char*> allowed) {
  std::string f = requested.empty() ? fallback : requested;
  if (f == "structured-document") f = "json";
  for (const char* a : allowed)
    if (f == a) return f;
  throw Error(ErrorKind::InvalidConfig, "field 'format' value '" + f + "' is not supported here");
}

json require_kind(const Options& o, const std::string& kind) {
  if (o.config.empty()) throw Error(ErrorKind::InvalidConfig, "missing --config");
  json doc = load_config_file(o.config);
  const std::string k = config_kind(doc);
  if (k != kind) throw Error(ErrorKind::InvalidConfig, "field 'kind' is '" + k + "', expected '" + kind + "'");
  return doc;
}

int run_check(const Options& o) {
  const CheckConfig c = parse_check(require_kind(o, "check"));
  const std::string fmt = resolve_format(o.format, "text", {"text", "json"});
  const ConditionReport r = check_conditions(c.generator, c.channel, c.code, c.tolerances);
  if (fmt == "json") {
    json doc = to_json(r);
    doc["channel"] = c.channel.label();
    write_output(o.out, doc.dump(2) + "\n");
  } else {
    write_output(o.out, format_report(r, c.channel.label()));
  }
  return 0;
}

int run_recover(const Options& o) {
  const json doc = require_kind(o, "recover");
  const CheckConfig c = parse_check(doc);
  const std::string fmt = resolve_format(o.format, "text", {"text", "json"});
  RecoveryOperation rec;
  if (c.recovery == "syndrome") {
    const std::size_t dim = c.code.dim();
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    const std::string kind = doc.value("syndrome_kind", n == 2 ? "two_qubit" : "ghz");
    if (kind != "two_qubit" && kind != "ghz") {
      throw Error(ErrorKind::InvalidConfig, "field 'syndrome_kind' must be two_qubit or ghz");
    }
    rec = build_syndrome_recovery(kind == "two_qubit" ? RecoveryKind::two_qubit : RecoveryKind::ghz, n);
  } else {
    rec = build_recovery_polar(c.channel, c.code, c.tolerances);
  }
  // Worst fidelity of R(E(|b><b|)) over the code basis and pairwise superpositions.
  double worst = 1.0;
  std::vector<StateVector> probes = c.code.basis();
  for (std::size_t a = 0; a < c.code.code_dim(); ++a) {
    for (std::size_t b = a + 1; b < c.code.code_dim(); ++b) {
      std::vector<cplx> v(c.code.dim());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = c.code.basis()[a][i] + c.code.basis()[b][i];
      probes.push_back(StateVector::normalized(std::move(v)));
    }
  }
  for (const auto& psi : probes) {
    const Matrix out = apply_recovery(apply_kraus(outer(psi.amplitudes(), psi.amplitudes()), c.channel.kraus()), rec);
    worst = std::min(worst, fidelity_pure(psi, out) / trace(out).real());
  }
  if (fmt == "json") {
    json d = to_json(rec);
    d["worst_fidelity"] = worst;
    write_output(o.out, d.dump(2) + "\n");
  } else {
    std::ostringstream s;
    s << rec.description << "\n";
    for (std::size_t k = 0; k < rec.syndrome_projectors.size(); ++k) {
      s << "  outcome " << k << ": rank " << std::llround(trace(rec.syndrome_projectors[k]).real())
        << (rec.is_fail[k] ? " (fail sector)" : "") << "\n";
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "worst code-state fidelity after recovery: %.12f\n", worst);
    s << buf;
    write_output(o.out, s.str());
  }
  return 0;
}

int run_simulate(const Options& o) {
  const SimulateConfig s = parse_simulate(require_kind(o, "simulate"), o.seed);
  const std::string fmt = resolve_format(o.format, "json", {"json", "text"});
  EstimationResult r;
  if (s.protocol == "standard") {
    r = run_standard_ramsey(s.config);
  } else {
    const std::size_t N = s.config.N;
    RecoveryOperation rec;
    if (s.recovery == "polar") {
      const CodeSpace code = N == 1 ? CodeSpace::two_qubit_plus() : CodeSpace::ghz(N);
      const auto ch = N == 1 ? dephasing_channel(0.01, 1, 2) : collective_dephasing_first_order(0.01, N);
      rec = build_recovery_polar(ch, code);
    } else {
      rec = build_syndrome_recovery(N == 1 ? RecoveryKind::two_qubit : RecoveryKind::ghz, N == 1 ? 2 : N);
    }
    r = s.protocol == "qec" ? run_qec_ramsey(s.config, rec) : run_ghz_qec(s.config, rec);
  }
  char line[256];
  std::snprintf(line, sizeof line, "%s: P+ = %.6f (n+ = %llu of %llu), omega_hat = %.9g, delta_omega = %.6g\n",
                r.protocol.c_str(), r.p_plus_hat, static_cast<unsigned long long>(r.n_plus),
                static_cast<unsigned long long>(s.config.n), r.omega_hat, r.delta_omega);
  if (fmt == "json") {
    write_output(o.out, to_json(r).dump(2) + "\n");
    (o.out == "-" ? std::cerr : std::cout) << line;
  } else {
    write_output(o.out, line);
  }
  return 0;
}

int run_analytic(const Options& o) {
  std::string name = o.formula;
  analytics::Params params;
  if (!o.config.empty()) {
    const json doc = require_kind(o, "analytic");
    if (name.empty()) name = doc.at("formula").get<std::string>();
    if (const auto it = doc.find("params"); it != doc.end()) {
      for (const auto& [k, v] : it->items()) {
        if (!v.is_number()) throw Error(ErrorKind::InvalidConfig, "field 'params." + k + "' must be a number");
        params[k] = v.get<double>();
      }
    }
  }
  for (const auto& kv : o.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidConfig, "--param expects key=value, got '" + kv + "'");
    try {
      params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidConfig, "--param '" + kv + "' has a non-numeric value");
    }
  }
  if (name.empty()) throw Error(ErrorKind::InvalidConfig, "missing field 'formula'");
  const std::string fmt = resolve_format(o.format, "text", {"text", "json"});
  const auto get = [&](const char* k) {
    const auto it = params.find(k);
    if (it == params.end()) throw Error(ErrorKind::MissingParam, std::string("parameter '") + k + "' is required");
    return it->second;
  };
  json result;
  if (const auto f = analytics::parse_formula(name)) {
    result = {{"formula", name}, {"value", analytics::sensitivity(*f, params)}};
  } else if (name == "phase_moments" || name == "phase_moments_rederived") {
    const auto r = static_cast<std::size_t>(std::llround(get("r")));
    const auto m = name == "phase_moments" ? analytics::phase_moments(get("phi0"), get("p_r"), r)
                                           : analytics::phase_moments_rederived(get("phi0"), get("p_r"), r);
    result = {{"formula", name}, {"mean", m.mean}, {"second_moment", m.second_moment}, {"f_factor", m.f_factor}};
  } else if (name == "p_plus") {
    const auto v = analytics::p_plus_analytic(get("phi0"), get("p_r"), static_cast<std::size_t>(std::llround(get("r"))));
    result = {{"formula", name}, {"value", v.value}, {"approximate", v.approximate}};
  } else if (name == "standard_ramsey") {
    const auto v = analytics::standard_ramsey_analytic(get("T"), get("gamma"), get("omega"), get("n"));
    result = {{"formula", name}, {"p_plus", v.p_plus}, {"delta_omega", v.delta_omega}};
  } else {
    throw Error(ErrorKind::InvalidConfig, "field 'formula' value '" + name + "' is unknown");
  }
  if (fmt == "json") {
    write_output(o.out, result.dump(2) + "\n");
  } else {
    std::ostringstream s;
    s.precision(17);
    for (const auto& [k, v] : result.items())
      if (k != "formula") s << k << " = " << v << "\n";
    write_output(o.out, s.str());
  }
  return 0;
}

int run_sweep_cmd(const Options& o) {
  const SweepSpec spec = parse_sweep(require_kind(o, "sweep"), o.seed);
  const std::string fmt = resolve_format(o.format, "csv", {"csv", "json"});
  const SweepResult r = run_sweep(spec);
  if (fmt == "csv") {
    std::ostringstream s;
    write_csv(r, s);
    write_output(o.out, s.str());
    if (o.out != "-") write_output(o.out + ".provenance.json", provenance_json(r));
  } else {
    json rows = json::array();
    for (const auto& row : r.rows) {
      rows.push_back({{"axis_value", row.axis_value},
                      {"strategy", to_string(row.strategy)},
                      {"delta_omega", row.delta_omega},
                      {"normalized", row.normalized},
                      {"n_effective", row.n_effective},
                      {"seed", row.seed}});
    }
    write_output(o.out, json{{"spec", to_json(spec)}, {"rows", rows}}.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum error correction for metrology: condition checks, recovery, Ramsey simulation, sweeps"};
  app.require_subcommand(1);
  Options o;
  const auto common = [&o](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", o.config, "Config file (JSON)");
    if (config_required) c->required();
    sub->add_option("--seed", o.seed, "Master seed (default 0xD1CE)");
    sub->add_option("--out", o.out, "Output path, '-' for stdout");
    sub->add_option("--format", o.format, "Output format: text | json (structured-document) | csv");
  };
  auto* check = app.add_subcommand("check", "Verify the three code conditions and report xi");
  common(check, true);
  auto* recover = app.add_subcommand("recover", "Build a recovery operation and test it on code states");
  common(recover, true);
  auto* simulate = app.add_subcommand("simulate", "Run a Ramsey protocol");
  common(simulate, true);
  auto* analytic = app.add_subcommand("analytic", "Evaluate a closed-form expression");
  common(analytic, false);
  analytic->add_option("--formula", o.formula, "Formula name");
  analytic->add_option("--param", o.params, "key=value, repeatable");
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
  common(sweep, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return run_check(o);
    if (recover->parsed()) return run_recover(o);
    if (simulate->parsed()) return run_simulate(o);
    if (analytic->parsed()) return run_analytic(o);
    if (sweep->parsed()) return run_sweep_cmd(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_numerical(e.kind()) ? 3 : 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: InvalidConfig: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
