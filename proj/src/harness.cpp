#include "qecm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "qecm/analytics.hpp"
#include "qecm/config.hpp"

namespace qecm {

namespace {

constexpr std::pair<Strategy, std::string_view> kStrategies[] = {
    {Strategy::noise_free, "noise_free"},       {Strategy::standard, "standard"},
    {Strategy::qec_ideal, "qec_ideal"},         {Strategy::qec_imperfect, "qec_imperfect"},
    {Strategy::qec_per_qubit, "qec_per_qubit"}, {Strategy::ghz_qec, "ghz_qec"},
};

bool has(const SweepSpec& spec, Strategy s) {
  return std::find(spec.strategies.begin(), spec.strategies.end(), s) != spec.strategies.end();
}

void validate(const SweepSpec& spec, SweepAxis axis, std::initializer_list<Strategy> allowed) {
  if (spec.axis != axis) {
    throw Error(ErrorKind::InvalidSpec, "axis must be '" + std::string(to_string(axis)) + "'");
  }
  if (spec.grid.empty()) throw Error(ErrorKind::InvalidSpec, "grid is empty");
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    if (!(spec.grid[i] > 0.0) || !std::isfinite(spec.grid[i])) {
      throw Error(ErrorKind::InvalidSpec, "grid values must be positive and finite");
    }
    if (i > 0 && !(spec.grid[i] > spec.grid[i - 1])) {
      throw Error(ErrorKind::InvalidSpec, "grid must be strictly increasing");
    }
  }
  if (spec.strategies.empty()) throw Error(ErrorKind::InvalidSpec, "no strategies");
  for (const Strategy s : spec.strategies) {
    if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
      throw Error(ErrorKind::InvalidSpec,
                  "strategy '" + std::string(to_string(s)) + "' not valid on axis " + std::string(to_string(axis)));
    }
  }
  if (spec.operating_points < 1) throw Error(ErrorKind::InvalidSpec, "operating_points must be >= 1");
}

std::uint64_t steps_for(double T, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) return 1;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(T / alpha - 1e-9)));
}

// Single-run delta_omega of a corrected protocol at its best operating point.
double corrected_single_run(ProtocolConfig cfg, std::size_t points) {
  cfg.validate();
  const double ppo = 0.5 * static_cast<double>(cfg.N) * cfg.T;
  const double mu = mean_phase_factor(cfg.gamma * cfg.alpha());
  const auto p = [&](double omega) {
    ProtocolConfig c = cfg;
    c.omega = omega;
    return qec_p_plus_exact(c, kernels::Exec::serial);
  };
  return best_operating_point(p, ppo, mu, points).delta_omega;
}

void check_row(const SweepRow& row) {
  if (!(row.delta_omega > 0.0) || !std::isfinite(row.delta_omega) || !(row.normalized > 0.0) ||
      !std::isfinite(row.normalized)) {
    throw Error(ErrorKind::DegenerateInput, "strategy " + std::string(to_string(row.strategy)) +
                                                " produced a non-finite value at axis value " +
                                                std::to_string(row.axis_value));
  }
}

double normalize(const SweepSpec& spec, double dw, double tau, double n_qubits) {
  return spec.normalization == Normalization::delta_omega_sqrt_tau ? dw * std::sqrt(tau) : dw * tau * n_qubits;
}

void finish(SweepResult& res) {
  for (const auto& row : res.rows) check_row(row);
  std::stable_sort(res.rows.begin(), res.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.strategy != b.strategy) return a.strategy < b.strategy;
    return a.axis_value < b.axis_value;
  });
}

// Runs fn(i) for every grid index in parallel; fn writes only to slot i.
template <class Fn>
void for_each_point(std::size_t n, Fn fn) {
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

}  // namespace

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::interrogation_time: return "interrogation_time";
    case SweepAxis::total_time: return "total_time";
    case SweepAxis::qubit_count: return "qubit_count";
  }
  return "?";
}

std::string_view to_string(Strategy s) {
  for (const auto& [k, name] : kStrategies)
    if (k == s) return name;
  return "?";
}

std::string_view to_string(Normalization n) {
  return n == Normalization::delta_omega_sqrt_tau ? "delta_omega_sqrt_tau" : "delta_omega_tau_N";
}

std::optional<SweepAxis> parse_axis(std::string_view s) {
  for (const auto a : {SweepAxis::interrogation_time, SweepAxis::total_time, SweepAxis::qubit_count})
    if (to_string(a) == s) return a;
  return std::nullopt;
}

std::optional<Strategy> parse_strategy(std::string_view s) {
  for (const auto& [k, name] : kStrategies)
    if (name == s) return k;
  return std::nullopt;
}

std::optional<Normalization> parse_normalization(std::string_view s) {
  for (const auto n : {Normalization::delta_omega_sqrt_tau, Normalization::delta_omega_tau_N})
    if (to_string(n) == s) return n;
  return std::nullopt;
}

std::vector<std::pair<double, double>> SweepResult::curve(Strategy s, bool normalized) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& row : rows)
    if (row.strategy == s) out.emplace_back(row.axis_value, normalized ? row.normalized : row.delta_omega);
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || per_decade == 0) throw Error(ErrorKind::InvalidSpec, "bad log grid bounds");
  const double decades = std::log10(hi / lo);
  const auto steps = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(per_decade) - 1e-9));
  std::vector<double> g;
  for (std::size_t i = 0; i <= steps; ++i) {
    g.push_back(lo * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(steps)));
  }
  g.back() = hi;
  return g;
}

OperatingPoint best_operating_point(const std::function<double(double)>& p_of_omega, double phase_per_omega,
                                    double mu, std::size_t points) {
  // x = 2 mu Phi0 is the fringe argument; the steepest point sits near pi/2.
  const double scale = 2.0 * mu * phase_per_omega;
  const double h = 1e-4 / scale;
  OperatingPoint best;
  double best_slope = -1.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double x = points == 1 ? 0.5 * std::numbers::pi
                                 : std::numbers::pi * (0.25 + 0.5 * static_cast<double>(k) /
                                                                  static_cast<double>(points - 1));
    const double omega = x / scale;
    const double slope = (p_of_omega(omega + h) - p_of_omega(omega - h)) / (2.0 * h);
    if (std::abs(slope) > best_slope) {
      best_slope = std::abs(slope);
      best.omega = omega;
      best.slope = slope;
    }
  }
  best.p_plus = p_of_omega(best.omega);
  best.delta_omega = analytics::error_propagation(best.p_plus, best.slope, 1.0);
  return best;
}

SweepResult sweep_fig2(const SweepSpec& spec) {
  validate(spec, SweepAxis::interrogation_time,
           {Strategy::noise_free, Strategy::standard, Strategy::qec_ideal, Strategy::qec_imperfect});
  if (!(spec.tau > 0.0)) throw Error(ErrorKind::InvalidSpec, "tau must be positive");
  const double gamma = spec.base.gamma;
  const std::size_t np = spec.grid.size();
  std::vector<double> ideal(np), imperfect(np);

  for_each_point(np, [&](std::size_t i) {
    const double T = spec.grid[i];
    ProtocolConfig cfg = spec.base;
    cfg.N = 1;
    cfg.T = T;
    cfg.r = steps_for(T, gamma > 0.0 ? 1.0 / gamma : 0.0);
    cfg.t1 = std::numeric_limits<double>::infinity();
    if (has(spec, Strategy::qec_ideal)) {
      ProtocolConfig c = cfg;
      c.gamma_parallel = 0.0;
      c.p_error = 0.0;
      ideal[i] = corrected_single_run(c, spec.operating_points);
    }
    if (has(spec, Strategy::qec_imperfect)) {
      ProtocolConfig c = cfg;
      c.gamma_parallel = spec.parallel_ratio * gamma;
      c.p_error = spec.imperfect_p_error;
      imperfect[i] = corrected_single_run(c, spec.operating_points);
    }
  });

  SweepResult res;
  res.spec = spec;
  const auto add = [&](Strategy s, double T, double single) {
    const double n = spec.tau / T;
    const double dw = single / std::sqrt(n);
    res.rows.push_back({T, s, dw, normalize(spec, dw, spec.tau, 1.0), n, spec.base.seed});
  };
  double best_imperfect = std::numeric_limits<double>::infinity();  // sensitivity reachable with T' <= T
  for (std::size_t i = 0; i < np; ++i) {
    const double T = spec.grid[i];
    if (has(spec, Strategy::noise_free)) {
      add(Strategy::noise_free, T, analytics::sensitivity(analytics::Formula::ramsey_ideal, {{"T", T}, {"n", 1.0}}));
    }
    if (has(spec, Strategy::standard)) {
      add(Strategy::standard, T, analytics::standard_ramsey_analytic(T, gamma, 0.0, 1.0).delta_omega);
    }
    if (has(spec, Strategy::qec_ideal)) add(Strategy::qec_ideal, T, ideal[i]);
    if (has(spec, Strategy::qec_imperfect)) {
      // Compare at equal tau: a shorter run repeated more often.
      best_imperfect = std::min(best_imperfect, imperfect[i] * std::sqrt(T));
      add(Strategy::qec_imperfect, T, best_imperfect / std::sqrt(T));
    }
  }
  finish(res);
  return res;
}

SweepResult sweep_figSI(const SweepSpec& spec) {
  validate(spec, SweepAxis::total_time, {Strategy::standard, Strategy::qec_per_qubit, Strategy::ghz_qec});
  const double gamma = spec.base.gamma;
  const double t1 = spec.base.t1;
  const std::size_t N = spec.base.N;
  if (N < 2 && has(spec, Strategy::ghz_qec)) throw Error(ErrorKind::InvalidSpec, "ghz_qec needs base N >= 2");
  const double t_cap = std::isfinite(t1) ? spec.max_t_over_t1 * t1 : spec.grid.back();
  const double sqrt_n_probes = std::sqrt(static_cast<double>(N));

  // s(T) = single-run delta_omega * sqrt(T) on the grid points usable as run lengths.
  std::vector<double> runs;
  for (const double T : spec.grid)
    if (T <= t_cap) runs.push_back(T);
  std::vector<double> s_pq(runs.size(), 0.0), s_ghz(runs.size(), 0.0);
  for_each_point(runs.size(), [&](std::size_t i) {
    const double T = runs[i];
    if (has(spec, Strategy::qec_per_qubit)) {
      ProtocolConfig c = spec.base;
      c.N = 1;
      c.T = T;
      c.r = steps_for(T, gamma > 0.0 ? spec.per_qubit_gamma_alpha / gamma : 0.0);
      s_pq[i] = corrected_single_run(c, spec.operating_points) * std::sqrt(T);
    }
    if (has(spec, Strategy::ghz_qec)) {
      ProtocolConfig c = spec.base;
      c.T = T;
      c.r = steps_for(T, gamma > 0.0 ? spec.ghz_gamma_alpha / gamma : 0.0);
      s_ghz[i] = corrected_single_run(c, spec.operating_points) * std::sqrt(T);
    }
  });

  SweepResult res;
  res.spec = spec;
  const double nq = static_cast<double>(N);
  const auto add = [&](Strategy s, double tau, double dw, double T) {
    res.rows.push_back({tau, s, dw, normalize(spec, dw, tau, nq), tau / T, spec.base.seed});
  };
  for (const double tau : spec.grid) {
    if (has(spec, Strategy::standard)) {
      // e^{gamma T}/sqrt(T) is smallest at T = 1/(2 gamma).
      const double T = gamma > 0.0 ? std::min(tau, 0.5 / gamma) : tau;
      const double single = analytics::standard_ramsey_analytic(T, gamma, 0.0, 1.0).delta_omega;
      add(Strategy::standard, tau, single * std::sqrt(T / tau) / sqrt_n_probes, T);
    }
    for (const Strategy s : {Strategy::qec_per_qubit, Strategy::ghz_qec}) {
      if (!has(spec, s)) continue;
      const auto& sv = s == Strategy::qec_per_qubit ? s_pq : s_ghz;
      double best = std::numeric_limits<double>::infinity(), best_T = tau;
      for (std::size_t i = 0; i < runs.size() && runs[i] <= tau * (1.0 + 1e-12); ++i) {
        if (sv[i] < best) {
          best = sv[i];
          best_T = runs[i];
        }
      }
      if (!std::isfinite(best)) {
        throw Error(ErrorKind::InvalidSpec, "no usable run length for tau = " + std::to_string(tau));
      }
      const double dw = best / std::sqrt(tau) / (s == Strategy::qec_per_qubit ? sqrt_n_probes : 1.0);
      add(s, tau, dw, best_T);
    }
  }
  finish(res);
  return res;
}

SweepResult sweep_qubit_count(const SweepSpec& spec) {
  validate(spec, SweepAxis::qubit_count, {Strategy::ghz_qec});
  for (const double n : spec.grid) {
    if (n != std::floor(n) || n < 2 || n > 6) throw Error(ErrorKind::InvalidSpec, "qubit counts must be integers in 2..6");
  }
  std::vector<double> single(spec.grid.size());
  for_each_point(spec.grid.size(), [&](std::size_t i) {
    ProtocolConfig c = spec.base;
    c.N = static_cast<std::size_t>(spec.grid[i]);
    single[i] = corrected_single_run(c, spec.operating_points);
  });
  SweepResult res;
  res.spec = spec;
  const double n = spec.tau / spec.base.T;
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    const double dw = single[i] / std::sqrt(n);
    res.rows.push_back({spec.grid[i], Strategy::ghz_qec, dw, normalize(spec, dw, spec.tau, spec.grid[i]), n, spec.base.seed});
  }
  finish(res);
  return res;
}

SweepResult run_sweep(const SweepSpec& spec) {
  switch (spec.axis) {
    case SweepAxis::interrogation_time: return sweep_fig2(spec);
    case SweepAxis::total_time: return sweep_figSI(spec);
    case SweepAxis::qubit_count: return sweep_qubit_count(spec);
  }
  throw Error(ErrorKind::InvalidSpec, "unknown axis");
}

SweepSpec default_fig2_spec() {
  SweepSpec s;
  s.axis = SweepAxis::interrogation_time;
  s.base.gamma = 1.0;
  // e^{gamma T} of the standard curve overflows past gamma T ~ 709.
  s.grid = log_grid(1e-2, 7e2);
  s.strategies = {Strategy::noise_free, Strategy::standard, Strategy::qec_ideal, Strategy::qec_imperfect};
  s.normalization = Normalization::delta_omega_sqrt_tau;
  s.tau = 1e4;
  return s;
}

SweepSpec default_figSI_spec() {
  SweepSpec s;
  s.axis = SweepAxis::total_time;
  s.base.gamma = 1.0;  // 1/T2*
  s.base.t1 = 1e3;
  s.base.N = 3;
  s.grid = log_grid(1e-1, 1e5);
  s.strategies = {Strategy::standard, Strategy::qec_per_qubit, Strategy::ghz_qec};
  s.normalization = Normalization::delta_omega_tau_N;
  return s;
}

SweepSpec default_qubit_count_spec() {
  SweepSpec s;
  s.axis = SweepAxis::qubit_count;
  s.grid = {2, 3, 4, 5, 6};
  s.strategies = {Strategy::ghz_qec};
  s.base.gamma = 1.0;
  s.base.r = 50;
  s.base.T = 0.5;  // gamma alpha = 0.01
  s.tau = 100.0;
  s.normalization = Normalization::delta_omega_tau_N;
  return s;
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& rows) {
  if (rows.size() < 3) throw Error(ErrorKind::DegenerateInput, "need at least 3 points, got " + std::to_string(rows.size()));
  double sx = 0, sy = 0;
  for (const auto& [x, y] : rows) {
    if (!(x > 0.0) || !(y > 0.0)) throw Error(ErrorKind::DegenerateInput, "log-log fit needs positive values");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double n = static_cast<double>(rows.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : rows) {
    sxx += (std::log(x) - mx) * (std::log(x) - mx);
    sxy += (std::log(x) - mx) * (std::log(y) - my);
  }
  if (sxx <= 0.0) throw Error(ErrorKind::DegenerateInput, "all x values are equal");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0;
  for (const auto& [x, y] : rows) {
    const double e = std::log(y) - fit.intercept - fit.slope * std::log(x);
    ssr += e * e;
  }
  fit.stderr_ = std::sqrt(ssr / (n - 2.0) / sxx);
  return fit;
}

void write_csv(const SweepResult& r, std::ostream& out) {
  out << "axis,axis_value,strategy,delta_omega,normalized,n_effective,seed\n";
  char buf[256];
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%s,%.17g,%.17g,%.17g,%llu\n", std::string(to_string(r.spec.axis)).c_str(),
                  row.axis_value, std::string(to_string(row.strategy)).c_str(), row.delta_omega, row.normalized,
                  row.n_effective, static_cast<unsigned long long>(row.seed));
    out << buf;
  }
}

std::string provenance_json(const SweepResult& r) {
  nlohmann::json j;
  j["spec"] = to_json(r.spec);
  j["rows"] = r.rows.size();
  j["csv_header"] = "axis,axis_value,strategy,delta_omega,normalized,n_effective,seed";
  return j.dump(2) + "\n";
}

}  // namespace qecm
