#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qecm/protocols.hpp"

namespace qecm {

enum class SweepAxis { interrogation_time, total_time, qubit_count };
enum class Strategy { noise_free, standard, qec_ideal, qec_imperfect, qec_per_qubit, ghz_qec };
enum class Normalization { delta_omega_sqrt_tau, delta_omega_tau_N };

std::string_view to_string(SweepAxis a);
std::string_view to_string(Strategy s);
std::string_view to_string(Normalization n);
std::optional<SweepAxis> parse_axis(std::string_view s);
std::optional<Strategy> parse_strategy(std::string_view s);
std::optional<Normalization> parse_normalization(std::string_view s);

struct SweepSpec {
  SweepAxis axis = SweepAxis::interrogation_time;
  std::vector<double> grid;
  std::vector<Strategy> strategies;
  ProtocolConfig base;  // gamma, t1, N, seed, ...; omega is chosen per point
  Normalization normalization = Normalization::delta_omega_sqrt_tau;

  double tau = 1e4;                   // total time for the interrogation-time axis
  double parallel_ratio = 1e-3;       // gamma_parallel / gamma for qec_imperfect
  double imperfect_p_error = 1e-3;
  double per_qubit_gamma_alpha = 0.01;  // gamma alpha of each single-qubit code
  double ghz_gamma_alpha = 5e-5;        // gamma alpha per GHZ qubit
  double max_t_over_t1 = 4.0;           // longest single run, in units of t1
  std::size_t operating_points = 7;     // omega grid around mid-fringe
};

struct SweepRow {
  double axis_value = 0.0;
  Strategy strategy = Strategy::noise_free;
  double delta_omega = 0.0;
  double normalized = 0.0;
  double n_effective = 0.0;
  std::uint64_t seed = 0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // sorted by (strategy, axis_value)

  std::vector<std::pair<double, double>> curve(Strategy s, bool normalized = true) const;
};

/// n log-spaced points per decade from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t per_decade = 24);

/// Interrogation-time sweep. noise_free and standard use the closed forms,
/// qec_ideal and qec_imperfect the exact simulation with alpha = 1/gamma.
/// qec_imperfect reports the achievable value min_{T' <= T}.
SweepResult sweep_fig2(const SweepSpec& spec);
/// Total-time sweep with t1 relaxation; every strategy reports the best
/// interrogation time T <= tau.
SweepResult sweep_figSI(const SweepSpec& spec);
/// GHZ qubit-count sweep at fixed T, r and tau.
SweepResult sweep_qubit_count(const SweepSpec& spec);
/// Dispatches on spec.axis. Throws InvalidSpec.
SweepResult run_sweep(const SweepSpec& spec);

SweepSpec default_fig2_spec();
SweepSpec default_figSI_spec();
SweepSpec default_qubit_count_spec();

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  double intercept = 0.0;
};

/// OLS on (log x, log y). Throws DegenerateInput for < 3 points, non-positive
/// values or identical x.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& rows);

/// Single-run sensitivity at the best operating point of a fringe p(omega):
/// scans omega so that 2 mu phase_per_omega omega covers (pi/4, 3pi/4) and
/// keeps the point of steepest slope. Returns delta_omega for n = 1.
struct OperatingPoint {
  double omega = 0.0;
  double p_plus = 0.0;
  double slope = 0.0;
  double delta_omega = 0.0;
};
OperatingPoint best_operating_point(const std::function<double(double)>& p_of_omega, double phase_per_omega,
                                    double mu, std::size_t points);

/// CSV header `axis,axis_value,strategy,delta_omega,normalized,n_effective,seed`.
void write_csv(const SweepResult& r, std::ostream& out);
/// Sidecar JSON echoing the full spec.
std::string provenance_json(const SweepResult& r);

}  // namespace qecm
