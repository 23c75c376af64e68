#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace qecm::analytics {

/// First and second moment of the accumulated phase after r corrected segments.
struct PhaseMoments {
  double mean = 0.0;
  double second_moment = 0.0;
  double f_factor = 1.0;
  double p_r = 0.0;
  std::size_t r = 1;
  double phi0 = 0.0;
};

/// Closed forms with the second-moment bracket (1/r)(3/4 p - p^2) as printed.
PhaseMoments phase_moments(double phi0, double p_r, std::size_t r);

/// Same model, second moment integrated directly:
/// E[Phi^2] = [(1-p)^2 + (1/r)(4/3 p - p^2)] Phi0^2.
PhaseMoments phase_moments_rederived(double phi0, double p_r, std::size_t r);

/// f(p_r) from the printed bracket; phase-independent.
double f_factor(double p_r, std::size_t r);

struct FringeValue {
  double value = 1.0;
  bool approximate = true;  // false once f |phi0| > 0.5
};

/// 1/2 (1 + cos 2 f phi0).
FringeValue p_plus_analytic(double phi0, double p_r, std::size_t r);

enum class Formula { ramsey_ideal, ramsey_noisy, qec_r_steps, qec_max, heisenberg, delta_phi };

std::optional<Formula> parse_formula(std::string_view name);
std::string_view to_string(Formula f);

/// Named parameters: T, n, tau, gamma, r, N, p_r. Missing or non-positive
/// required entries throw MissingParam.
using Params = std::map<std::string, double, std::less<>>;

/// ramsey_ideal  1/(T sqrt n)
/// ramsey_noisy  sqrt(gamma/tau)
/// qec_r_steps   sqrt(gamma/(r tau))
/// qec_max       1/tau
/// heisenberg    1/(N tau)
/// delta_phi     1/(f(p_r) sqrt n)
double sensitivity(Formula f, const Params& params);

struct RamseyAnalytic {
  double p_plus = 0.0;
  double delta_omega = 0.0;  // error propagation at mid-fringe
};

/// p_plus = 1/2 (1 + e^{-gamma T} cos omega T);
/// delta_omega = e^{gamma T} / (T sqrt n).
RamseyAnalytic standard_ramsey_analytic(double T, double gamma, double omega, double n);

/// sqrt(P(1-P)) / |dP/dx| / sqrt(n). Infinite if the slope vanishes.
double error_propagation(double p_plus, double slope, double n);

}  // namespace qecm::analytics
