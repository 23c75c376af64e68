#include "qecm/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qecm/error.hpp"

namespace qecm::analytics {

namespace {

PhaseMoments moments_with(double phi0, double p, std::size_t r, double first_order_coeff) {
  const double q = 1.0 - p;
  const double f2 = q * q + (first_order_coeff * p - p * p) / static_cast<double>(r);
  PhaseMoments m;
  m.mean = q * phi0;
  m.second_moment = f2 * phi0 * phi0;
  // sqrt(E[Phi^2]/phi0^2) does not depend on phi0, so phi0 = 0 uses the same limit.
  m.f_factor = std::sqrt(f2);
  m.p_r = p;
  m.r = r;
  m.phi0 = phi0;
  return m;
}

double require(const Params& params, const char* key) {
  const auto it = params.find(key);
  if (it == params.end()) throw Error(ErrorKind::MissingParam, std::string("parameter '") + key + "' is required");
  if (!(it->second > 0.0) || !std::isfinite(it->second)) {
    throw Error(ErrorKind::MissingParam, std::string("parameter '") + key + "' must be positive and finite");
  }
  return it->second;
}

}  // namespace

PhaseMoments phase_moments(double phi0, double p_r, std::size_t r) { return moments_with(phi0, p_r, r, 0.75); }

PhaseMoments phase_moments_rederived(double phi0, double p_r, std::size_t r) {
  return moments_with(phi0, p_r, r, 4.0 / 3.0);
}

double f_factor(double p_r, std::size_t r) { return phase_moments(1.0, p_r, r).f_factor; }

FringeValue p_plus_analytic(double phi0, double p_r, std::size_t r) {
  const double f = f_factor(p_r, r);
  return {0.5 * (1.0 + std::cos(2.0 * f * phi0)), f * std::abs(phi0) <= 0.5};
}

std::optional<Formula> parse_formula(std::string_view name) {
  if (name == "ramsey_ideal") return Formula::ramsey_ideal;
  if (name == "ramsey_noisy") return Formula::ramsey_noisy;
  if (name == "qec_r_steps") return Formula::qec_r_steps;
  if (name == "qec_max") return Formula::qec_max;
  if (name == "heisenberg") return Formula::heisenberg;
  if (name == "delta_phi") return Formula::delta_phi;
  return std::nullopt;
}

std::string_view to_string(Formula f) {
  switch (f) {
    case Formula::ramsey_ideal: return "ramsey_ideal";
    case Formula::ramsey_noisy: return "ramsey_noisy";
    case Formula::qec_r_steps: return "qec_r_steps";
    case Formula::qec_max: return "qec_max";
    case Formula::heisenberg: return "heisenberg";
    case Formula::delta_phi: return "delta_phi";
  }
  return "?";
}

double sensitivity(Formula f, const Params& params) {
  switch (f) {
    case Formula::ramsey_ideal: return 1.0 / (require(params, "T") * std::sqrt(require(params, "n")));
    case Formula::ramsey_noisy: return std::sqrt(require(params, "gamma") / require(params, "tau"));
    case Formula::qec_r_steps:
      return std::sqrt(require(params, "gamma") / (require(params, "r") * require(params, "tau")));
    case Formula::qec_max: return 1.0 / require(params, "tau");
    case Formula::heisenberg: return 1.0 / (require(params, "N") * require(params, "tau"));
    case Formula::delta_phi: {
      const double n = require(params, "n");
      const double r = require(params, "r");
      const auto it = params.find("p_r");
      if (it == params.end()) throw Error(ErrorKind::MissingParam, "parameter 'p_r' is required");
      if (!(it->second >= 0.0 && it->second <= 1.0)) {
        throw Error(ErrorKind::MissingParam, "parameter 'p_r' must lie in [0,1]");
      }
      return 1.0 / (f_factor(it->second, static_cast<std::size_t>(std::llround(r))) * std::sqrt(n));
    }
  }
  throw Error(ErrorKind::InvalidConfig, "unknown formula");
}

double error_propagation(double p_plus, double slope, double n) {
  if (slope == 0.0) return std::numeric_limits<double>::infinity();
  const double var = std::max(0.0, p_plus * (1.0 - p_plus));
  return std::sqrt(var) / std::abs(slope) / std::sqrt(n);
}

RamseyAnalytic standard_ramsey_analytic(double T, double gamma, double omega, double n) {
  const double contrast = std::exp(-gamma * T);
  RamseyAnalytic out;
  out.p_plus = 0.5 * (1.0 + contrast * std::cos(omega * T));
  // Mid-fringe: P = 1/2, |dP/d omega| = T e^{-gamma T} / 2.
  out.delta_omega = error_propagation(0.5, 0.5 * T * contrast, n);
  return out;
}

}  // namespace qecm::analytics
