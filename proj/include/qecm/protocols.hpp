#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "qecm/codes.hpp"
#include "qecm/kernels.hpp"

namespace qecm {

enum class SimulationMode { exact_density, monte_carlo };

struct ProtocolConfig {
  double omega = 0.0;           // signal angular frequency
  double T = 1.0;               // interrogation time
  std::uint64_t r = 1;          // recovery steps per run; alpha = T / r
  double gamma = 0.0;           // perpendicular dephasing rate
  double gamma_parallel = 0.0;  // dephasing rate along the signal axis
  double t1 = std::numeric_limits<double>::infinity();
  double p_error = 0.0;         // recovery failure probability per step
  std::uint64_t n = 1;          // repetitions
  std::size_t N = 1;            // 1: detector + ancilla code, >= 2: GHZ
  std::uint64_t seed = 0xD1CE;
  SimulationMode mode = SimulationMode::exact_density;

  double alpha() const { return T / static_cast<double>(r); }
  /// Throws InvalidConfig naming the offending field.
  void validate() const;
};

std::string to_string(SimulationMode m);

struct EstimationResult {
  std::string protocol;
  double p_plus_hat = 0.0;    // observed +1 frequency
  double p_plus = 0.0;        // exact model probability (exact mode), else p_plus_hat
  double phi_hat = 0.0;       // half the relative code-word phase
  double omega_hat = 0.0;
  double delta_omega = 0.0;   // error propagation at the configured omega
  double slope = 0.0;         // dP/d omega used for delta_omega
  double calibration = 1.0;   // f used to undo the phase shrinkage
  bool calibration_valid = true;
  std::uint64_t n_plus = 0;
  std::uint64_t n_minus = 0;
  ProtocolConfig config;
};

/// Phase-free Ramsey: |+> under (omega/2) Z with Z dephasing, contrast e^{-gamma T}.
EstimationResult run_standard_ramsey(const ProtocolConfig& cfg);
/// Detector + ancilla code, N = 1.
EstimationResult run_qec_ramsey(const ProtocolConfig& cfg, const RecoveryOperation& rec);
/// GHZ code, N >= 2.
EstimationResult run_ghz_qec(const ProtocolConfig& cfg, const RecoveryOperation& rec);

/// Exact P+ of the corrected protocol via the signal-frame kernels
/// (N = 1 uses the detector + ancilla register).
double qec_p_plus_exact(const ProtocolConfig& cfg, kernels::Exec exec = kernels::Exec::parallel);
/// Same quantity by dense serial matrices in the computational basis with
/// the given recovery. Slow; kept as the reference implementation.
double qec_p_plus_reference(const ProtocolConfig& cfg, const RecoveryOperation& rec);
/// Exact P+ of standard Ramsey.
double standard_p_plus_exact(const ProtocolConfig& cfg);
/// Fraction of omega T retained per segment by the corrected protocol on
/// average, (1 - e^{-2 gamma alpha}) / (2 gamma alpha); locates the fringe.
double mean_phase_factor(double gamma_alpha);

/// Substeps per segment so that each substep carries probability <= 0.01.
std::uint64_t substeps_per_segment(const ProtocolConfig& cfg);

/// 64-bit stream seed for repetition `index` (splitmix64 of seed and index).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

struct TrajectorySample {
  std::size_t k = 0;                    // error count
  std::vector<double> error_times;      // each in (0, alpha]
  std::vector<std::size_t> segments;    // segment index of each error
  double phi = 0.0;
};

/// Error-time trajectory of the analytic model: per segment an error with
/// probability p_r at a uniform time in (0, alpha]; each lowers the phase by
/// 2 w (alpha - t) with w = phi0 / (r alpha).
TrajectorySample sample_error_trajectory(double phi0, double p_r, std::uint64_t r, std::mt19937_64& rng,
                                         double alpha = 1.0);

}  // namespace qecm
