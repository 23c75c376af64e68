#include "qecm/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qecm/analytics.hpp"
#include "qecm/channels.hpp"
#include "qecm/pauli.hpp"

namespace qecm {

namespace {

constexpr double kStepCap = 0.01;
constexpr std::size_t kMaxExactGhz = 6;
constexpr std::size_t kMaxTrajectoryGhz = 10;

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw Error(ErrorKind::InvalidConfig, "field '" + field + "' " + why);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return std::generate_canonical<double, 53>(rng); }

// Register layout of a corrected protocol.
struct Layout {
  std::size_t qubits;
  std::vector<std::size_t> data;
};

Layout layout_for(std::size_t N) {
  Layout l;
  l.qubits = N == 1 ? 2 : N;
  for (std::size_t q = 1; q <= N; ++q) l.data.push_back(q);
  return l;
}

// Per-substep probabilities and the half-step signal phases.
struct Substep {
  std::uint64_t m = 1;
  double dephase = 0.0;
  double parallel = 0.0;
  double decay = 0.0;
  double dt = 0.0;
};

Substep substep_for(const ProtocolConfig& cfg) {
  Substep s;
  s.m = substeps_per_segment(cfg);
  const double alpha = cfg.alpha();
  const double m = static_cast<double>(s.m);
  s.dephase = cfg.gamma * alpha / m;
  s.parallel = cfg.gamma_parallel * alpha / m;
  s.decay = std::isfinite(cfg.t1) ? alpha / cfg.t1 / m : 0.0;
  s.dt = alpha / m;
  return s;
}

// Signal-frame phases of exp(-i (omega/2) dt sum_data X_q).
std::vector<cplx> signal_phases(const Layout& l, double omega, double dt) {
  const std::size_t dim = std::size_t{1} << l.qubits;
  std::vector<cplx> d(dim);
  for (std::size_t x = 0; x < dim; ++x) {
    double e = 0.0;
    for (const std::size_t q : l.data) e += (x & kernels::qubit_mask(q, l.qubits)) ? -1.0 : 1.0;
    d[x] = std::polar(1.0, -0.5 * omega * dt * e);
  }
  return d;
}

std::array<kernels::Gate, 2> decay_gates(double p) {
  return {kernels::to_signal_frame({1.0, 0.0, 0.0, std::sqrt(1.0 - p)}),
          kernels::to_signal_frame({0.0, std::sqrt(p), 0.0, 0.0})};
}

// Code word (|0...0> + |1...1>)/sqrt2 in the signal frame.
std::vector<cplx> code_word(std::size_t qubits) {
  std::vector<cplx> psi(std::size_t{1} << qubits, cplx{});
  psi.front() = psi.back() = 1.0 / std::numbers::sqrt2;
  return psi;
}

// Flip probability (1 - e^{-gamma dt})/2 per substep stays below the cap.
std::uint64_t standard_substeps(const ProtocolConfig& cfg) {
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(cfg.gamma * cfg.T / (2.0 * kStepCap))));
}

double checked_probability(double p) { return std::clamp(p, 0.0, 1.0); }

std::uint64_t sample_binomial(std::uint64_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(stream_seed(seed, 0));
  std::binomial_distribution<std::uint64_t> dist(n, checked_probability(p));
  return dist(rng);
}

// Ramsey trajectories share this driver: each repetition gets its own stream,
// counts are summed as integers so the result does not depend on scheduling.
template <class Trial>
std::uint64_t count_plus(std::uint64_t n, std::uint64_t seed, Trial trial) {
  std::uint64_t plus = 0;
  const auto reps = static_cast<std::int64_t>(n);
#pragma omp parallel for reduction(+ : plus) schedule(dynamic, 64)
  for (std::int64_t i = 0; i < reps; ++i) {
    std::mt19937_64 rng(stream_seed(seed, static_cast<std::uint64_t>(i) + 1));
    if (trial(rng)) ++plus;
  }
  return plus;
}

bool qec_trial(const ProtocolConfig& cfg, const Layout& l, const kernels::SyndromeTable& table, std::mt19937_64& rng) {
  const Substep s = substep_for(cfg);
  const auto half = signal_phases(l, cfg.omega, 0.5 * s.dt);
  const auto decay = decay_gates(s.decay);
  const double nd = static_cast<double>(l.data.size());
  auto psi = code_word(l.qubits);
  for (std::uint64_t seg = 0; seg < cfg.r; ++seg) {
    for (std::uint64_t k = 0; k < s.m; ++k) {
      kernels::sv::apply_phases(psi, half);
      // First-order collective dephasing: at most one Z per substep.
      const double u = uniform01(rng);
      if (u < nd * s.dephase) {
        const auto q = l.data[std::min(l.data.size() - 1, static_cast<std::size_t>(u / s.dephase))];
        kernels::sv::apply_pauli(psi, kernels::qubit_mask(q, l.qubits), 0);
      }
      for (const std::size_t q : l.data) {
        if (s.parallel > 0.0 && uniform01(rng) < s.parallel) {
          kernels::sv::apply_pauli(psi, 0, kernels::qubit_mask(q, l.qubits));
        }
        if (s.decay > 0.0) kernels::sv::sample_kraus_1q(psi, decay, q, uniform01(rng));
      }
      kernels::sv::apply_phases(psi, half);
    }
    const double u_sector = uniform01(rng), u_fail = uniform01(rng);
    const auto u_pauli = static_cast<std::size_t>(uniform01(rng) * 4.0 * nd);
    kernels::sv::sample_recovery(psi, table, u_sector, u_fail, cfg.p_error,
                                 std::min(u_pauli, 4 * l.data.size() - 1));
  }
  return uniform01(rng) < kernels::sv::readout_plus(psi);
}

kernels::SyndromeTable table_for(std::size_t N) { return N == 1 ? kernels::two_qubit_table() : kernels::ghz_table(N); }

void check_recovery(const ProtocolConfig& cfg, const RecoveryOperation& rec) {
  const std::size_t dim = std::size_t{1} << layout_for(cfg.N).qubits;
  if (rec.syndrome_projectors.empty() || rec.dim() != dim) {
    throw Error(ErrorKind::RecoveryDimensionMismatch,
                "recovery acts on dim " + std::to_string(rec.syndrome_projectors.empty() ? 0 : rec.dim()) +
                    ", protocol register has dim " + std::to_string(dim));
  }
}

// Decoded readout operator 1/2 (I + Z...Z) in the computational basis.
Matrix readout_operator(std::size_t qubits) {
  const Matrix zz = pauli::materialize(std::string(qubits, 'Z'));
  return 0.5 * (Matrix::identity(zz.dim()) + zz);
}

// Fills phi_hat / omega_hat / counts for a model P = 1/2 (1 + C cos(2 f Phi0)),
// Phi0 = N omega T / 2.
void estimate(EstimationResult& res, double contrast, double f, double phase_per_omega) {
  const auto& cfg = res.config;
  res.n_plus = cfg.mode == SimulationMode::exact_density ? sample_binomial(cfg.n, res.p_plus, cfg.seed) : res.n_plus;
  res.n_minus = cfg.n - res.n_plus;
  res.p_plus_hat = static_cast<double>(res.n_plus) / static_cast<double>(cfg.n);
  if (cfg.mode == SimulationMode::monte_carlo) res.p_plus = res.p_plus_hat;
  const double c = std::clamp((2.0 * res.p_plus_hat - 1.0) / contrast, -1.0, 1.0);
  res.phi_hat = std::acos(c) / (2.0 * f);
  res.omega_hat = res.phi_hat / phase_per_omega;
}

}  // namespace

std::string to_string(SimulationMode m) { return m == SimulationMode::exact_density ? "exact_density" : "monte_carlo"; }

void ProtocolConfig::validate() const {
  require(std::isfinite(omega), "omega", "must be finite");
  require(T > 0.0 && std::isfinite(T), "T", "must be positive");
  require(r >= 1, "r", "must be at least 1");
  require(gamma >= 0.0 && std::isfinite(gamma), "gamma", "must be a non-negative rate");
  require(gamma_parallel >= 0.0 && std::isfinite(gamma_parallel), "gamma_parallel", "must be a non-negative rate");
  require(t1 > 0.0, "t1", "must be positive (infinite disables relaxation)");
  require(p_error >= 0.0 && p_error <= 1.0, "p_error", "must lie in [0,1]");
  require(n >= 1, "n", "must be at least 1");
  require(N >= 1 && N <= kMaxTrajectoryGhz, "N", "must lie in 1..10");
  require(gamma * alpha() <= 1.0, "gamma", "times alpha = T/r must not exceed 1");
  require(gamma_parallel * alpha() <= 1.0, "gamma_parallel", "times alpha = T/r must not exceed 1");
  require(!std::isfinite(t1) || alpha() / t1 <= 1.0, "t1", "must be at least alpha = T/r");
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

std::uint64_t substeps_per_segment(const ProtocolConfig& cfg) {
  const double alpha = cfg.alpha();
  double worst = static_cast<double>(cfg.N) * cfg.gamma * alpha;
  worst = std::max(worst, cfg.gamma_parallel * alpha);
  if (std::isfinite(cfg.t1)) worst = std::max(worst, alpha / cfg.t1);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(worst / kStepCap - 1e-12)));
}

double mean_phase_factor(double gamma_alpha) {
  if (gamma_alpha < 1e-8) return 1.0 - gamma_alpha;
  return -std::expm1(-2.0 * gamma_alpha) / (2.0 * gamma_alpha);
}

double qec_p_plus_exact(const ProtocolConfig& cfg, kernels::Exec exec) {
  cfg.validate();
  if (cfg.N > kMaxExactGhz) throw Error(ErrorKind::InvalidConfig, "field 'N' exceeds 6 in exact_density mode");
  const Layout l = layout_for(cfg.N);
  const auto table = table_for(cfg.N);
  const Substep s = substep_for(cfg);
  const auto half = signal_phases(l, cfg.omega, 0.5 * s.dt);
  const auto decay = decay_gates(s.decay);

  std::vector<kernels::PauliBranch> dephase;
  for (const std::size_t q : l.data) dephase.push_back({kernels::qubit_mask(q, l.qubits), 0, s.dephase});

  const auto segment = [&](kernels::Density& rho, kernels::Exec ex) {
    for (std::uint64_t k = 0; k < s.m; ++k) {
      kernels::apply_phases(rho, half, ex);
      if (s.dephase > 0.0) kernels::apply_pauli_mixture(rho, dephase, ex);
      for (const std::size_t q : l.data) {
        if (s.parallel > 0.0) {
          const kernels::PauliBranch b{0, kernels::qubit_mask(q, l.qubits), s.parallel};
          kernels::apply_pauli_mixture(rho, std::span(&b, 1), ex);
        }
        if (s.decay > 0.0) kernels::apply_kraus_1q(rho, decay, q, ex);
      }
      kernels::apply_phases(rho, half, ex);
    }
    kernels::apply_recovery(rho, table, cfg.p_error, ex);
  };

  auto rho = kernels::Density::pure(code_word(l.qubits));
  const double d2 = std::pow(2.0, 2.0 * static_cast<double>(l.qubits));
  const double ops = static_cast<double>(s.m) * (3.0 + 2.0 * static_cast<double>(l.data.size()));
  const double iterate_cost = static_cast<double>(cfg.r) * ops * d2;
  const double power_cost = d2 * ops * d2 + 2.0 * std::log2(static_cast<double>(cfg.r) + 1.0) * d2 * d2 * std::sqrt(d2);
  if (cfg.r <= 2 || iterate_cost <= power_cost || d2 > 4096) {
    for (std::uint64_t seg = 0; seg < cfg.r; ++seg) segment(rho, exec);
  } else {
    const Matrix sup = kernels::superoperator(l.qubits, [&](kernels::Density& d) { segment(d, kernels::Exec::serial); });
    kernels::apply_superoperator(kernels::matrix_power(sup, cfg.r), rho);
  }
  return kernels::readout_plus(rho);
}

double qec_p_plus_reference(const ProtocolConfig& cfg, const RecoveryOperation& rec) {
  cfg.validate();
  check_recovery(cfg, rec);
  const Layout l = layout_for(cfg.N);
  const Substep s = substep_for(cfg);
  const std::size_t dim = std::size_t{1} << l.qubits;

  Matrix g(dim);
  for (const std::size_t q : l.data) g += pauli::materialize(pauli::on_site('X', q, l.qubits));
  const Matrix u_half = unitary_evolution(0.5 * cfg.omega * g, 0.5 * s.dt);
  const Matrix u_half_dag = adjoint(u_half);

  std::vector<QuantumChannel> noise;
  if (s.dephase > 0.0) {
    noise.push_back(cfg.N == 1 ? dephasing_channel(s.dephase, 1, l.qubits)
                               : collective_dephasing_first_order(s.dephase, cfg.N));
  }
  for (const std::size_t q : l.data) {
    if (s.parallel > 0.0) noise.push_back(pauli_flip_channel('X', s.parallel, q, l.qubits));
    if (s.decay > 0.0) noise.push_back(spontaneous_emission_channel(s.decay, q, l.qubits));
  }

  std::vector<std::vector<Matrix>> twirl;  // {I,X,Y,Z} on each data qubit
  for (const std::size_t q : l.data) {
    std::vector<Matrix> k;
    for (const char c : std::string("IXYZ")) k.push_back(0.5 * pauli::materialize(pauli::on_site(c, q, l.qubits)));
    twirl.push_back(std::move(k));
  }

  Matrix rho = outer(plus_minus_superposition(l.qubits).amplitudes(), plus_minus_superposition(l.qubits).amplitudes());
  for (std::uint64_t seg = 0; seg < cfg.r; ++seg) {
    for (std::uint64_t k = 0; k < s.m; ++k) {
      rho = matmul_serial(matmul_serial(u_half, rho), u_half_dag);
      for (const auto& ch : noise) rho = apply_kraus_serial(rho, ch.kraus());
      rho = matmul_serial(matmul_serial(u_half, rho), u_half_dag);
    }
    Matrix next = apply_recovery(rho, rec);
    if (cfg.p_error > 0.0) {
      Matrix projected(dim);
      for (const auto& p : rec.syndrome_projectors) projected += matmul_serial(matmul_serial(p, rho), p);
      next *= 1.0 - cfg.p_error;
      for (const auto& k : twirl) {
        next += (cfg.p_error / static_cast<double>(twirl.size())) * apply_kraus_serial(projected, k);
      }
    }
    rho = std::move(next);
  }
  return trace(matmul_serial(readout_operator(l.qubits), rho)).real();
}

double standard_p_plus_exact(const ProtocolConfig& cfg) {
  cfg.validate();
  // One qubit, signal and dephasing both along Z; each substep flips with
  // (1 - e^{-2 gamma dt}) / 2 so the coherence decays as e^{-gamma T}.
  const auto m = standard_substeps(cfg);
  const double dt = cfg.T / static_cast<double>(m);
  const double flip = -0.5 * std::expm1(-cfg.gamma * dt);
  const std::array<cplx, 2> phase{std::polar(1.0, -0.25 * cfg.omega * dt), std::polar(1.0, 0.25 * cfg.omega * dt)};
  const std::array<cplx, 2> plus{1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
  auto rho = kernels::Density::pure(plus);
  const kernels::PauliBranch z{0, 1, flip};
  for (std::uint64_t k = 0; k < m; ++k) {
    kernels::apply_phases(rho, phase, kernels::Exec::serial);
    if (flip > 0.0) kernels::apply_pauli_mixture(rho, std::span(&z, 1), kernels::Exec::serial);
    kernels::apply_phases(rho, phase, kernels::Exec::serial);
  }
  return kernels::readout_plus(rho);
}

EstimationResult run_standard_ramsey(const ProtocolConfig& cfg) {
  cfg.validate();
  if (cfg.N != 1) throw Error(ErrorKind::InvalidConfig, "field 'N' must be 1 for standard Ramsey");
  if (cfg.r != 1) throw Error(ErrorKind::InvalidConfig, "field 'r' must be 1 for standard Ramsey");
  EstimationResult res;
  res.protocol = "standard_ramsey";
  res.config = cfg;
  const double contrast = std::exp(-cfg.gamma * cfg.T);
  if (cfg.mode == SimulationMode::exact_density) {
    res.p_plus = standard_p_plus_exact(cfg);
    const double h = 1e-5 / cfg.T;
    ProtocolConfig lo = cfg, hi = cfg;
    lo.omega -= h;
    hi.omega += h;
    res.slope = (standard_p_plus_exact(hi) - standard_p_plus_exact(lo)) / (2.0 * h);
  } else {
    const auto m = standard_substeps(cfg);
    const double dt = cfg.T / static_cast<double>(m);
    const double flip = -0.5 * std::expm1(-cfg.gamma * dt);
    res.n_plus = count_plus(cfg.n, cfg.seed, [&](std::mt19937_64& rng) {
      // Phase of |0> relative to |1>; each Z flip negates the |1> amplitude.
      double sign = 1.0;
      for (std::uint64_t k = 0; k < m; ++k)
        if (uniform01(rng) < flip) sign = -sign;
      const double p = 0.5 * (1.0 + sign * std::cos(cfg.omega * cfg.T));
      return uniform01(rng) < p;
    });
    res.slope = -0.5 * contrast * cfg.T * std::sin(cfg.omega * cfg.T);
  }
  // P = 1/2 (1 + C cos(2 Phi)), Phi = omega T / 2.
  estimate(res, contrast, 1.0, 0.5 * cfg.T);
  res.delta_omega = analytics::error_propagation(res.p_plus, res.slope, static_cast<double>(cfg.n));
  return res;
}

namespace {

EstimationResult run_corrected(const ProtocolConfig& cfg, const RecoveryOperation& rec, const char* name) {
  check_recovery(cfg, rec);
  EstimationResult res;
  res.protocol = name;
  res.config = cfg;
  const double p_r = cfg.gamma * cfg.alpha();
  const double f = analytics::f_factor(p_r, cfg.r);
  res.calibration_valid = p_r <= 0.2 && std::isfinite(f) && f > 0.0;
  res.calibration = res.calibration_valid ? f : mean_phase_factor(p_r);
  const double phase_per_omega = 0.5 * static_cast<double>(cfg.N) * cfg.T;
  const bool structured = rec.kind != RecoveryKind::generic;

  const auto exact = [&](const ProtocolConfig& c) {
    return structured ? qec_p_plus_exact(c) : qec_p_plus_reference(c, rec);
  };
  if (cfg.mode == SimulationMode::exact_density) {
    res.p_plus = exact(cfg);
    const double h = 1e-5 / phase_per_omega;
    ProtocolConfig lo = cfg, hi = cfg;
    lo.omega -= h;
    hi.omega += h;
    res.slope = (exact(hi) - exact(lo)) / (2.0 * h);
  } else {
    if (!structured) throw Error(ErrorKind::InvalidConfig, "monte_carlo mode needs a syndrome-circuit recovery");
    const Layout l = layout_for(cfg.N);
    const auto table = table_for(cfg.N);
    res.n_plus = count_plus(cfg.n, cfg.seed, [&](std::mt19937_64& rng) { return qec_trial(cfg, l, table, rng); });
    const double phi0 = phase_per_omega * cfg.omega;
    res.slope = -0.5 * std::sin(2.0 * res.calibration * phi0) * 2.0 * res.calibration * phase_per_omega;
  }
  estimate(res, 1.0, res.calibration, phase_per_omega);
  res.delta_omega = analytics::error_propagation(res.p_plus, res.slope, static_cast<double>(cfg.n));
  return res;
}

}  // namespace

EstimationResult run_qec_ramsey(const ProtocolConfig& cfg, const RecoveryOperation& rec) {
  cfg.validate();
  if (cfg.N != 1) throw Error(ErrorKind::InvalidConfig, "field 'N' must be 1 for the two-qubit code");
  return run_corrected(cfg, rec, "qec_ramsey");
}

EstimationResult run_ghz_qec(const ProtocolConfig& cfg, const RecoveryOperation& rec) {
  cfg.validate();
  if (cfg.N < 2) throw Error(ErrorKind::InvalidConfig, "field 'N' must be at least 2 for the GHZ code");
  if (cfg.mode == SimulationMode::exact_density && cfg.N > kMaxExactGhz) {
    throw Error(ErrorKind::InvalidConfig, "field 'N' exceeds 6 in exact_density mode");
  }
  return run_corrected(cfg, rec, "ghz_qec");
}

TrajectorySample sample_error_trajectory(double phi0, double p_r, std::uint64_t r, std::mt19937_64& rng,
                                         double alpha) {
  TrajectorySample s;
  const double w = phi0 / (static_cast<double>(r) * alpha);
  s.phi = phi0;
  for (std::uint64_t seg = 0; seg < r; ++seg) {
    if (uniform01(rng) >= p_r) continue;
    const double t = alpha * (1.0 - uniform01(rng));  // (0, alpha]
    s.error_times.push_back(t);
    s.segments.push_back(seg);
    s.phi -= 2.0 * w * (alpha - t);
  }
  s.k = s.error_times.size();
  return s;
}

}  // namespace qecm
