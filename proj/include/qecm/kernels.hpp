#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qecm/linalg.hpp"

// Structured density-matrix and state-vector kernels for the Ramsey
// protocols. All of them work in the signal frame: the register basis is
// the X eigenbasis of every qubit (bit 0 = |+>, bit 1 = |->), so the
// signal (omega/2) sum X_i is a diagonal phase and a Z error is a bit flip.
// Qubit 1 is the most significant bit, as in the Pauli module.
//
// Each density kernel takes an Exec flag; Exec::parallel distributes rows
// over OpenMP threads, Exec::serial is the plain loop used for comparison.

namespace qecm::kernels {

enum class Exec { serial, parallel };

/// Row-major 2x2 operator.
using Gate = std::array<cplx, 4>;

/// H K H for a single-qubit operator K written in the computational basis.
Gate to_signal_frame(const Gate& k);

class Density {
 public:
  explicit Density(std::size_t num_qubits);
  /// |psi><psi| from signal-frame amplitudes.
  static Density pure(std::span<const cplx> psi);

  std::size_t num_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return dim_; }
  cplx& operator()(std::size_t i, std::size_t j) noexcept { return rho_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return rho_[i * dim_ + j]; }
  std::span<cplx> data() noexcept { return rho_; }
  std::span<const cplx> data() const noexcept { return rho_; }

  cplx trace() const;
  /// Same entries as a Matrix in the signal frame.
  Matrix to_matrix() const;
  static Density from_matrix(const Matrix& m);

 private:
  std::size_t n_;
  std::size_t dim_;
  std::vector<cplx> rho_;
};

/// One Pauli branch P applied with probability p: P|x> ~ (-1)^{popcount(x & sign)} |x ^ flip>.
struct PauliBranch {
  std::size_t flip = 0;
  std::size_t sign = 0;
  double p = 0.0;
};

/// Bit mask of qubit q (1-based) in an n-qubit register.
inline std::size_t qubit_mask(std::size_t q, std::size_t n) { return std::size_t{1} << (n - q); }

/// rho_ij *= d_i conj(d_j)
void apply_phases(Density& rho, std::span<const cplx> diag, Exec exec = Exec::parallel);

/// rho <- (1 - sum p) rho + sum p P rho P
void apply_pauli_mixture(Density& rho, std::span<const PauliBranch> branches, Exec exec = Exec::parallel);

/// rho <- sum_k K_k rho K_k^dag with K_k acting on `qubit`.
void apply_kraus_1q(Density& rho, std::span<const Gate> kraus, std::size_t qubit, Exec exec = Exec::parallel);

/// Syndrome sectors of a code in the signal frame.
struct SyndromeTable {
  std::size_t num_qubits = 0;
  std::vector<std::size_t> data_qubits;  // 1-based
  std::vector<int> sector;                // per basis index; -1 = fail
  std::vector<std::size_t> flip;          // correction per sector (bit mask)
};

/// Detector + ancilla: X1X2 parity; odd parity is undone by Z1 (a flip of bit 1).
SyndromeTable two_qubit_table();
/// GHZ on N qubits: parities of neighbouring bits; a single-Z pattern is undone
/// by flipping that site, every other pattern is the fail sector.
SyndromeTable ghz_table(std::size_t num_qubits);

/// Projects on the syndrome sectors and applies the corrections. With
/// probability p_error the correction is replaced by a uniformly random
/// Pauli from {I, X, Y, Z} on a uniformly random data qubit.
void apply_recovery(Density& rho, const SyndromeTable& table, double p_error, Exec exec = Exec::parallel);

/// +1 probability of the decoded readout, 1/2 (1 + <X...X>) in this frame
/// (Z...Z in the computational basis).
double readout_plus(const Density& rho);

/// Linear map on density registers as a dim^2 x dim^2 matrix acting on
/// row-major vec(rho).
Matrix superoperator(std::size_t num_qubits, const std::function<void(Density&)>& map);
void apply_superoperator(const Matrix& s, Density& rho);
/// m^k by repeated squaring.
Matrix matrix_power(Matrix m, std::uint64_t k);

// State-vector kernels for trajectory sampling. These run inside one
// trajectory; parallelism is across trajectories.
namespace sv {

void apply_phases(std::span<cplx> psi, std::span<const cplx> diag);
void apply_pauli(std::span<cplx> psi, std::size_t flip, std::size_t sign);
/// Picks branch k with probability ||K_k psi||^2 using u in [0,1),
/// applies it and renormalizes. Returns the branch index.
std::size_t sample_kraus_1q(std::span<cplx> psi, std::span<const Gate> kraus, std::size_t qubit, double u);
/// Samples a syndrome sector with u_sector, projects, then corrects. If
/// u_fail < p_error the correction is replaced by Pauli u_pauli in [0, 4*|data|).
int sample_recovery(std::span<cplx> psi, const SyndromeTable& table, double u_sector, double u_fail, double p_error,
                    std::size_t u_pauli);
double readout_plus(std::span<const cplx> psi);

}  // namespace sv

}  // namespace qecm::kernels
