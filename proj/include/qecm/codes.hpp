#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "qecm/channels.hpp"
#include "qecm/linalg.hpp"

namespace qecm {

/// Orthonormal basis of a code subspace and its projector.
class CodeSpace {
 public:
  explicit CodeSpace(std::vector<StateVector> basis, const Tolerances& tol = default_tolerances());

  /// {|++>, |-->} on detector + ancilla.
  static CodeSpace two_qubit_plus();
  /// {|+>^N, |->^N}.
  static CodeSpace ghz(std::size_t num_qubits);

  std::size_t dim() const noexcept { return basis_.front().dim(); }
  std::size_t code_dim() const noexcept { return basis_.size(); }
  const std::vector<StateVector>& basis() const noexcept { return basis_; }
  const Matrix& projector() const noexcept { return projector_; }

 private:
  std::vector<StateVector> basis_;
  Matrix projector_;
};

/// |+>^N + e^{i phase} |->^N, normalized, on N qubits (N = 2 with the ancilla
/// gives the two-qubit code state).
StateVector plus_minus_superposition(std::size_t num_qubits, double relative_phase = 0.0);

struct XiResult {
  double xi = 0.0;        // max code-space variance of G, ((l_max - l_min)/2)^2
  double spread = 0.0;    // l_max - l_min of the compressed generator
  StateVector maximizer;
  std::vector<double> compressed_spectrum;
  double commutator_residual = 0.0;
};

/// Restricts G to the code (compression B^dag G B) and returns its variance
/// maximum. Works even when [G, P] != 0; the residual is reported.
XiResult compute_xi(const Matrix& g, const CodeSpace& code, const Tolerances& tol = default_tolerances());

struct ConditionReport {
  double commutator_residual = 0.0;   // ||[G, P]||_F
  Matrix a_matrix;                    // A_ij = tr(P E_i^dag E_j P) / d_C
  double condition2_residual = 0.0;   // max_ij ||P E_i^dag E_j P - A_ij P||_F
  double xi = 0.0;
  double spread = 0.0;
  StateVector xi_state;
  std::vector<double> compressed_spectrum;
  std::array<bool, 3> verdicts{};
  Tolerances tolerances;

  bool all_pass() const { return verdicts[0] && verdicts[1] && verdicts[2]; }
};

ConditionReport check_conditions(const Matrix& g, const QuantumChannel& ch, const CodeSpace& code,
                                 const Tolerances& tol = default_tolerances());

/// Human-readable report including the xi convention variants.
std::string format_report(const ConditionReport& r, const std::string& title = {});

enum class RecoveryKind { generic, two_qubit, ghz };

struct RecoveryOperation {
  std::vector<Matrix> syndrome_projectors;
  std::vector<Matrix> corrections;
  std::vector<bool> is_fail;  // true for the leftover "fail" outcome
  std::string description;
  std::vector<double> dropped_weights;  // A eigenvalues at or below diag tolerance
  RecoveryKind kind = RecoveryKind::generic;
  std::size_t num_qubits = 0;  // for the structured kinds

  std::size_t dim() const { return syndrome_projectors.front().dim(); }
};

/// Constructive recovery from conditions (1)-(2): diagonalize A, build the
/// equivalent error set, and take polar decompositions of E_k P.
/// Throws ConditionsViolated or DegenerateError (every weight dropped).
RecoveryOperation build_recovery_polar(const QuantumChannel& ch, const CodeSpace& code,
                                       const Tolerances& tol = default_tolerances());

/// Explicit syndrome circuits: X1X2 for the two-qubit code, X_i X_{i+1} for GHZ.
/// Throws BadN.
RecoveryOperation build_syndrome_recovery(RecoveryKind kind, std::size_t num_qubits);

/// sum_k C_k P_k rho P_k C_k^dag
Matrix apply_recovery(const Matrix& rho, const RecoveryOperation& rec);

/// Choi matrix of a linear map restricted to span(basis):
/// sum_ab |a><b| (x) map(|s_a><s_b|).
Matrix choi_on_subspace(const std::function<Matrix(const Matrix&)>& map, const std::vector<StateVector>& basis);

/// Orthonormal basis of code + the images of the code under each Kraus operator.
std::vector<StateVector> code_plus_error_basis(const CodeSpace& code, const QuantumChannel& ch);

}  // namespace qecm
