#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qecm/linalg.hpp"

namespace qecm {

/// Kraus representation E(rho) = sum_k E_k rho E_k^dag.
class QuantumChannel {
 public:
  /// Validates shapes and completeness. A channel flagged first-order
  /// truncated is accepted with any residual, which is then reported as
  /// truncation_bound().
  QuantumChannel(std::vector<Matrix> kraus, std::string label, bool first_order_truncated = false,
                 const Tolerances& tol = default_tolerances());

  std::size_t dim() const noexcept { return kraus_.front().dim(); }
  const std::vector<Matrix>& kraus() const noexcept { return kraus_; }
  const std::string& label() const noexcept { return label_; }
  bool first_order_truncated() const noexcept { return truncated_; }
  double truncation_bound() const noexcept { return truncation_bound_; }
  /// ||sum_k E_k^dag E_k - I||_F
  double completeness_residual() const noexcept { return residual_; }

 private:
  std::vector<Matrix> kraus_;
  std::string label_;
  bool truncated_ = false;
  double truncation_bound_ = 0.0;
  double residual_ = 0.0;
};

double completeness_residual(const std::vector<Matrix>& kraus);

/// sqrt(1-p) I and sqrt(p) Z_qubit on N qubits (qubit is 1-based).
QuantumChannel dephasing_channel(double p, std::size_t qubit, std::size_t num_qubits);

/// Same Kraus shape with an arbitrary Pauli axis; parallel noise for an X
/// signal uses axis 'X'.
QuantumChannel pauli_flip_channel(char axis, double p, std::size_t qubit, std::size_t num_qubits);

/// E_0 = sqrt(1 - N p) I, E_i = sqrt(p) Z_i. Flagged first-order truncated.
QuantumChannel collective_dephasing_first_order(double p, std::size_t num_qubits);

/// E_0 = [[1,0],[0,sqrt(1-p)]], E_1 = [[0,sqrt(p)],[0,0]] on qubit `qubit` of N.
QuantumChannel spontaneous_emission_channel(double p, std::size_t qubit = 1, std::size_t num_qubits = 1);

QuantumChannel identity_channel(std::size_t dim);

/// Kraus operators of `second` after `first`: products F_j E_i.
QuantumChannel compose(const QuantumChannel& first, const QuantumChannel& second);

struct ChannelOutput {
  DensityOperator rho;
  /// Factor the output was divided by (1 unless the channel is truncated).
  double renormalization = 1.0;
};

ChannelOutput apply_channel(const DensityOperator& rho, const QuantumChannel& ch);

/// Unnormalized sum_k E_k rho E_k^dag. Serial reference path.
Matrix apply_kraus_serial(const Matrix& rho, const std::vector<Matrix>& kraus);
/// Same map using the parallel matrix product.
Matrix apply_kraus(const Matrix& rho, const std::vector<Matrix>& kraus);

}  // namespace qecm
