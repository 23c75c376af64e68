#include "qecm/channels.hpp"

#include <cmath>
#include <cstdio>

#include "qecm/pauli.hpp"

namespace qecm {

namespace {

constexpr std::size_t kMaxQubits = 10;

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::BadProbability, std::string(what) + " probability " + std::to_string(p) + " not in [0,1]");
  }
}

void check_site(std::size_t qubit, std::size_t n) {
  if (n < 1 || n > kMaxQubits) throw Error(ErrorKind::BadIndex, "qubit count " + std::to_string(n));
  if (qubit < 1 || qubit > n) {
    throw Error(ErrorKind::BadIndex, "qubit " + std::to_string(qubit) + " not in 1.." + std::to_string(n));
  }
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// Embeds a single-qubit operator at `qubit` (1-based, leftmost most significant).
Matrix embed(const Matrix& op, std::size_t qubit, std::size_t n) {
  Matrix m = Matrix::identity(1);
  for (std::size_t q = 1; q <= n; ++q) m = kron(m, q == qubit ? op : Matrix::identity(2));
  return m;
}

}  // namespace

double completeness_residual(const std::vector<Matrix>& kraus) {
  Matrix s(kraus.front().dim());
  for (const auto& e : kraus) s += adjoint(e) * e;
  return frobenius_norm(s - Matrix::identity(s.dim()));
}

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus, std::string label, bool first_order_truncated,
                               const Tolerances& tol)
    : kraus_(std::move(kraus)), label_(std::move(label)), truncated_(first_order_truncated) {
  if (kraus_.empty()) throw Error(ErrorKind::InvalidConfig, "channel needs at least one Kraus operator");
  for (const auto& e : kraus_) {
    if (e.dim() != kraus_.front().dim()) throw Error(ErrorKind::DimensionMismatch, "Kraus operators differ in dim");
  }
  residual_ = qecm::completeness_residual(kraus_);
  if (truncated_) {
    truncation_bound_ = residual_;
  } else if (residual_ > tol.cptp) {
    throw Error(ErrorKind::InvalidConfig,
                "channel '" + label_ + "' is not trace preserving, residual " + std::to_string(residual_));
  }
}

QuantumChannel pauli_flip_channel(char axis, double p, std::size_t qubit, std::size_t num_qubits) {
  check_probability(p, "flip");
  check_site(qubit, num_qubits);
  std::vector<Matrix> k;
  k.push_back(std::sqrt(1.0 - p) * Matrix::identity(std::size_t{1} << num_qubits));
  k.push_back(std::sqrt(p) * pauli::materialize(pauli::on_site(axis, qubit, num_qubits)));
  return QuantumChannel(std::move(k), std::string(1, axis) + "-flip(p=" + fmt(p) + ") on qubit " +
                                          std::to_string(qubit) + " of " + std::to_string(num_qubits));
}

QuantumChannel dephasing_channel(double p, std::size_t qubit, std::size_t num_qubits) {
  check_probability(p, "dephasing");
  check_site(qubit, num_qubits);
  std::vector<Matrix> k;
  k.push_back(std::sqrt(1.0 - p) * Matrix::identity(std::size_t{1} << num_qubits));
  k.push_back(std::sqrt(p) * pauli::materialize(pauli::on_site('Z', qubit, num_qubits)));
  return QuantumChannel(std::move(k), "dephasing(p=" + fmt(p) + ") on qubit " + std::to_string(qubit) + " of " +
                                          std::to_string(num_qubits));
}

QuantumChannel collective_dephasing_first_order(double p, std::size_t num_qubits) {
  check_site(1, num_qubits);
  check_probability(p, "collective dephasing");
  const double np = static_cast<double>(num_qubits) * p;
  if (np > 1.0) throw Error(ErrorKind::BadProbability, "N*p = " + std::to_string(np) + " exceeds 1");
  std::vector<Matrix> k;
  k.push_back(std::sqrt(1.0 - np) * Matrix::identity(std::size_t{1} << num_qubits));
  for (std::size_t i = 1; i <= num_qubits; ++i) {
    k.push_back(std::sqrt(p) * pauli::materialize(pauli::on_site('Z', i, num_qubits)));
  }
  // The source text writes E_i = p Z_i; completeness requires sqrt(p).
  return QuantumChannel(std::move(k),
                        "collective_dephasing_first_order(p=" + fmt(p) + ", N=" + std::to_string(num_qubits) +
                            "; literal text 'E_i = p Z_i', built with sqrt(p) Z_i)",
                        /*first_order_truncated=*/true);
}

QuantumChannel spontaneous_emission_channel(double p, std::size_t qubit, std::size_t num_qubits) {
  check_probability(p, "spontaneous emission");
  check_site(qubit, num_qubits);
  const Matrix e0(2, {1.0, 0.0, 0.0, std::sqrt(1.0 - p)});
  const Matrix e1(2, {0.0, std::sqrt(p), 0.0, 0.0});
  std::vector<Matrix> k{embed(e0, qubit, num_qubits), embed(e1, qubit, num_qubits)};
  return QuantumChannel(std::move(k), "spontaneous_emission(p=" + fmt(p) + ") on qubit " + std::to_string(qubit) +
                                          " of " + std::to_string(num_qubits));
}

QuantumChannel identity_channel(std::size_t dim) {
  return QuantumChannel({Matrix::identity(dim)}, "identity");
}

QuantumChannel compose(const QuantumChannel& first, const QuantumChannel& second) {
  if (first.dim() != second.dim()) throw Error(ErrorKind::DimensionMismatch, "channel composition");
  std::vector<Matrix> k;
  for (const auto& f : second.kraus())
    for (const auto& e : first.kraus()) k.push_back(f * e);
  return QuantumChannel(std::move(k), second.label() + " o " + first.label(),
                        first.first_order_truncated() || second.first_order_truncated());
}

Matrix apply_kraus_serial(const Matrix& rho, const std::vector<Matrix>& kraus) {
  Matrix out(rho.dim());
  for (const auto& e : kraus) out += matmul_serial(matmul_serial(e, rho), adjoint(e));
  return out;
}

Matrix apply_kraus(const Matrix& rho, const std::vector<Matrix>& kraus) {
  Matrix out(rho.dim());
  for (const auto& e : kraus) out += matmul(matmul(e, rho), adjoint(e));
  return out;
}

ChannelOutput apply_channel(const DensityOperator& rho, const QuantumChannel& ch) {
  if (rho.dim() != ch.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "state dim " + std::to_string(rho.dim()) + " vs channel dim " + std::to_string(ch.dim()));
  }
  Matrix out = apply_kraus(rho.matrix(), ch.kraus());
  double factor = 1.0;
  if (ch.first_order_truncated()) {
    factor = trace(out).real();
    if (factor > 0.0) out *= 1.0 / factor;
  }
  return {DensityOperator::unchecked(std::move(out)), factor};
}

}  // namespace qecm
