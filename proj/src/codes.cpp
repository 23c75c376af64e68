#include "qecm/codes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qecm/pauli.hpp"

namespace qecm {

namespace {

std::vector<cplx> column(const Matrix& m, std::size_t k) {
  std::vector<cplx> v(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) v[i] = m(i, k);
  return v;
}

// Orthonormal basis of the range of a projector (eigenvalue ~1 eigenvectors).
std::vector<std::vector<cplx>> range_basis(const Matrix& projector, const Tolerances& tol) {
  const auto eig = hermitian_eig(projector, tol);
  std::vector<std::vector<cplx>> out;
  for (std::size_t k = 0; k < eig.values.size(); ++k)
    if (eig.values[k] > 0.5) out.push_back(column(eig.vectors, k));
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

StateVector plus_or_minus_product(std::size_t n, bool minus) {
  const std::size_t dim = std::size_t{1} << n;
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<cplx> v(dim);
  for (std::size_t x = 0; x < dim; ++x) v[x] = (minus && (std::popcount(x) & 1)) ? -amp : amp;
  return StateVector(std::move(v), 1e-12);
}

}  // namespace

CodeSpace::CodeSpace(std::vector<StateVector> basis, const Tolerances& tol) : basis_(std::move(basis)) {
  if (basis_.empty()) throw Error(ErrorKind::EmptyCode, "code basis is empty");
  const std::size_t dim = basis_.front().dim();
  for (const auto& b : basis_) {
    if (b.dim() != dim) throw Error(ErrorKind::DimensionMismatch, "code basis vectors differ in dim");
  }
  if (basis_.size() > dim) throw Error(ErrorKind::InvalidConfig, "more basis vectors than the ambient dim");
  for (std::size_t a = 0; a < basis_.size(); ++a)
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      const cplx g = inner(basis_[a].amplitudes(), basis_[b].amplitudes());
      if (std::abs(g - (a == b ? 1.0 : 0.0)) > tol.norm) {
        throw Error(ErrorKind::InvalidConfig, "code basis is not orthonormal (Gram entry " + std::to_string(a) +
                                                  "," + std::to_string(b) + ")");
      }
    }
  projector_ = Matrix(dim);
  for (const auto& b : basis_) projector_ += outer(b.amplitudes(), b.amplitudes());
}

CodeSpace CodeSpace::two_qubit_plus() { return ghz(2); }

CodeSpace CodeSpace::ghz(std::size_t num_qubits) {
  if (num_qubits < 1 || num_qubits > 10) throw Error(ErrorKind::BadN, "GHZ code needs 1 <= N <= 10");
  return CodeSpace({plus_or_minus_product(num_qubits, false), plus_or_minus_product(num_qubits, true)});
}

StateVector plus_minus_superposition(std::size_t num_qubits, double relative_phase) {
  const auto p = plus_or_minus_product(num_qubits, false);
  const auto m = plus_or_minus_product(num_qubits, true);
  const cplx ph = std::polar(1.0, relative_phase);
  std::vector<cplx> v(p.dim());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (p[i] + ph * m[i]) / std::sqrt(2.0);
  return StateVector(std::move(v), 1e-12);
}

XiResult compute_xi(const Matrix& g, const CodeSpace& code, const Tolerances& tol) {
  if (g.dim() != code.dim()) throw Error(ErrorKind::DimensionMismatch, "generator vs code dim");
  if (!is_hermitian(g, tol.herm)) throw Error(ErrorKind::NotHermitian, "generator");
  const std::size_t d = code.code_dim();
  XiResult r;
  r.commutator_residual = frobenius_norm(commutator(g, code.projector()));

  Matrix compressed(d);
  for (std::size_t a = 0; a < d; ++a) {
    const auto gb = qecm::apply(g, code.basis()[a].amplitudes());
    for (std::size_t b = 0; b < d; ++b) compressed(b, a) = inner(code.basis()[b].amplitudes(), gb);
  }
  const auto eig = hermitian_eig(compressed, tol);
  r.compressed_spectrum = eig.values;
  r.spread = eig.values.back() - eig.values.front();
  r.xi = 0.25 * r.spread * r.spread;

  // Equal superposition of the extremal eigenvectors, mapped back to the ambient space.
  std::vector<cplx> coeffs(d);
  if (d == 1) {
    coeffs[0] = 1.0;
  } else {
    for (std::size_t a = 0; a < d; ++a) coeffs[a] = (eig.vectors(a, 0) + eig.vectors(a, d - 1)) / std::sqrt(2.0);
  }
  std::vector<cplx> psi(code.dim());
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t i = 0; i < code.dim(); ++i) psi[i] += coeffs[a] * code.basis()[a][i];
  r.maximizer = StateVector::normalized(std::move(psi));
  return r;
}

ConditionReport check_conditions(const Matrix& g, const QuantumChannel& ch, const CodeSpace& code,
                                 const Tolerances& tol) {
  if (g.dim() != code.dim() || ch.dim() != code.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "generator " + std::to_string(g.dim()) + ", channel " +
                                                  std::to_string(ch.dim()) + ", code " + std::to_string(code.dim()));
  }
  ConditionReport rep;
  rep.tolerances = tol;
  const Matrix& p = code.projector();
  const double dc = static_cast<double>(code.code_dim());
  const auto& e = ch.kraus();
  const std::size_t w = e.size();

  std::vector<Matrix> ep;  // E_j P
  for (const auto& k : e) ep.push_back(k * p);
  rep.a_matrix = Matrix(w);
  for (std::size_t i = 0; i < w; ++i) {
    const Matrix ei_dag_p = adjoint(ep[i]);  // P E_i^dag
    for (std::size_t j = 0; j < w; ++j) {
      const Matrix block = ei_dag_p * ep[j];
      const cplx aij = trace(block) / dc;
      rep.a_matrix(i, j) = aij;
      rep.condition2_residual = std::max(rep.condition2_residual, frobenius_norm(block - aij * p));
    }
  }

  const auto xi = compute_xi(g, code, tol);
  rep.commutator_residual = xi.commutator_residual;
  rep.xi = xi.xi;
  rep.spread = xi.spread;
  rep.xi_state = xi.maximizer;
  rep.compressed_spectrum = xi.compressed_spectrum;
  rep.verdicts = {rep.commutator_residual <= tol.condition, rep.condition2_residual <= tol.condition,
                  rep.xi > tol.condition};
  return rep;
}

std::string format_report(const ConditionReport& r, const std::string& title) {
  std::ostringstream os;
  auto verdict = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  if (!title.empty()) os << title << "\n";
  os << "condition (1) [G,P] = 0        residual " << fmt(r.commutator_residual) << "  "
     << verdict(r.verdicts[0]) << "\n";
  os << "condition (2) P Ei^ Ej P = Aij P residual " << fmt(r.condition2_residual) << "  "
     << verdict(r.verdicts[1]) << "\n";
  os << "condition (3) xi > 0           xi " << fmt(r.xi) << "  " << verdict(r.verdicts[2]) << "\n";
  os << "A matrix (" << r.a_matrix.dim() << "x" << r.a_matrix.dim() << "):\n";
  for (std::size_t i = 0; i < r.a_matrix.dim(); ++i) {
    os << "  ";
    for (std::size_t j = 0; j < r.a_matrix.dim(); ++j) {
      const cplx a = r.a_matrix(i, j);
      os << (j ? "  " : "") << fmt(a.real());
      if (a.imag() != 0.0) os << (a.imag() < 0 ? "-" : "+") << fmt(std::abs(a.imag())) << "i";
    }
    os << "\n";
  }
  os << "compressed generator spectrum:";
  for (double l : r.compressed_spectrum) os << " " << fmt(l);
  os << "\n";
  os << "xi conventions: variance max = (spread/2)^2 = " << fmt(r.xi) << ", spread = " << fmt(r.spread)
     << ", spread^2 = " << fmt(r.spread * r.spread) << "\n";
  os << "note: published figures for these codes (xi = 2 for the two-qubit code, xi = (2N)^2 for GHZ) do not\n"
        "      follow from the variance definition under a single convention; the literal variance maximum is\n"
        "      reported above (1 and N^2 respectively), with spread-based variants for comparison.\n";
  return os.str();
}

RecoveryOperation build_recovery_polar(const QuantumChannel& ch, const CodeSpace& code, const Tolerances& tol) {
  if (ch.dim() != code.dim()) throw Error(ErrorKind::DimensionMismatch, "channel vs code dim");
  const std::size_t dim = code.dim();
  const Matrix& p = code.projector();
  const double dc = static_cast<double>(code.code_dim());
  const auto& e = ch.kraus();
  const std::size_t w = e.size();

  std::vector<Matrix> ep;
  for (const auto& k : e) ep.push_back(k * p);
  Matrix a(w);
  double residual = 0.0;
  for (std::size_t i = 0; i < w; ++i)
    for (std::size_t j = 0; j < w; ++j) {
      const Matrix block = adjoint(ep[i]) * ep[j];
      a(i, j) = trace(block) / dc;
      residual = std::max(residual, frobenius_norm(block - a(i, j) * p));
    }
  if (residual > tol.condition) {
    throw Error(ErrorKind::ConditionsViolated, "condition (2) residual " + std::to_string(residual));
  }

  // Descending eigenvalues; each eigenvector's largest component made real positive.
  auto eig = hermitian_eig(a, tol);
  std::vector<std::size_t> order(w);
  for (std::size_t k = 0; k < w; ++k) order[k] = w - 1 - k;
  Matrix u(w);
  std::vector<double> weights(w);
  for (std::size_t k = 0; k < w; ++k) {
    const std::size_t src = order[k];
    weights[k] = eig.values[src];
    std::size_t arg = 0;
    for (std::size_t i = 1; i < w; ++i)
      if (std::abs(eig.vectors(i, src)) > std::abs(eig.vectors(arg, src)) + 1e-14) arg = i;
    const cplx ph = std::conj(eig.vectors(arg, src)) / std::abs(eig.vectors(arg, src));
    for (std::size_t i = 0; i < w; ++i) u(i, k) = eig.vectors(i, src) * ph;
  }

  const auto code_vecs = range_basis(p, tol);
  const auto code_complement = range_basis(Matrix::identity(dim) - p, tol);

  RecoveryOperation rec;
  rec.kind = RecoveryKind::generic;
  Matrix covered(dim);
  for (std::size_t k = 0; k < w; ++k) {
    if (weights[k] <= tol.diag) {
      rec.dropped_weights.push_back(weights[k]);
      continue;
    }
    Matrix ek(dim);
    for (std::size_t i = 0; i < w; ++i) ek += u(i, k) * e[i];
    const Matrix ekp = ek * p;
    const Matrix s = psd_sqrt(adjoint(ekp) * ekp, tol);
    const double root = std::sqrt(weights[k]);
    if (frobenius_norm(s - root * p) > 1e-7 * std::max(1.0, root)) {
      throw Error(ErrorKind::ConditionsViolated, "polar factor of error " + std::to_string(k) + " is not sqrt(d) P");
    }
    const Matrix isometry = (1.0 / root) * ekp;  // code -> error subspace
    const Matrix pk = isometry * adjoint(isometry);

    // Unitary extension: code basis -> isometry image, complement -> complement.
    Matrix unitary(dim);
    for (const auto& v : code_vecs) unitary += outer(qecm::apply(isometry, v), v);
    const auto target_complement = range_basis(Matrix::identity(dim) - pk, tol);
    for (std::size_t j = 0; j < code_complement.size() && j < target_complement.size(); ++j) {
      unitary += outer(target_complement[j], code_complement[j]);
    }
    rec.syndrome_projectors.push_back(pk);
    rec.corrections.push_back(adjoint(unitary));
    rec.is_fail.push_back(false);
    covered += pk;
  }
  if (rec.syndrome_projectors.empty()) {
    throw Error(ErrorKind::DegenerateError, "every A eigenvalue is below the diag tolerance");
  }
  const Matrix leftover = Matrix::identity(dim) - covered;
  if (frobenius_norm(leftover) > 1e-9) {
    rec.syndrome_projectors.push_back(leftover);
    rec.corrections.push_back(Matrix::identity(dim));
    rec.is_fail.push_back(true);
  }
  rec.description = "polar-decomposition recovery: " + std::to_string(rec.syndrome_projectors.size()) +
                    " outcomes (" + std::to_string(rec.dropped_weights.size()) + " dropped error weights)";
  return rec;
}

namespace {

// Projector onto the X-basis product states |x~> = H^N |x> with x in `xs`.
Matrix x_basis_projector(const std::vector<std::size_t>& xs, std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  Matrix m(dim);
  const double norm = 1.0 / static_cast<double>(dim);
  for (std::size_t x : xs)
    for (std::size_t i = 0; i < dim; ++i) {
      const double si = (std::popcount(x & i) & 1) ? -1.0 : 1.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double sj = (std::popcount(x & j) & 1) ? -1.0 : 1.0;
        m(i, j) += si * sj * norm;
      }
    }
  return m;
}

// Bit (i-1) set when X_i X_{i+1} reads -1 on the X-basis string x
// (bit (n-q) of x set means qubit q is |->).
std::size_t syndrome_of(std::size_t x, std::size_t n) {
  std::size_t s = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t a = (x >> (n - i)) & 1, b = (x >> (n - i - 1)) & 1;
    if (a ^ b) s |= std::size_t{1} << (i - 1);
  }
  return s;
}

}  // namespace

RecoveryOperation build_syndrome_recovery(RecoveryKind kind, std::size_t num_qubits) {
  RecoveryOperation rec;
  rec.kind = kind;
  rec.num_qubits = num_qubits;
  if (kind == RecoveryKind::two_qubit) {
    if (num_qubits != 2) throw Error(ErrorKind::BadN, "two_qubit recovery is fixed to N = 2");
    const Matrix xx = pauli::materialize("XX");
    const Matrix id = Matrix::identity(4);
    rec.syndrome_projectors = {0.5 * (id + xx), 0.5 * (id - xx)};
    rec.corrections = {id, pauli::materialize("ZI")};
    rec.is_fail = {false, false};
    rec.description = "measure X1X2; outcome -1 -> Z1 (undoes the detector phase flip), +1 -> no action";
    return rec;
  }
  if (kind != RecoveryKind::ghz) throw Error(ErrorKind::InvalidConfig, "generic recovery has no syndrome circuit");
  if (num_qubits < 2 || num_qubits > 10) throw Error(ErrorKind::BadN, "GHZ recovery needs 2 <= N <= 10");
  const std::size_t n = num_qubits;
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t all = dim - 1;

  // Sector 0: no error. Sector j: single Z_j (first site wins if patterns coincide, N = 2).
  std::vector<std::size_t> patterns{0};
  std::vector<std::string> fixes{std::string(n, 'I')};
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t flipped = std::size_t{1} << (n - j);
    const std::size_t s = syndrome_of(flipped, n);
    if (std::find(patterns.begin(), patterns.end(), s) != patterns.end()) continue;
    patterns.push_back(s);
    fixes.push_back(pauli::on_site('Z', j, n));
  }
  Matrix covered(dim);
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    std::vector<std::size_t> xs;
    for (std::size_t x = 0; x <= all; ++x)
      if (syndrome_of(x, n) == patterns[k]) xs.push_back(x);
    Matrix proj = x_basis_projector(xs, n);
    covered += proj;
    rec.syndrome_projectors.push_back(std::move(proj));
    rec.corrections.push_back(pauli::materialize(fixes[k]));
    rec.is_fail.push_back(false);
  }
  const Matrix leftover = Matrix::identity(dim) - covered;
  if (frobenius_norm(leftover) > 1e-9) {
    rec.syndrome_projectors.push_back(leftover);
    rec.corrections.push_back(Matrix::identity(dim));
    rec.is_fail.push_back(true);
  }
  rec.description = "measure X_i X_{i+1} (i = 1.." + std::to_string(n - 1) + "); single-Z patterns -> Z_i, " +
                    "multi-error patterns -> fail";
  return rec;
}

Matrix apply_recovery(const Matrix& rho, const RecoveryOperation& rec) {
  if (rho.dim() != rec.dim()) {
    throw Error(ErrorKind::RecoveryDimensionMismatch,
                "state dim " + std::to_string(rho.dim()) + " vs recovery dim " + std::to_string(rec.dim()));
  }
  Matrix out(rho.dim());
  for (std::size_t k = 0; k < rec.syndrome_projectors.size(); ++k) {
    const Matrix kraus = rec.corrections[k] * rec.syndrome_projectors[k];
    out += kraus * rho * adjoint(kraus);
  }
  return out;
}

Matrix choi_on_subspace(const std::function<Matrix(const Matrix&)>& map, const std::vector<StateVector>& basis) {
  const std::size_t m = basis.size();
  const std::size_t dim = basis.front().dim();
  Matrix choi(m * dim);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const Matrix block = map(outer(basis[a].amplitudes(), basis[b].amplitudes()));
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) choi(a * dim + i, b * dim + j) = block(i, j);
    }
  return choi;
}

std::vector<StateVector> code_plus_error_basis(const CodeSpace& code, const QuantumChannel& ch) {
  std::vector<std::vector<cplx>> candidates;
  for (const auto& b : code.basis()) candidates.emplace_back(b.amplitudes().begin(), b.amplitudes().end());
  for (const auto& e : ch.kraus())
    for (const auto& b : code.basis()) candidates.push_back(qecm::apply(e, b.amplitudes()));
  std::vector<StateVector> out;
  for (auto v : candidates) {
    for (const auto& q : out) {
      const cplx c = inner(q.amplitudes(), v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
    }
    double n2 = 0.0;
    for (const auto& x : v) n2 += std::norm(x);
    if (n2 > 1e-18) out.push_back(StateVector::normalized(std::move(v)));
  }
  return out;
}

}  // namespace qecm
