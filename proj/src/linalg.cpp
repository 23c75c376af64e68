#include "qecm/linalg.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>

namespace qecm {

Matrix::Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

Matrix::Matrix(std::size_t dim, std::vector<cplx> entries) : dim_(dim), data_(std::move(entries)) {
  if (dim == 0 || data_.size() != dim * dim) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix of dim " + std::to_string(dim) + " needs " + std::to_string(dim * dim) +
                    " entries, got " + std::to_string(data_.size()));
  }
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const cplx> diag) {
  Matrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (other.dim_ != dim_) throw Error(ErrorKind::DimensionMismatch, "matrix sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (other.dim_ != dim_) throw Error(ErrorKind::DimensionMismatch, "matrix difference");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(cplx s, Matrix a) { return a *= s; }
Matrix operator*(const Matrix& a, const Matrix& b) { return matmul(a, b); }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "matrix product");
  const std::size_t n = a.dim();
  Matrix c(n);
  const cplx* pa = a.data().data();
  const cplx* pb = b.data().data();
  cplx* pc = c.data().data();
  // i-k-j order keeps the inner loop contiguous in both b and c.
#pragma omp parallel for schedule(static) if (n >= 64)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    cplx* row = pc + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = pa[i * n + k];
      if (aik == cplx{}) continue;
      const cplx* brow = pb + k * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix matmul_serial(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "matrix product");
  const std::size_t n = a.dim();
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s{};
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

Matrix adjoint(const Matrix& m) {
  const std::size_t n = m.dim();
  Matrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(j, i) = std::conj(m(i, j));
  return r;
}

cplx trace(const Matrix& m) {
  cplx t{};
  for (std::size_t i = 0; i < m.dim(); ++i) t += m(i, i);
  return t;
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (const auto& x : m.data()) s += std::norm(x);
  return std::sqrt(s);
}

double hermiticity_error(const Matrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

bool is_hermitian(const Matrix& m, double tol) { return hermiticity_error(m) <= tol; }

bool is_projector(const Matrix& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  return frobenius_norm(m * m - m) <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
  return frobenius_norm(adjoint(m) * m - Matrix::identity(m.dim())) <= tol;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix kron(const Matrix& a, const Matrix& b, std::size_t max_dim) {
  const std::size_t da = a.dim(), db = b.dim();
  if (da * db > max_dim) {
    throw Error(ErrorKind::DimensionOverflow,
                "kron dimension " + std::to_string(da * db) + " exceeds " + std::to_string(max_dim));
  }
  Matrix r(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) r(i * db + k, j * db + l) = aij * b(k, l);
    }
  return r;
}

StateVector::StateVector(std::vector<cplx> amplitudes, double tol) : amps_(std::move(amplitudes)) {
  if (amps_.empty()) throw Error(ErrorKind::InvalidConfig, "empty state vector");
  double n2 = 0.0;
  for (const auto& a : amps_) n2 += std::norm(a);
  if (std::abs(n2 - 1.0) > tol) {
    throw Error(ErrorKind::InvalidConfig, "state vector norm^2 = " + std::to_string(n2));
  }
}

StateVector StateVector::normalized(std::vector<cplx> amplitudes) {
  double n2 = 0.0;
  for (const auto& a : amplitudes) n2 += std::norm(a);
  if (amplitudes.empty() || n2 == 0.0) throw Error(ErrorKind::InvalidConfig, "zero state vector");
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& a : amplitudes) a *= inv;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  std::vector<cplx> v(dim);
  v.at(index) = 1.0;
  return StateVector(std::move(v));
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "inner product");
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

std::vector<cplx> apply(const Matrix& m, std::span<const cplx> v) {
  if (m.dim() != v.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  std::vector<cplx> r(v.size());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    cplx s{};
    for (std::size_t j = 0; j < m.dim(); ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

Matrix outer(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "outer product");
  Matrix r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r(i, j) = a[i] * std::conj(b[j]);
  return r;
}

StateVector kron(const StateVector& a, const StateVector& b) {
  std::vector<cplx> v(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < b.dim(); ++k) v[i * b.dim() + k] = a[i] * b[k];
  return StateVector(std::move(v), 1e-9);
}

DensityOperator::DensityOperator(Matrix m, const Tolerances& tol) : m_(std::move(m)) {
  if (!is_hermitian(m_, tol.herm)) throw Error(ErrorKind::NotHermitian, "density operator");
  const cplx t = trace(m_);
  if (std::abs(t - 1.0) > tol.trace) {
    throw Error(ErrorKind::InvalidConfig, "density operator trace " + std::to_string(t.real()));
  }
  const auto eig = hermitian_eig(m_, tol);
  if (eig.values.front() < -tol.psd) {
    throw Error(ErrorKind::NotPSD, "density operator eigenvalue " + std::to_string(eig.values.front()));
  }
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  return unchecked(outer(psi.amplitudes(), psi.amplitudes()));
}

DensityOperator DensityOperator::unchecked(Matrix m) {
  DensityOperator d;
  d.m_ = std::move(m);
  return d;
}

double fidelity_pure(const StateVector& psi, const Matrix& rho) {
  const auto r = qecm::apply(rho, psi.amplitudes());
  return inner(psi.amplitudes(), r).real();
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition hermitian_eig(const Matrix& m, const Tolerances& tol) {
  if (m.empty()) throw Error(ErrorKind::DimensionMismatch, "empty matrix");
  if (!is_hermitian(m, tol.herm)) {
    throw Error(ErrorKind::NotHermitian,
                "hermiticity error " + std::to_string(hermiticity_error(m)));
  }
  const std::size_t n = m.dim();
  // Work on the exactly Hermitian part.
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  Matrix v = Matrix::identity(n);

  const double scale = std::max(frobenius_norm(a), std::numeric_limits<double>::min());
  const double target = 1e-15 * scale;

  int sweep = 0;
  while (off_diagonal_norm(a) > target) {
    if (sweep++ >= tol.max_sweeps) {
      throw Error(ErrorKind::NoConvergence,
                  "Jacobi exceeded " + std::to_string(tol.max_sweeps) + " sweeps");
    }
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        // Skip entries already negligible against both diagonal entries.
        if (sweep > 4 && mag < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const cplx phase = apq / mag;  // e^{i theta}
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J = diag(1, e^{-i theta}) * [[c, s], [-s, c]] on the (p, q) plane.
        const cplx jpp = c, jpq = s;
        const cplx jqp = -s * std::conj(phase), jqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  EigenDecomposition out{std::vector<double>(n), Matrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

namespace {

Matrix spectral_map(const EigenDecomposition& eig, std::span<const cplx> f) {
  const std::size_t n = eig.vectors.dim();
  Matrix r(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (f[k] == cplx{}) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = eig.vectors(i, k) * f[k];
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * std::conj(eig.vectors(j, k));
    }
  }
  return r;
}

}  // namespace

Matrix psd_sqrt(const Matrix& m, const Tolerances& tol) {
  const auto eig = hermitian_eig(m, tol);
  std::vector<cplx> f(eig.values.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double lam = eig.values[k];
    if (lam < -tol.psd) throw Error(ErrorKind::NotPSD, "eigenvalue " + std::to_string(lam));
    f[k] = lam > 0.0 ? std::sqrt(lam) : 0.0;
  }
  return spectral_map(eig, f);
}

Matrix unitary_evolution(const Matrix& h, double t, const Tolerances& tol) {
  const auto eig = hermitian_eig(h, tol);
  std::vector<cplx> f(eig.values.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::polar(1.0, -t * eig.values[k]);
  return spectral_map(eig, f);
}

}  // namespace qecm
