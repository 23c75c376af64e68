#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qecm/error.hpp"
#include "qecm/tolerances.hpp"

namespace qecm {

using cplx = std::complex<double>;

/// Dense dim x dim complex matrix, row-major. Used for generators, Kraus
/// operators, projectors and density operators alike.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim);
  Matrix(std::size_t dim, std::vector<cplx> entries);

  static Matrix identity(std::size_t dim);
  static Matrix diagonal(std::span<const cplx> diag);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(cplx s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(cplx s, Matrix a);
/// Matrix product (OpenMP row-parallel).
Matrix operator*(const Matrix& a, const Matrix& b);

/// Row-parallel product; identical result to matmul_serial.
Matrix matmul(const Matrix& a, const Matrix& b);
/// Plain triple loop, kept as the reference for matmul.
Matrix matmul_serial(const Matrix& a, const Matrix& b);

Matrix adjoint(const Matrix& m);
cplx trace(const Matrix& m);
double frobenius_norm(const Matrix& m);
/// max_ij |M_ij - conj(M_ji)|
double hermiticity_error(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol = default_tolerances().herm);
bool is_projector(const Matrix& m, double tol = default_tolerances().proj);
bool is_unitary(const Matrix& m, double tol);
Matrix commutator(const Matrix& a, const Matrix& b);

/// Kronecker product; entry (i*dB+k, j*dB+l) = A_ij B_kl.
Matrix kron(const Matrix& a, const Matrix& b, std::size_t max_dim = default_tolerances().max_dim);

class StateVector {
 public:
  StateVector() = default;
  /// Throws InvalidConfig if the amplitudes are not unit-norm within tol.
  explicit StateVector(std::vector<cplx> amplitudes, double tol = default_tolerances().norm);
  /// Normalizes the input; throws InvalidConfig on a zero vector.
  static StateVector normalized(std::vector<cplx> amplitudes);
  static StateVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amps_.size(); }
  const cplx& operator[](std::size_t i) const noexcept { return amps_[i]; }
  std::span<const cplx> amplitudes() const noexcept { return amps_; }

 private:
  std::vector<cplx> amps_;
};

cplx inner(std::span<const cplx> a, std::span<const cplx> b);  // <a|b>
std::vector<cplx> apply(const Matrix& m, std::span<const cplx> v);
Matrix outer(std::span<const cplx> a, std::span<const cplx> b);  // |a><b|
StateVector kron(const StateVector& a, const StateVector& b);

/// Unit-trace Hermitian PSD matrix.
class DensityOperator {
 public:
  DensityOperator() = default;
  /// Validates hermiticity, unit trace and eigenvalues >= -psd.
  explicit DensityOperator(Matrix m, const Tolerances& tol = default_tolerances());
  static DensityOperator pure(const StateVector& psi);
  /// Skips validation; for results of trace-preserving maps.
  static DensityOperator unchecked(Matrix m);

  std::size_t dim() const noexcept { return m_.dim(); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

double fidelity_pure(const StateVector& psi, const Matrix& rho);  // <psi|rho|psi>

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k is the eigenvector of values[k]
};

/// Cyclic complex Jacobi diagonalization.
/// Throws NotHermitian or NoConvergence.
EigenDecomposition hermitian_eig(const Matrix& m, const Tolerances& tol = default_tolerances());

/// Principal square root of a PSD matrix. Eigenvalues in [-psd, 0) are
/// clamped to zero; anything lower throws NotPSD.
Matrix psd_sqrt(const Matrix& m, const Tolerances& tol = default_tolerances());

/// exp(-i t H) for Hermitian H.
Matrix unitary_evolution(const Matrix& h, double t, const Tolerances& tol = default_tolerances());

}  // namespace qecm
