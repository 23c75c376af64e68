#include "qecm/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

namespace qecm::kernels {

namespace {

// Below this register dimension thread startup costs more than the loop.
constexpr std::size_t kParallelDim = 32;

inline double parity_sign(std::size_t x, std::size_t mask) { return (std::popcount(x & mask) & 1) ? -1.0 : 1.0; }

inline bool go_parallel(Exec exec, std::size_t dim) { return exec == Exec::parallel && dim >= kParallelDim; }

}  // namespace

Gate to_signal_frame(const Gate& k) {
  // H K H with H = [[1,1],[1,-1]]/sqrt2.
  const cplx a = k[0], b = k[1], c = k[2], d = k[3];
  return {0.5 * (a + b + c + d), 0.5 * (a - b + c - d), 0.5 * (a + b - c - d), 0.5 * (a - b - c + d)};
}

Density::Density(std::size_t num_qubits)
    : n_(num_qubits), dim_(std::size_t{1} << num_qubits), rho_(dim_ * dim_, cplx{}) {}

Density Density::pure(std::span<const cplx> psi) {
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(psi.size()));
  if (psi.size() != (std::size_t{1} << n)) throw Error(ErrorKind::DimensionMismatch, "register size not 2^n");
  Density d(n);
  for (std::size_t i = 0; i < d.dim_; ++i)
    for (std::size_t j = 0; j < d.dim_; ++j) d(i, j) = psi[i] * std::conj(psi[j]);
  return d;
}

cplx Density::trace() const {
  cplx t{};
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

Matrix Density::to_matrix() const { return Matrix(dim_, rho_); }

Density Density::from_matrix(const Matrix& m) {
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(m.dim()));
  if (m.dim() != (std::size_t{1} << n)) throw Error(ErrorKind::DimensionMismatch, "register size not 2^n");
  Density d(n);
  std::copy(m.data().begin(), m.data().end(), d.rho_.begin());
  return d;
}

void apply_phases(Density& rho, std::span<const cplx> diag, Exec exec) {
  const std::size_t dim = rho.dim();
  if (diag.size() != dim) throw Error(ErrorKind::DimensionMismatch, "phase vector size");
  cplx* r = rho.data().data();
#pragma omp parallel for if (go_parallel(exec, dim))
  for (std::size_t i = 0; i < dim; ++i) {
    const cplx di = diag[i];
    for (std::size_t j = 0; j < dim; ++j) r[i * dim + j] *= di * std::conj(diag[j]);
  }
}

void apply_pauli_mixture(Density& rho, std::span<const PauliBranch> branches, Exec exec) {
  const std::size_t dim = rho.dim();
  double keep = 1.0;
  for (const auto& b : branches) keep -= b.p;
  std::vector<cplx> out(dim * dim);
  const cplx* r = rho.data().data();
#pragma omp parallel for if (go_parallel(exec, dim))
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      cplx acc = keep * r[i * dim + j];
      for (const auto& b : branches) {
        const std::size_t si = i ^ b.flip, sj = j ^ b.flip;
        acc += b.p * parity_sign(si, b.sign) * parity_sign(sj, b.sign) * r[si * dim + sj];
      }
      out[i * dim + j] = acc;
    }
  }
  std::copy(out.begin(), out.end(), rho.data().begin());
}

void apply_kraus_1q(Density& rho, std::span<const Gate> kraus, std::size_t qubit, Exec exec) {
  const std::size_t dim = rho.dim();
  const std::size_t bit = qubit_mask(qubit, rho.num_qubits());
  cplx* r = rho.data().data();
#pragma omp parallel for if (go_parallel(exec, dim))
  for (std::size_t i0 = 0; i0 < dim; ++i0) {
    if (i0 & bit) continue;
    const std::size_t i1 = i0 | bit;
    for (std::size_t j0 = 0; j0 < dim; ++j0) {
      if (j0 & bit) continue;
      const std::size_t j1 = j0 | bit;
      const cplx m00 = r[i0 * dim + j0], m01 = r[i0 * dim + j1];
      const cplx m10 = r[i1 * dim + j0], m11 = r[i1 * dim + j1];
      cplx o00{}, o01{}, o10{}, o11{};
      for (const auto& k : kraus) {
        // T = K M, then T K^dag.
        const cplx t00 = k[0] * m00 + k[1] * m10, t01 = k[0] * m01 + k[1] * m11;
        const cplx t10 = k[2] * m00 + k[3] * m10, t11 = k[2] * m01 + k[3] * m11;
        const cplx c0 = std::conj(k[0]), c1 = std::conj(k[1]), c2 = std::conj(k[2]), c3 = std::conj(k[3]);
        o00 += t00 * c0 + t01 * c1;
        o01 += t00 * c2 + t01 * c3;
        o10 += t10 * c0 + t11 * c1;
        o11 += t10 * c2 + t11 * c3;
      }
      r[i0 * dim + j0] = o00;
      r[i0 * dim + j1] = o01;
      r[i1 * dim + j0] = o10;
      r[i1 * dim + j1] = o11;
    }
  }
}

SyndromeTable two_qubit_table() {
  SyndromeTable t;
  t.num_qubits = 2;
  t.data_qubits = {1};
  t.sector.resize(4);
  for (std::size_t x = 0; x < 4; ++x) t.sector[x] = std::popcount(x) & 1;
  t.flip = {0, qubit_mask(1, 2)};
  return t;
}

SyndromeTable ghz_table(std::size_t num_qubits) {
  if (num_qubits < 2 || num_qubits > 10) throw Error(ErrorKind::BadN, "ghz needs 2..10 qubits");
  const std::size_t n = num_qubits, dim = std::size_t{1} << n;
  // Neighbour parities of x: bit i set when qubits i+1 and i+2 differ.
  const auto pattern = [n](std::size_t x) {
    std::size_t s = 0;
    for (std::size_t i = 1; i < n; ++i) {
      const bool a = x & qubit_mask(i, n), b = x & qubit_mask(i + 1, n);
      if (a != b) s |= std::size_t{1} << (i - 1);
    }
    return s;
  };
  SyndromeTable t;
  t.num_qubits = n;
  for (std::size_t q = 1; q <= n; ++q) t.data_qubits.push_back(q);
  std::map<std::size_t, int> sector_of;
  sector_of[0] = 0;
  t.flip.push_back(0);
  for (std::size_t q = 1; q <= n; ++q) {
    const std::size_t s = pattern(qubit_mask(q, n));
    if (sector_of.count(s)) continue;  // N = 2: Z1 and Z2 share a pattern, first site wins
    sector_of[s] = static_cast<int>(t.flip.size());
    t.flip.push_back(qubit_mask(q, n));
  }
  t.sector.resize(dim);
  for (std::size_t x = 0; x < dim; ++x) {
    const auto it = sector_of.find(pattern(x));
    t.sector[x] = it == sector_of.end() ? -1 : it->second;
  }
  return t;
}

void apply_recovery(Density& rho, const SyndromeTable& table, double p_error, Exec exec) {
  const std::size_t dim = rho.dim();
  if (table.sector.size() != dim) throw Error(ErrorKind::RecoveryDimensionMismatch, "syndrome table size");
  const cplx* r = rho.data().data();
  std::vector<cplx> out(dim * dim, cplx{});
  // Corrected branch: project on sectors, then flip. Gathered per output
  // entry since several sectors land on the same indices after correction.
  std::vector<std::pair<int, std::size_t>> moves{{-1, 0}};
  for (std::size_t s = 0; s < table.flip.size(); ++s) moves.emplace_back(static_cast<int>(s), table.flip[s]);
#pragma omp parallel for if (go_parallel(exec, dim))
  for (std::size_t o = 0; o < dim; ++o) {
    for (std::size_t p = 0; p < dim; ++p) {
      cplx acc{};
      for (const auto& [s, f] : moves) {
        const std::size_t i = o ^ f, j = p ^ f;
        if (table.sector[i] == s && table.sector[j] == s) acc += r[i * dim + j];
      }
      out[o * dim + p] = (1.0 - p_error) * acc;
    }
  }
  if (p_error > 0.0) {
    // Failed branch: projected state twirled by a random Pauli on a random data qubit.
    // Averaging {I,X,Y,Z} conjugations on qubit q replaces its 2x2 block by (trace/2) I.
    const double w = p_error / static_cast<double>(table.data_qubits.size());
#pragma omp parallel for if (go_parallel(exec, dim))
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        cplx acc{};
        for (const std::size_t q : table.data_qubits) {
          const std::size_t b = qubit_mask(q, table.num_qubits);
          if ((i ^ j) & b) continue;
          const std::size_t i0 = i & ~b, j0 = j & ~b, i1 = i | b, j1 = j | b;
          const cplx a0 = table.sector[i0] == table.sector[j0] ? r[i0 * dim + j0] : cplx{};
          const cplx a1 = table.sector[i1] == table.sector[j1] ? r[i1 * dim + j1] : cplx{};
          acc += 0.5 * (a0 + a1);
        }
        out[i * dim + j] += w * acc;
      }
    }
  }
  std::copy(out.begin(), out.end(), rho.data().begin());
}

double readout_plus(const Density& rho) {
  const std::size_t dim = rho.dim();
  double s = 0.5 * rho.trace().real();
  for (std::size_t x = 0; x < dim / 2; ++x) s += rho(x, x ^ (dim - 1)).real();
  return s;
}

Matrix superoperator(std::size_t num_qubits, const std::function<void(Density&)>& map) {
  const std::size_t dim = std::size_t{1} << num_qubits, d2 = dim * dim;
  Matrix s(d2);
#pragma omp parallel for if (d2 >= 64)
  for (std::size_t col = 0; col < d2; ++col) {
    Density e(num_qubits);
    e.data()[col] = 1.0;
    map(e);
    for (std::size_t row = 0; row < d2; ++row) s(row, col) = e.data()[row];
  }
  return s;
}

void apply_superoperator(const Matrix& s, Density& rho) {
  const std::size_t d2 = s.dim();
  if (d2 != rho.data().size()) throw Error(ErrorKind::DimensionMismatch, "superoperator size");
  std::vector<cplx> out(d2, cplx{});
  const cplx* v = rho.data().data();
#pragma omp parallel for if (d2 >= 1024)
  for (std::size_t i = 0; i < d2; ++i) {
    cplx acc{};
    for (std::size_t k = 0; k < d2; ++k) acc += s(i, k) * v[k];
    out[i] = acc;
  }
  std::copy(out.begin(), out.end(), rho.data().begin());
}

Matrix matrix_power(Matrix m, std::uint64_t k) {
  Matrix result = Matrix::identity(m.dim());
  bool first = true;
  while (k > 0) {
    if (k & 1) {
      result = first ? m : matmul(result, m);
      first = false;
    }
    k >>= 1;
    if (k > 0) m = matmul(m, m);
  }
  return result;
}

namespace sv {

void apply_phases(std::span<cplx> psi, std::span<const cplx> diag) {
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= diag[i];
}

void apply_pauli(std::span<cplx> psi, std::size_t flip, std::size_t sign) {
  if (sign) {
    for (std::size_t x = 0; x < psi.size(); ++x) psi[x] *= parity_sign(x, sign);
  }
  if (flip) {
    for (std::size_t x = 0; x < psi.size(); ++x) {
      const std::size_t y = x ^ flip;
      if (x < y) std::swap(psi[x], psi[y]);
    }
  }
}

std::size_t sample_kraus_1q(std::span<cplx> psi, std::span<const Gate> kraus, std::size_t qubit, double u) {
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(psi.size()));
  const std::size_t bit = qubit_mask(qubit, n);
  const auto branch_weight = [&](const Gate& k) {
    double w = 0.0;
    for (std::size_t x0 = 0; x0 < psi.size(); ++x0) {
      if (x0 & bit) continue;
      const cplx a = psi[x0], b = psi[x0 | bit];
      w += std::norm(k[0] * a + k[1] * b) + std::norm(k[2] * a + k[3] * b);
    }
    return w;
  };
  std::size_t pick = kraus.size() - 1;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < kraus.size(); ++k) {
    acc += branch_weight(kraus[k]);
    if (u < acc) {
      pick = k;
      break;
    }
  }
  const Gate& k = kraus[pick];
  double norm = 0.0;
  for (std::size_t x0 = 0; x0 < psi.size(); ++x0) {
    if (x0 & bit) continue;
    const cplx a = psi[x0], b = psi[x0 | bit];
    psi[x0] = k[0] * a + k[1] * b;
    psi[x0 | bit] = k[2] * a + k[3] * b;
    norm += std::norm(psi[x0]) + std::norm(psi[x0 | bit]);
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& a : psi) a *= scale;
  return pick;
}

int sample_recovery(std::span<cplx> psi, const SyndromeTable& table, double u_sector, double u_fail, double p_error,
                    std::size_t u_pauli) {
  const std::size_t nsec = table.flip.size();
  std::vector<double> weight(nsec + 1, 0.0);  // last slot: fail sector
  for (std::size_t x = 0; x < psi.size(); ++x) {
    const int s = table.sector[x];
    weight[s < 0 ? nsec : static_cast<std::size_t>(s)] += std::norm(psi[x]);
  }
  std::size_t pick = nsec;
  double acc = 0.0;
  for (std::size_t s = 0; s <= nsec; ++s) {
    if (weight[s] <= 0.0) continue;
    pick = s;
    acc += weight[s];
    if (u_sector < acc) break;
  }
  const int chosen = pick == nsec ? -1 : static_cast<int>(pick);
  const double scale = 1.0 / std::sqrt(weight[pick]);
  for (std::size_t x = 0; x < psi.size(); ++x) psi[x] = table.sector[x] == chosen ? psi[x] * scale : cplx{};
  if (u_fail < p_error) {
    const std::size_t q = table.data_qubits[u_pauli / 4];
    const std::size_t b = qubit_mask(q, table.num_qubits);
    // Computational-basis X is a sign in this frame, Z a flip, Y both.
    switch (u_pauli % 4) {
      case 1: apply_pauli(psi, 0, b); break;
      case 2: apply_pauli(psi, b, b); break;
      case 3: apply_pauli(psi, b, 0); break;
      default: break;
    }
  } else if (chosen >= 0) {
    apply_pauli(psi, table.flip[static_cast<std::size_t>(chosen)], 0);
  }
  return chosen;
}

double readout_plus(std::span<const cplx> psi) {
  const std::size_t all = psi.size() - 1;
  double s = 0.0;
  for (std::size_t x = 0; x < psi.size(); ++x) s += (std::conj(psi[x]) * psi[x ^ all]).real();
  return 0.5 * (1.0 + s);
}

}  // namespace sv

}  // namespace qecm::kernels
