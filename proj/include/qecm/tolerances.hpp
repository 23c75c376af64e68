#pragma once

#include <cstddef>

namespace qecm {

/// Numerical thresholds shared by every module. Defaults can be overridden
/// from the `tolerances` block of a config document.
struct Tolerances {
  double herm = 1e-10;       // max |M_ij - conj(M_ji)|
  double proj = 1e-10;       // ||P^2 - P||_F
  double norm = 1e-10;       // | <psi|psi> - 1 |
  double trace = 1e-10;      // | tr rho - 1 |
  double psd = 1e-9;         // eigenvalue clamp threshold
  double cptp = 1e-8;        // ||sum E^dag E - I||_F
  double condition = 1e-8;   // verdict threshold for conditions (1) and (2)
  double diag = 1e-12;       // A-matrix eigenvalues below this are dropped
  int max_sweeps = 100;      // Jacobi sweep budget
  std::size_t max_dim = 1024;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace qecm
