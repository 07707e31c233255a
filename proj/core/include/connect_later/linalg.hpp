#pragma once

#include <span>

#include "connect_later/matrix.hpp"

namespace connect_later {

struct EigenDecomposition {
  Vector values;        // descending
  Matrix vectors;       // column j pairs with values[j]
};

struct JacobiOptions {
  double tolerance = 1e-12;  // off-diagonal Frobenius norm, relative to ||m||_F
  int max_sweeps = 100;
};

// Symmetric eigendecomposition by cyclic Jacobi rotations.
// Throws ValidationError if m is not symmetric within symmetry_tol, and
// NumericalError if the sweep cap is hit first.
EigenDecomposition sym_eig(const Matrix& m, double symmetry_tol = 1e-10, JacobiOptions opts = {});

// Lower-triangular Cholesky factor L with a = L L^T.
class Cholesky {
 public:
  // Throws NumericalError naming the first non-positive pivot.
  explicit Cholesky(const Matrix& a);

  Vector solve(std::span<const double> b) const;
  // Solves L y = b only.
  Vector solve_lower(std::span<const double> b) const;
  double log_determinant() const;
  const Matrix& lower() const { return l_; }

 private:
  Matrix l_;
};

Vector cholesky_solve(const Matrix& a, std::span<const double> b);

// Solves x (a) = b for a row vector x, i.e. a^T x^T = b^T, with a SPD.
Matrix solve_right_spd(const Matrix& b, const Matrix& a);

}  // namespace connect_later
