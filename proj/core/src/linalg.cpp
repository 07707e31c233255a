#include "connect_later/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "connect_later/errors.hpp"

namespace connect_later {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// Applies the rotation that zeroes a(p,q) to both a and the accumulated v.
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();

  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

EigenDecomposition sym_eig(const Matrix& m, double symmetry_tol, JacobiOptions opts) {
  if (!m.square()) throw ValidationError("sym_eig: matrix is not square");
  if (!m.all_finite()) throw ValidationError("sym_eig: matrix has non-finite entries");
  if (asymmetry(m) > symmetry_tol) throw ValidationError("sym_eig: matrix is not symmetric");

  const std::size_t n = m.rows();
  Matrix a = m;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (m(i, j) + m(j, i));
  Matrix v = Matrix::identity(n);

  const double scale = std::max(frobenius_norm(a), 1e-300);
  int sweep = 0;
  while (off_diagonal_norm(a) > opts.tolerance * scale) {
    if (sweep++ >= opts.max_sweeps)
      throw NumericalError("sym_eig: no convergence after " + std::to_string(opts.max_sweeps) + " sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out{Vector(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    // Sign convention: first component above noise level is positive.
    double sign = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v(i, order[j])) > 1e-10) {
        sign = v(i, order[j]) < 0.0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = sign * v(i, order[j]);
  }
  return out;
}

Cholesky::Cholesky(const Matrix& a) : l_(a.rows(), a.cols()) {
  if (!a.square()) throw ValidationError("Cholesky: matrix is not square");
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
    if (!(d > 0.0))
      throw NumericalError("Cholesky: non-positive pivot at index " + std::to_string(j));
    const double ljj = std::sqrt(d);
    l_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
      l_(i, j) = s / ljj;
    }
  }
}

Vector Cholesky::solve_lower(std::span<const double> b) const {
  const std::size_t n = l_.rows();
  if (b.size() != n) throw ValidationError("Cholesky::solve: dimension mismatch");
  Vector y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= l_(i, k) * y[k];
    y[i] /= l_(i, i);
  }
  return y;
}

Vector Cholesky::solve(std::span<const double> b) const {
  Vector x = solve_lower(b);
  const std::size_t n = l_.rows();
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) x[ii] -= l_(k, ii) * x[k];
    x[ii] /= l_(ii, ii);
  }
  return x;
}

double Cholesky::log_determinant() const {
  double s = 0.0;
  for (std::size_t i = 0; i < l_.rows(); ++i) s += std::log(l_(i, i));
  return 2.0 * s;
}

Vector cholesky_solve(const Matrix& a, std::span<const double> b) {
  if (asymmetry(a) > 1e-10 * std::max(1.0, max_abs(a)))
    throw ValidationError("cholesky_solve: matrix is not symmetric");
  return Cholesky(a).solve(b);
}

Matrix solve_right_spd(const Matrix& b, const Matrix& a) {
  const Cholesky chol(a);
  Matrix x(b.rows(), b.cols());
  for (std::size_t i = 0; i < b.rows(); ++i) {
    const Vector xi = chol.solve(b.row(i));
    std::copy(xi.begin(), xi.end(), x.row(i).begin());
  }
  return x;
}

}  // namespace connect_later
