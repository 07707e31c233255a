#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace connect_later {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. Sizes in this project stay small
// (n <= a few hundred), so no expression templates or blocking.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  Vector col(std::size_t c) const;

  std::span<const double> data() const { return data_; }

  Matrix transpose() const;
  double trace() const;
  double sum() const;
  bool all_finite() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);

// Largest absolute entry of a - b; shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs(const Matrix& a);
double max_abs(std::span<const double> v);
double frobenius_norm(const Matrix& a);

// Largest |a(i,j) - a(j,i)|.
double asymmetry(const Matrix& a);

}  // namespace connect_later
