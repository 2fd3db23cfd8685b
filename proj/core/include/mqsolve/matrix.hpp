#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mqsolve/field.hpp"
#include "mqsolve/rng.hpp"

namespace mq {

using Vec = std::vector<Elem>;

// Dense row-major matrix over a single field. All entries canonical.
class Matrix {
 public:
  Matrix(Field field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(const Field& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Field& field() const { return field_; }

  Elem operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Elem& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  bool operator==(const Matrix&) const = default;

  bool upper_triangular() const {
    for (std::size_t i = 1; i < rows_; ++i)
      for (std::size_t j = 0; j < i && j < cols_; ++j)
        if ((*this)(i, j) != 0) return false;
    return true;
  }

  bool is_zero() const {
    for (const Elem v : data_)
      if (v != 0) return false;
    return true;
  }

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Elem> data_;
};

Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Vec mat_vec(const Matrix& a, const Vec& x);

struct RrefResult {
  Matrix reduced;
  std::size_t rank;
  std::vector<std::size_t> pivot_cols;
};

// Reduced row echelon form: pivots 1, zeros above and below, deterministic
// (first nonzero candidate row is chosen at each column).
RrefResult rref(const Matrix& a);

struct LinearSolveResult {
  bool consistent = false;
  // Particular solution with every free variable set to zero.
  std::optional<Vec> particular;
  // One basis vector per free column; size == cols - rank when consistent.
  std::vector<Vec> nullspace_basis;
  std::size_t rank = 0;
};

LinearSolveResult solve_linear(const Matrix& a, const Vec& b);

// Upper-triangular representation of the quadratic form x^T quad x after the
// substitution x = t * y: fold M = t^T quad t via U_ii = M_ii and
// U_ij = M_ij + M_ji for i < j. quad must be square upper triangular, t
// square of matching size.
Matrix congruence_transform(const Matrix& quad, const Matrix& t);

// Same result for a transform that equals the identity except for column t
// (column[t] == 1), computed via the rank-one structure. Agrees with
// congruence_transform on the expanded matrix.
Matrix congruence_transform_elementary(const Matrix& quad, std::size_t t, const Vec& column);

// Rejection-sampled uniform invertible matrix.
Matrix random_invertible(const Field& field, std::size_t n, Rng& rng);

}  // namespace mq
