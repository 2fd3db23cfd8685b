#include "mqsolve/matrix.hpp"

#include <cassert>
#include <stdexcept>

namespace mq {

namespace {

void require_same_field(const Matrix& a, const Matrix& b) {
  if (!(a.field() == b.field())) throw std::invalid_argument("field mismatch");
}

}  // namespace

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.cols() != b.rows()) throw std::invalid_argument("dimension mismatch in mat_mul");
  const Field& f = a.field();
  Matrix out(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Elem aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) = f.add(out(i, j), f.mul(aik, b(k, j)));
      }
    }
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.field(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Vec mat_vec(const Matrix& a, const Vec& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("dimension mismatch in mat_vec");
  const Field& f = a.field();
  Vec out(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Elem acc = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc = f.add(acc, f.mul(a(i, j), x[j]));
    out[i] = acc;
  }
  return out;
}

RrefResult rref(const Matrix& a) {
  const Field& f = a.field();
  Matrix r = a;
  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t col = 0; col < r.cols() && row < r.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < r.rows() && r(pivot, col) == 0) ++pivot;
    if (pivot == r.rows()) continue;
    if (pivot != row)
      for (std::size_t j = 0; j < r.cols(); ++j) std::swap(r(row, j), r(pivot, j));
    const Elem scale = f.inv(r(row, col));
    for (std::size_t j = col; j < r.cols(); ++j) r(row, j) = f.mul(r(row, j), scale);
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (i == row) continue;
      const Elem m = r(i, col);
      if (m == 0) continue;
      for (std::size_t j = col; j < r.cols(); ++j)
        r(i, j) = f.sub(r(i, j), f.mul(m, r(row, j)));
    }
    pivot_cols.push_back(col);
    ++row;
  }
  return RrefResult{std::move(r), pivot_cols.size(), std::move(pivot_cols)};
}

LinearSolveResult solve_linear(const Matrix& a, const Vec& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("dimension mismatch in solve_linear");
  const Field& f = a.field();
  Matrix aug(f, a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  RrefResult rr = rref(aug);

  LinearSolveResult result;
  // inconsistent iff a pivot lands in the augmented column
  for (const std::size_t pc : rr.pivot_cols) {
    if (pc == a.cols()) {
      result.consistent = false;
      result.rank = rr.rank - 1;
      return result;
    }
  }
  result.consistent = true;
  result.rank = rr.rank;

  std::vector<std::size_t> pivot_row_of_col(a.cols(), static_cast<std::size_t>(-1));
  for (std::size_t r = 0; r < rr.pivot_cols.size(); ++r) pivot_row_of_col[rr.pivot_cols[r]] = r;

  Vec part(a.cols(), 0);
  for (std::size_t r = 0; r < rr.pivot_cols.size(); ++r)
    part[rr.pivot_cols[r]] = rr.reduced(r, a.cols());
  result.particular = std::move(part);

  for (std::size_t col = 0; col < a.cols(); ++col) {
    if (pivot_row_of_col[col] != static_cast<std::size_t>(-1)) continue;
    Vec basis(a.cols(), 0);
    basis[col] = 1;
    for (std::size_t r = 0; r < rr.pivot_cols.size(); ++r)
      basis[rr.pivot_cols[r]] = f.neg(rr.reduced(r, col));
    result.nullspace_basis.push_back(std::move(basis));
  }
  assert(result.nullspace_basis.size() == a.cols() - result.rank);
  return result;
}

Matrix congruence_transform(const Matrix& quad, const Matrix& t) {
  require_same_field(quad, t);
  if (quad.rows() != quad.cols() || t.rows() != t.cols() || quad.rows() != t.rows())
    throw std::invalid_argument("dimension mismatch in congruence_transform");
  if (!quad.upper_triangular())
    throw std::invalid_argument("quadratic form storage must be upper triangular");
  const Field& f = quad.field();
  const Matrix m = mat_mul(mat_mul(transpose(t), quad), t);
  const std::size_t n = quad.rows();
  Matrix u(f, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    u(i, i) = m(i, i);
    for (std::size_t j = i + 1; j < n; ++j) u(i, j) = f.add(m(i, j), m(j, i));
  }
  return u;
}

Matrix congruence_transform_elementary(const Matrix& quad, std::size_t t, const Vec& column) {
  if (quad.rows() != quad.cols()) throw std::invalid_argument("quadratic form must be square");
  const std::size_t n = quad.rows();
  if (column.size() != n || t >= n || column[t] != 1)
    throw std::invalid_argument("elementary transform column invalid");
  if (!quad.upper_triangular())
    throw std::invalid_argument("quadratic form storage must be upper triangular");
  const Field& f = quad.field();

  // T = I + d e_t^T with d = column - e_t, so only row/column t of the folded
  // form moves: U(i,t) += u_i + v_i (i < t), U(t,i) += u_i + v_i (i > t),
  // U(t,t) += u_t + v_t + d^T (quad d), where u = quad*d, v = quad^T*d.
  Vec d = column;
  d[t] = 0;
  Vec u(n, 0), v(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Elem qij = quad(i, j);
      if (qij == 0) continue;
      u[i] = f.add(u[i], f.mul(qij, d[j]));
      v[j] = f.add(v[j], f.mul(qij, d[i]));
    }
  }
  Elem w = 0;
  for (std::size_t i = 0; i < n; ++i) w = f.add(w, f.mul(d[i], u[i]));

  Matrix out = quad;
  for (std::size_t i = 0; i < t; ++i) out(i, t) = f.add(out(i, t), f.add(u[i], v[i]));
  for (std::size_t i = t + 1; i < n; ++i) out(t, i) = f.add(out(t, i), f.add(u[i], v[i]));
  out(t, t) = f.add(out(t, t), f.add(f.add(u[t], v[t]), w));
  return out;
}

Matrix random_invertible(const Field& field, std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("matrix dimension must be positive");
  for (;;) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = field.random_element(rng);
    if (rref(m).rank == n) return m;
  }
}

}  // namespace mq
