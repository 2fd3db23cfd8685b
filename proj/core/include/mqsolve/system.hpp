#pragma once

#include <cstddef>
#include <vector>

#include "mqsolve/matrix.hpp"

namespace mq {

// One equation f(x) = x^T quad x + lin . x + constant, quad upper triangular.
// The upper-triangular matrix is the single source of truth for quadratic
// coefficients: the monomial x_i x_j (i <= j) appears exactly once, at (i, j).
struct QuadraticPolynomial {
  Matrix quad;
  Vec lin;
  Elem constant = 0;

  bool homogeneous() const {
    if (constant != 0) return false;
    for (const Elem v : lin)
      if (v != 0) return false;
    return true;
  }

  bool operator==(const QuadraticPolynomial&) const = default;
};

// m quadratic equations in n variables over one field. Variables are 0-based
// internally; instance files use 1-based indices.
struct MQSystem {
  Field field;
  std::size_t n = 0;
  std::vector<QuadraticPolynomial> polys;

  std::size_t m() const { return polys.size(); }
  bool homogeneous() const {
    for (const auto& p : polys)
      if (!p.homogeneous()) return false;
    return true;
  }
  bool underdefined() const { return n > m(); }

  bool operator==(const MQSystem&) const = default;
};

using Assignment = Vec;

Elem evaluate(const QuadraticPolynomial& poly, const Field& field, const Assignment& x);
Vec evaluate_system(const MQSystem& sys, const Assignment& x);
bool is_solution(const MQSystem& sys, const Assignment& x);

// Adds x_0 at index 0: constants become x_0^2 coefficients and linear
// coefficients become x_0 x_i coefficients, so f~(1, x) == f(x).
MQSystem homogenize(const MQSystem& sys);

// Variable substitution x = t * y: quadratic parts via congruence_transform,
// linear parts via t^T lin. Pointwise: evaluate(substitute(S,t), y) ==
// evaluate(S, t*y); for invertible t the solution sets are in bijection.
MQSystem substitute(const MQSystem& sys, const Matrix& t);

// Uniform i.i.d. coefficients; homogeneous leaves lin/constant zero.
MQSystem random_system(const Field& field, std::size_t n, std::size_t m, bool homogeneous,
                       Rng& rng);

// Adjusts sys so that s becomes a solution, preserving homogeneity:
// inhomogeneous systems absorb f_k(s) into the constant; homogeneous systems
// adjust the first row-major upper-triangular coefficient (i0, j0) with
// s_i0 * s_j0 != 0 (s must be nonzero in that case).
[[nodiscard]] MQSystem plant_solution(const MQSystem& sys, const Assignment& s);

}  // namespace mq
