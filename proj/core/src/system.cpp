#include "mqsolve/system.hpp"

#include <stdexcept>
#include <string>

namespace mq {

namespace {

void require_assignment(const MQSystem& sys, const Assignment& x) {
  if (x.size() != sys.n) throw std::invalid_argument("assignment length != n");
}

}  // namespace

Elem evaluate(const QuadraticPolynomial& poly, const Field& field, const Assignment& x) {
  const std::size_t n = poly.quad.rows();
  Elem acc = poly.constant;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) {
      continue;
    }
    Elem row = 0;
    for (std::size_t j = i; j < n; ++j) {
      const Elem c = poly.quad(i, j);
      if (c != 0) row = field.add(row, field.mul(c, x[j]));
    }
    acc = field.add(acc, field.mul(x[i], row));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (poly.lin[i] != 0 && x[i] != 0) acc = field.add(acc, field.mul(poly.lin[i], x[i]));
  }
  return acc;
}

Vec evaluate_system(const MQSystem& sys, const Assignment& x) {
  require_assignment(sys, x);
  Vec out(sys.m(), 0);
  for (std::size_t k = 0; k < sys.m(); ++k) out[k] = evaluate(sys.polys[k], sys.field, x);
  return out;
}

bool is_solution(const MQSystem& sys, const Assignment& x) {
  require_assignment(sys, x);
  for (const auto& poly : sys.polys)
    if (evaluate(poly, sys.field, x) != 0) return false;
  return true;
}

MQSystem homogenize(const MQSystem& sys) {
  MQSystem out{sys.field, sys.n + 1, {}};
  out.polys.reserve(sys.m());
  for (const auto& poly : sys.polys) {
    QuadraticPolynomial h{Matrix(sys.field, sys.n + 1, sys.n + 1), Vec(sys.n + 1, 0), 0};
    h.quad(0, 0) = poly.constant;
    for (std::size_t i = 0; i < sys.n; ++i) {
      h.quad(0, i + 1) = poly.lin[i];
      for (std::size_t j = i; j < sys.n; ++j) h.quad(i + 1, j + 1) = poly.quad(i, j);
    }
    out.polys.push_back(std::move(h));
  }
  return out;
}

MQSystem substitute(const MQSystem& sys, const Matrix& t) {
  if (!(t.field() == sys.field)) throw std::invalid_argument("field mismatch");
  if (t.rows() != sys.n || t.cols() != sys.n)
    throw std::invalid_argument("transform must be n x n");
  const Matrix tt = transpose(t);
  MQSystem out{sys.field, sys.n, {}};
  out.polys.reserve(sys.m());
  for (const auto& poly : sys.polys) {
    out.polys.push_back(QuadraticPolynomial{congruence_transform(poly.quad, t),
                                            mat_vec(tt, poly.lin), poly.constant});
  }
  return out;
}

MQSystem random_system(const Field& field, std::size_t n, std::size_t m, bool homogeneous,
                       Rng& rng) {
  if (n == 0 || m == 0) throw std::invalid_argument("n and m must be positive");
  MQSystem out{field, n, {}};
  out.polys.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    QuadraticPolynomial poly{Matrix(field, n, n), Vec(n, 0), 0};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) poly.quad(i, j) = field.random_element(rng);
    if (!homogeneous) {
      for (std::size_t i = 0; i < n; ++i) poly.lin[i] = field.random_element(rng);
      poly.constant = field.random_element(rng);
    }
    out.polys.push_back(std::move(poly));
  }
  return out;
}

MQSystem plant_solution(const MQSystem& sys, const Assignment& s) {
  require_assignment(sys, s);
  const Field& f = sys.field;
  MQSystem out = sys;
  if (!sys.homogeneous()) {
    for (auto& poly : out.polys) {
      const Elem v = evaluate(poly, f, s);
      poly.constant = f.sub(poly.constant, v);
    }
    return out;
  }
  // Homogeneous: pick the first row-major upper-triangular pair with
  // s_i0 * s_j0 != 0 so the adjustment stays quadratic.
  std::size_t i0 = sys.n, j0 = sys.n;
  for (std::size_t i = 0; i < sys.n && i0 == sys.n; ++i)
    for (std::size_t j = i; j < sys.n; ++j)
      if (s[i] != 0 && s[j] != 0) {
        i0 = i;
        j0 = j;
        break;
      }
  if (i0 == sys.n)
    throw std::invalid_argument("cannot plant the zero vector in a homogeneous system");
  const Elem denom_inv = f.inv(f.mul(s[i0], s[j0]));
  for (auto& poly : out.polys) {
    const Elem v = evaluate(poly, f, s);
    poly.quad(i0, j0) = f.sub(poly.quad(i0, j0), f.mul(v, denom_inv));
  }
  return out;
}

}  // namespace mq
