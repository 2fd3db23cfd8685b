#pragma once

#include <cstdint>
#include <vector>

#include "mqsolve/system.hpp"

namespace mqtest {

// Term-by-term evaluation, deliberately independent of mq::evaluate: walks
// every monomial of the upper-triangular representation and accumulates.
inline mq::Elem eval_naive(const mq::QuadraticPolynomial& poly, const mq::Field& f,
                           const mq::Assignment& x) {
  mq::Elem acc = poly.constant;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j)
      acc = f.add(acc, f.mul(poly.quad(i, j), f.mul(x[i], x[j])));
    acc = f.add(acc, f.mul(poly.lin[i], x[i]));
  }
  return acc;
}

// Value of the quadratic form x^T U x for upper-triangular U.
inline mq::Elem qform(const mq::Matrix& u, const mq::Vec& x) {
  const mq::Field& f = u.field();
  mq::Elem acc = 0;
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = i; j < u.cols(); ++j)
      acc = f.add(acc, f.mul(u(i, j), f.mul(x[i], x[j])));
  return acc;
}

// All q^n assignments in the oracle's canonical order (last index fastest).
inline std::vector<mq::Assignment> all_points(const mq::Field& f, std::size_t n) {
  std::vector<mq::Assignment> out;
  mq::Assignment x(n, 0);
  const std::uint64_t q = f.order();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= q;
  for (std::uint64_t k = 0; k < total; ++k) {
    std::uint64_t v = k;
    for (std::size_t i = n; i-- > 0;) {
      x[i] = static_cast<mq::Elem>(v % q);
      v /= q;
    }
    out.push_back(x);
  }
  return out;
}

// Nonzero assignment for planting into homogeneous systems.
inline mq::Assignment random_nonzero(const mq::Field& f, std::size_t n, mq::Rng& rng) {
  for (;;) {
    mq::Assignment s(n);
    bool nonzero = false;
    for (auto& v : s) {
      v = f.random_element(rng);
      nonzero = nonzero || v != 0;
    }
    if (nonzero) return s;
  }
}

}  // namespace mqtest
