#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mqsolve/rng.hpp"

namespace mq {

// Canonical field element encoding: an integer in [0, q).
//  - GF(p): the residue itself.
//  - GF(2^e): polynomial coefficients packed into bits, lowest degree in the
//    least significant bit (so x + 1 is 0b11 = 3).
using Elem = std::uint32_t;

// GF(p) for prime p, or GF(2^e) for 2 <= e <= 16. Field order q = p^e is
// capped at 2^20. Odd-characteristic extension fields are out of scope.
//
// Extension fields reduce modulo a fixed irreducible polynomial: a built-in
// per-degree default keeps encodings reproducible across runs, and any
// explicitly supplied modulus is verified irreducible by exhaustive
// trial division (cheap for e <= 16).
class Field {
 public:
  static Field prime(std::uint32_t p);
  static Field binary(std::uint32_t e);
  static Field binary(std::uint32_t e, std::uint32_t modulus);
  // General constructor used by instance files: p = 2 with e > 1 selects the
  // extension path, e == 1 the prime path.
  static Field make(std::uint32_t p, std::uint32_t e,
                    std::optional<std::uint32_t> modulus = std::nullopt);

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return e_; }
  std::uint32_t order() const { return q_; }
  std::uint32_t modulus() const { return mod_; }  // 0 for prime fields
  bool is_extension() const { return e_ > 1; }
  bool char2() const { return p_ == 2; }
  bool operator==(const Field&) const = default;
  std::string to_string() const;

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;  // throws std::domain_error on a == 0
  Elem pow(Elem a, std::uint64_t k) const;

  bool is_square(Elem a) const;
  // Canonical square root if one exists: always for char 2 (Frobenius is a
  // bijection); for odd q the smaller of the two roots.
  std::optional<Elem> sqrt(Elem a) const;

  // All x with alpha*x^2 + gamma*x = delta, alpha != 0, sorted canonically.
  // Odd char: discriminant gamma^2 + 4*alpha*delta. Char 2, gamma == 0:
  // the unique root sqrt(delta/alpha). Char 2, gamma != 0: substituting
  // x = (gamma/alpha) z reduces to z^2 + z = alpha*delta/gamma^2, solved as a
  // GF(2)-linear map on the coefficient bits of GF(2^e).
  std::vector<Elem> solve_univariate_quadratic(Elem alpha, Elem gamma,
                                               Elem delta) const;

  Elem random_element(Rng& rng) const {
    return static_cast<Elem>(rng.uniform_below(q_));
  }

  // Canonical enumeration order is simply 0, 1, ..., q-1.
  std::vector<Elem> all_elements() const;

  static bool is_prime(std::uint32_t v);
  // Exhaustive trial division by every polynomial of degree 1..deg/2.
  static bool poly_irreducible_gf2(std::uint32_t poly, std::uint32_t deg);
  static std::uint32_t default_modulus(std::uint32_t e);

 private:
  Field(std::uint32_t p, std::uint32_t e, std::uint32_t q, std::uint32_t mod)
      : p_(p), e_(e), q_(q), mod_(mod) {}

  Elem sqrt_odd(Elem a) const;         // Tonelli-Shanks / q = 3 mod 4 shortcut
  Elem sqrt_char2(Elem a) const;       // a^(2^(e-1))
  void check(Elem a) const;

  std::uint32_t p_;
  std::uint32_t e_;
  std::uint32_t q_;
  std::uint32_t mod_;
};

}  // namespace mq
