#include "mqsolve/field.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <stdexcept>
#include <utility>

namespace mq {

namespace {

constexpr std::uint32_t kMaxOrder = 1u << 20;

// One irreducible polynomial per degree 2..16 (index 0 -> degree 2). Fixed so
// the canonical element encoding is stable; each entry is checked by the unit
// tests with poly_irreducible_gf2.
constexpr std::array<std::uint32_t, 15> kDefaultModulus = {
    0x7,      // x^2 + x + 1
    0xB,      // x^3 + x + 1
    0x13,     // x^4 + x + 1
    0x25,     // x^5 + x^2 + 1
    0x43,     // x^6 + x + 1
    0x83,     // x^7 + x + 1
    0x11B,    // x^8 + x^4 + x^3 + x + 1
    0x211,    // x^9 + x^4 + 1
    0x409,    // x^10 + x^3 + 1
    0x805,    // x^11 + x^2 + 1
    0x1053,   // x^12 + x^6 + x^4 + x + 1
    0x201B,   // x^13 + x^4 + x^3 + x + 1
    0x4443,   // x^14 + x^10 + x^6 + x + 1
    0x8003,   // x^15 + x + 1
    0x1100B,  // x^16 + x^12 + x^3 + x + 1
};

std::uint32_t poly_degree(std::uint32_t poly) {
  std::uint32_t d = 0;
  while (poly >> (d + 1)) ++d;
  return d;
}

// Remainder of polynomial division over GF(2).
std::uint32_t poly_mod_gf2(std::uint64_t a, std::uint32_t b) {
  const std::uint32_t db = poly_degree(b);
  for (int shift = 63 - static_cast<int>(db); shift >= 0; --shift) {
    if (a & (1ULL << (shift + db))) a ^= static_cast<std::uint64_t>(b) << shift;
  }
  return static_cast<std::uint32_t>(a);
}

}  // namespace

bool Field::is_prime(std::uint32_t v) {
  if (v < 2) return false;
  for (std::uint32_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

bool Field::poly_irreducible_gf2(std::uint32_t poly, std::uint32_t deg) {
  if (deg < 1) return false;
  if (poly_degree(poly) != deg) return false;
  if ((poly & 1u) == 0) return deg == 1 && poly == 2;  // divisible by x
  for (std::uint32_t d = 1; 2 * d <= deg; ++d) {
    for (std::uint32_t g = (1u << d); g < (2u << d); ++g) {
      if (poly_mod_gf2(poly, g) == 0) return false;
    }
  }
  return true;
}

std::uint32_t Field::default_modulus(std::uint32_t e) {
  if (e < 2 || e > 16) throw std::invalid_argument("no default modulus for degree " + std::to_string(e));
  return kDefaultModulus[e - 2];
}

Field Field::prime(std::uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
  if (p > kMaxOrder) throw std::invalid_argument("field order exceeds 2^20");
  return Field(p, 1, p, 0);
}

Field Field::binary(std::uint32_t e) { return binary(e, default_modulus(e)); }

Field Field::binary(std::uint32_t e, std::uint32_t modulus) {
  if (e < 2 || e > 16)
    throw std::invalid_argument("extension degree must be in [2, 16], got " + std::to_string(e));
  if (!poly_irreducible_gf2(modulus, e))
    throw std::invalid_argument("modulus " + std::to_string(modulus) +
                                " is not an irreducible polynomial of degree " + std::to_string(e));
  return Field(2, e, 1u << e, modulus);
}

Field Field::make(std::uint32_t p, std::uint32_t e, std::optional<std::uint32_t> modulus) {
  if (e == 0) throw std::invalid_argument("extension degree must be >= 1");
  if (e == 1) {
    if (modulus) throw std::invalid_argument("modulus given for a prime field");
    return prime(p);
  }
  if (p != 2)
    throw std::invalid_argument("only characteristic-2 extension fields are supported");
  return modulus ? binary(e, *modulus) : binary(e);
}

std::string Field::to_string() const {
  if (e_ == 1) return "GF(" + std::to_string(p_) + ")";
  return "GF(2^" + std::to_string(e_) + ")";
}

void Field::check(Elem a) const {
  assert(a < q_ && "element out of canonical range");
  (void)a;
}

Elem Field::add(Elem a, Elem b) const {
  check(a);
  check(b);
  if (p_ == 2) return a ^ b;
  const std::uint64_t s = static_cast<std::uint64_t>(a) + b;
  return static_cast<Elem>(s >= q_ ? s - q_ : s);
}

Elem Field::sub(Elem a, Elem b) const {
  check(a);
  check(b);
  if (p_ == 2) return a ^ b;
  return static_cast<Elem>(a >= b ? a - b : a + q_ - b);
}

Elem Field::neg(Elem a) const {
  check(a);
  if (p_ == 2) return a;
  return a == 0 ? 0 : q_ - a;
}

Elem Field::mul(Elem a, Elem b) const {
  check(a);
  check(b);
  if (e_ == 1) {
    return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % q_);
  }
  // carry-less multiply, reduce by the modulus as bits overflow degree e
  std::uint32_t acc = 0;
  std::uint32_t x = a;
  std::uint32_t y = b;
  while (y) {
    if (y & 1u) acc ^= x;
    y >>= 1;
    x <<= 1;
    if (x & q_) x ^= mod_;  // q_ == 1 << e_
  }
  return acc;
}

Elem Field::pow(Elem a, std::uint64_t k) const {
  check(a);
  Elem result = 1;
  Elem base = a;
  while (k) {
    if (k & 1u) result = mul(result, base);
    base = mul(base, base);
    k >>= 1;
  }
  return result;
}

Elem Field::inv(Elem a) const {
  check(a);
  if (a == 0) throw std::domain_error("division by zero");
  if (e_ == 1) {
    // extended Euclid over the integers
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = q_, new_r = a;
    while (new_r != 0) {
      const std::int64_t quot = r / new_r;
      t = std::exchange(new_t, t - quot * new_t);
      r = std::exchange(new_r, r - quot * new_r);
    }
    if (t < 0) t += q_;
    return static_cast<Elem>(t);
  }
  return pow(a, static_cast<std::uint64_t>(q_) - 2);
}

bool Field::is_square(Elem a) const {
  check(a);
  if (p_ == 2 || a == 0) return true;
  return pow(a, (static_cast<std::uint64_t>(q_) - 1) / 2) == 1;
}

Elem Field::sqrt_char2(Elem a) const {
  // Frobenius x -> x^2 is a bijection; the inverse is a^(2^(e-1)).
  Elem r = a;
  for (std::uint32_t i = 1; i < e_; ++i) r = mul(r, r);
  return r;
}

Elem Field::sqrt_odd(Elem a) const {
  const std::uint64_t q = q_;
  Elem r;
  if (q % 4 == 3) {
    r = pow(a, (q + 1) / 4);
  } else {
    // Tonelli-Shanks
    std::uint64_t s = q - 1;
    std::uint32_t twos = 0;
    while ((s & 1u) == 0) {
      s >>= 1;
      ++twos;
    }
    Elem z = 2;
    while (is_square(z)) ++z;  // deterministic non-residue scan
    std::uint32_t m = twos;
    Elem c = pow(z, s);
    Elem t = pow(a, s);
    r = pow(a, (s + 1) / 2);
    while (t != 1) {
      std::uint32_t i = 0;
      Elem probe = t;
      while (probe != 1) {
        probe = mul(probe, probe);
        ++i;
      }
      Elem b = c;
      for (std::uint32_t j = 0; j + i + 1 < m; ++j) b = mul(b, b);
      m = i;
      c = mul(b, b);
      t = mul(t, c);
      r = mul(r, b);
    }
  }
  return std::min(r, neg(r));  // canonical root
}

std::optional<Elem> Field::sqrt(Elem a) const {
  check(a);
  if (a == 0) return Elem{0};
  if (p_ == 2) return sqrt_char2(a);
  if (!is_square(a)) return std::nullopt;
  return sqrt_odd(a);
}

std::vector<Elem> Field::solve_univariate_quadratic(Elem alpha, Elem gamma, Elem delta) const {
  check(alpha);
  check(gamma);
  check(delta);
  if (alpha == 0) throw std::invalid_argument("leading coefficient must be nonzero");

  std::vector<Elem> roots;
  if (p_ != 2) {
    // alpha x^2 + gamma x - delta = 0; discriminant gamma^2 + 4 alpha delta
    const Elem four = static_cast<Elem>(4 % q_);
    const Elem two = static_cast<Elem>(2 % q_);
    const Elem disc = add(mul(gamma, gamma), mul(four, mul(alpha, delta)));
    const auto r = sqrt(disc);
    if (!r) return roots;
    const Elem inv2a = inv(mul(two, alpha));
    roots.push_back(mul(sub(*r, gamma), inv2a));
    if (*r != 0) roots.push_back(mul(sub(neg(*r), gamma), inv2a));
  } else if (gamma == 0) {
    // x^2 = delta / alpha has exactly one root in char 2
    roots.push_back(*sqrt(mul(delta, inv(alpha))));
  } else {
    // substitute x = (gamma/alpha) z: z^2 + z = alpha*delta/gamma^2
    const Elem scale = mul(gamma, inv(alpha));
    const Elem rhs = mul(mul(alpha, delta), inv(mul(gamma, gamma)));
    // z -> z^2 + z is GF(2)-linear on coefficient bits; solve by elimination
    // on the e x e bit matrix. Its kernel is {0, 1}, so solutions come in
    // pairs {z0, z0 + 1}.
    std::array<std::uint32_t, 16> rows{};  // rows[i] = bit i of phi(basis_j) over j, plus rhs bit at e_
    for (std::uint32_t j = 0; j < e_; ++j) {
      const Elem basis = 1u << j;
      const Elem image = add(mul(basis, basis), basis);
      for (std::uint32_t i = 0; i < e_; ++i)
        if (image & (1u << i)) rows[i] |= 1u << j;
    }
    for (std::uint32_t i = 0; i < e_; ++i)
      if (rhs & (1u << i)) rows[i] |= 1u << e_;
    // Gaussian elimination over GF(2)
    std::uint32_t rank = 0;
    for (std::uint32_t col = 0; col < e_ && rank < e_; ++col) {
      std::uint32_t pivot = rank;
      while (pivot < e_ && !(rows[pivot] & (1u << col))) ++pivot;
      if (pivot == e_) continue;
      std::swap(rows[rank], rows[pivot]);
      for (std::uint32_t i = 0; i < e_; ++i)
        if (i != rank && (rows[i] & (1u << col))) rows[i] ^= rows[rank];
      ++rank;
    }
    bool consistent = true;
    for (std::uint32_t i = rank; i < e_; ++i)
      if (rows[i] & (1u << e_)) consistent = false;
    if (consistent) {
      Elem z0 = 0;
      for (std::uint32_t i = 0; i < rank; ++i) {
        if (rows[i] & (1u << e_)) {
          // leading column of this row
          std::uint32_t lead = 0;
          while (!(rows[i] & (1u << lead))) ++lead;
          z0 |= 1u << lead;
        }
      }
      roots.push_back(mul(scale, z0));
      roots.push_back(mul(scale, add(z0, 1)));
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::vector<Elem> Field::all_elements() const {
  std::vector<Elem> out(q_);
  for (std::uint32_t i = 0; i < q_; ++i) out[i] = i;
  return out;
}

}  // namespace mq
