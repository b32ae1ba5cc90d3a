#pragma once

// Exact arithmetic in Z[w], w = exp(2 pi i / 3), w^2 = -1 - w.

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "cubicvd/common/error.hpp"

namespace cubicvd {

using Int = std::int64_t;
using Wide = __int128;

inline Int narrow(Wide v) {
  if (v > std::numeric_limits<Int>::max() || v < std::numeric_limits<Int>::min())
    throw std::overflow_error("Eisenstein arithmetic overflowed 64-bit component");
  return static_cast<Int>(v);
}

// floor(n / d) for d > 0
inline Wide floor_div(Wide n, Wide d) {
  Wide q = n / d;
  if ((n % d != 0) && (n < 0)) --q;
  return q;
}

// nearest integer to n / d for d > 0, ties toward +inf
inline Wide round_div(Wide n, Wide d) { return floor_div(2 * n + d, 2 * d); }

struct EisensteinInt {
  Int a = 0;  // coefficient of 1
  Int b = 0;  // coefficient of w

  constexpr EisensteinInt() = default;
  constexpr EisensteinInt(Int a_, Int b_) : a(a_), b(b_) {}
  constexpr explicit EisensteinInt(Int a_) : a(a_), b(0) {}

  static constexpr EisensteinInt one() { return {1, 0}; }
  static constexpr EisensteinInt omega() { return {0, 1}; }

  Wide wide_norm() const {
    const Wide x = a, y = b;
    return x * x - x * y + y * y;
  }
  Int norm() const { return narrow(wide_norm()); }

  EisensteinInt conj() const { return {narrow(Wide(a) - b), narrow(-Wide(b))}; }
  bool is_zero() const { return a == 0 && b == 0; }
  bool is_unit() const { return wide_norm() == 1; }

  std::complex<double> to_complex() const {
    return {static_cast<double>(a) - 0.5 * static_cast<double>(b),
            0.8660254037844386 * static_cast<double>(b)};
  }

  friend bool operator==(const EisensteinInt&, const EisensteinInt&) = default;
  friend auto operator<=>(const EisensteinInt& x, const EisensteinInt& y) {
    if (auto c = x.a <=> y.a; c != 0) return c;
    return x.b <=> y.b;
  }

  friend EisensteinInt operator+(EisensteinInt x, EisensteinInt y) {
    return {narrow(Wide(x.a) + y.a), narrow(Wide(x.b) + y.b)};
  }
  friend EisensteinInt operator-(EisensteinInt x, EisensteinInt y) {
    return {narrow(Wide(x.a) - y.a), narrow(Wide(x.b) - y.b)};
  }
  friend EisensteinInt operator-(EisensteinInt x) { return {narrow(-Wide(x.a)), narrow(-Wide(x.b))}; }
  friend EisensteinInt operator*(EisensteinInt x, EisensteinInt y) {
    const Wide ac = Wide(x.a) * y.a, bd = Wide(x.b) * y.b;
    const Wide ad = Wide(x.a) * y.b, bc = Wide(x.b) * y.a;
    return {narrow(ac - bd), narrow(ad + bc - bd)};
  }
  EisensteinInt& operator+=(EisensteinInt o) { return *this = *this + o; }
  EisensteinInt& operator-=(EisensteinInt o) { return *this = *this - o; }
  EisensteinInt& operator*=(EisensteinInt o) { return *this = *this * o; }

  friend std::ostream& operator<<(std::ostream& os, const EisensteinInt& z) {
    return os << '(' << z.a << ", " << z.b << ')';
  }
};

inline Int norm(EisensteinInt z) { return z.norm(); }

// The six units 1, w, w^2 (= -1-w), -1, -w, -w^2 in rotation order.
inline constexpr std::array<EisensteinInt, 6> kUnits = {
    EisensteinInt{1, 0}, EisensteinInt{1, 1}, EisensteinInt{0, 1},
    EisensteinInt{-1, 0}, EisensteinInt{-1, -1}, EisensteinInt{0, -1}};

struct DivMod {
  EisensteinInt quotient;
  EisensteinInt remainder;
};

// Euclidean division with N(remainder) < N(divisor); quotient rounds each
// coordinate of x * conj(y) / N(y) to the nearest integer.
inline DivMod divmod(EisensteinInt x, EisensteinInt y) {
  if (y.is_zero()) throw DomainError("division by zero in Z[w]");
  const Wide n = y.wide_norm();
  const EisensteinInt yc = y.conj();
  const Wide p = Wide(x.a) * yc.a - Wide(x.b) * yc.b;
  const Wide q = Wide(x.a) * yc.b + Wide(x.b) * yc.a - Wide(x.b) * yc.b;
  EisensteinInt quot{narrow(round_div(p, n)), narrow(round_div(q, n))};
  EisensteinInt rem = x - y * quot;
  return {quot, rem};
}

inline EisensteinInt mod(EisensteinInt x, EisensteinInt y) { return divmod(x, y).remainder; }

inline bool divides(EisensteinInt d, EisensteinInt x) { return mod(x, d).is_zero(); }

// Exact quotient; throws if d does not divide x.
inline EisensteinInt exact_div(EisensteinInt x, EisensteinInt d) {
  auto [q, r] = divmod(x, d);
  if (!r.is_zero()) throw DomainError("exact_div: divisor does not divide");
  return q;
}

inline EisensteinInt gcd(EisensteinInt x, EisensteinInt y) {
  while (!y.is_zero()) {
    EisensteinInt r = mod(x, y);
    x = y;
    y = r;
  }
  return x;
}

inline bool associates(EisensteinInt x, EisensteinInt y) {
  for (const auto& u : kUnits)
    if (x == u * y) return true;
  return false;
}

// Associate with a > 0 and lexicographically least (a, b). Zero maps to zero.
inline EisensteinInt normalize(EisensteinInt z) {
  if (z.is_zero()) return z;
  bool found = false;
  EisensteinInt best;
  for (const auto& u : kUnits) {
    EisensteinInt c = u * z;
    if (c.a > 0 && (!found || c < best)) {
      best = c;
      found = true;
    }
  }
  return best;
}

inline EisensteinInt pow(EisensteinInt x, unsigned e) {
  EisensteinInt r = EisensteinInt::one();
  while (e) {
    if (e & 1u) r *= x;
    x *= x;
    e >>= 1u;
  }
  return r;
}

// x^e reduced modulo m at every step (ground-truth residue arithmetic).
inline EisensteinInt pow_mod(EisensteinInt x, std::uint64_t e, EisensteinInt m) {
  EisensteinInt r = mod(EisensteinInt::one(), m);
  x = mod(x, m);
  while (e) {
    if (e & 1u) r = mod(r * x, m);
    x = mod(x * x, m);
    e >>= 1u;
  }
  return r;
}

}  // namespace cubicvd
