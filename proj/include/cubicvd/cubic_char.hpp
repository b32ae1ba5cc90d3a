#pragma once

// Cubic residue symbols (a / pi)_3 by the Euler criterion, and the family
// characters chi_c = ( . / c)_3.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cubicvd/eisenstein.hpp"

namespace cubicvd {

// A value in {0, 1, w, w^2}.
class CharValue {
 public:
  enum class Code : std::uint8_t { zero, one, omega, omega2 };

  constexpr CharValue() = default;
  constexpr explicit CharValue(Code c) : code_(c) {}

  static constexpr CharValue zero() { return CharValue(Code::zero); }
  static constexpr CharValue one() { return CharValue(Code::one); }
  // w^k for any integer k
  static constexpr CharValue power_of_omega(int k) {
    k %= 3;
    if (k < 0) k += 3;
    return CharValue(static_cast<Code>(k + 1));
  }

  constexpr Code code() const { return code_; }
  constexpr bool is_zero() const { return code_ == Code::zero; }
  // exponent k with value = w^k; meaningless for zero
  constexpr int exponent() const { return static_cast<int>(code_) - 1; }

  constexpr CharValue conj() const { return is_zero() ? *this : power_of_omega(-exponent()); }
  constexpr CharValue pow(int k) const {
    if (is_zero()) return k == 0 ? one() : zero();
    return power_of_omega(exponent() * k);
  }

  std::complex<double> to_complex() const {
    switch (code_) {
      case Code::zero: return {0.0, 0.0};
      case Code::one: return {1.0, 0.0};
      case Code::omega: return {-0.5, 0.8660254037844386};
      case Code::omega2: return {-0.5, -0.8660254037844386};
    }
    return {};
  }

  friend constexpr CharValue operator*(CharValue x, CharValue y) {
    if (x.is_zero() || y.is_zero()) return zero();
    return power_of_omega(x.exponent() + y.exponent());
  }
  CharValue& operator*=(CharValue o) { return *this = *this * o; }
  friend constexpr bool operator==(CharValue, CharValue) = default;

 private:
  Code code_ = Code::zero;
};

// Residue field of a non-ramified prime ideal. Split primes map onto F_p via
// w -> r; inert primes use Z[w]/p componentwise (the field with p^2 elements).
class ResidueField {
 public:
  explicit ResidueField(const PrimeIdealRec& pi) : prime_(pi) {
    if (pi.splitting == Splitting::ramified)
      throw ValidationError("cubic symbol is not defined modulo the ramified prime");
    p_ = static_cast<std::uint64_t>(pi.rational_prime);
    exponent_ = (static_cast<std::uint64_t>(pi.norm) - 1) / 3;
    if (pi.splitting == Splitting::split) {
      const std::uint64_t a = reduce(pi.generator.a), b = reduce(pi.generator.b);
      const std::uint64_t binv = powmod(b, p_ - 2, p_);
      r_ = mulmod(p_ - a == p_ ? 0 : p_ - a, binv, p_);  // w = -a/b
      r2_ = mulmod(r_, r_, p_);
    }
  }

  const PrimeIdealRec& prime() const { return prime_; }

  // Euler criterion: a^((q-1)/3) = (a / pi)_3 (mod pi), matched exactly
  // against the residues of 1, w, w^2.
  CharValue cubic_symbol(EisensteinInt x) const {
    if (prime_.splitting == Splitting::split) {
      const std::uint64_t v = (reduce(x.a) + mulmod(reduce(x.b), r_, p_)) % p_;
      if (v == 0) return CharValue::zero();
      const std::uint64_t e = powmod(v, exponent_, p_);
      if (e == 1) return CharValue::one();
      if (e == r_) return CharValue::power_of_omega(1);
      if (e == r2_) return CharValue::power_of_omega(2);
    } else {
      Pair v{reduce(x.a), reduce(x.b)};
      if (v.u == 0 && v.v == 0) return CharValue::zero();
      Pair e = pow_inert(v, exponent_);
      if (e.u == 1 && e.v == 0) return CharValue::one();
      if (e.u == 0 && e.v == 1) return CharValue::power_of_omega(1);
      if (e.u == p_ - 1 && e.v == p_ - 1) return CharValue::power_of_omega(2);
    }
    throw DomainError("Euler criterion produced a non-cube-root residue");
  }

 private:
  struct Pair {
    std::uint64_t u, v;
  };

  std::uint64_t reduce(Int x) const {
    const auto m = static_cast<Int>(p_);
    Int r = x % m;
    return static_cast<std::uint64_t>(r < 0 ? r + m : r);
  }

  Pair mul_inert(Pair x, Pair y) const {
    const std::uint64_t ac = mulmod(x.u, y.u, p_), bd = mulmod(x.v, y.v, p_);
    const std::uint64_t ad = mulmod(x.u, y.v, p_), bc = mulmod(x.v, y.u, p_);
    return {(ac + p_ - bd) % p_, ((ad + bc) % p_ + p_ - bd) % p_};
  }

  Pair pow_inert(Pair x, std::uint64_t e) const {
    Pair r{1, 0};
    while (e) {
      if (e & 1u) r = mul_inert(r, x);
      x = mul_inert(x, x);
      e >>= 1u;
    }
    return r;
  }

  PrimeIdealRec prime_;
  std::uint64_t p_ = 0, exponent_ = 0, r_ = 0, r2_ = 0;
};

// Reference symbol computed entirely in Z[w] with Euclidean reduction mod pi.
inline CharValue cubic_symbol_reference(EisensteinInt x, const PrimeIdealRec& pi) {
  if (pi.splitting == Splitting::ramified)
    throw ValidationError("cubic symbol is not defined modulo the ramified prime");
  const EisensteinInt m = pi.generator;
  const EisensteinInt xr = mod(x, m);
  if (xr.is_zero()) return CharValue::zero();
  const EisensteinInt e = pow_mod(xr, static_cast<std::uint64_t>((pi.norm - 1) / 3), m);
  for (int k = 0; k < 3; ++k) {
    const EisensteinInt root = pow(EisensteinInt::omega(), static_cast<unsigned>(k));
    if (mod(e - root, m).is_zero()) return CharValue::power_of_omega(k);
  }
  throw DomainError("Euler criterion produced a non-cube-root residue");
}

inline CharValue cubic_symbol(EisensteinInt x, const PrimeIdealRec& pi) { return ResidueField(pi).cubic_symbol(x); }

// chi_c(x) = prod over primes pi | c of (x / pi)_3, for c in the family.
class CubicCharacter {
 public:
  explicit CubicCharacter(FamilyElement modulus) : modulus_(std::move(modulus)) {
    const auto& c = modulus_.c;
    if (c == EisensteinInt::one() || !congruent_one_mod_nine(c))
      throw ValidationError("CubicCharacter: modulus must satisfy c != 1 and c = 1 mod 9");
    if (!modulus_.factorization.squarefree())
      throw ValidationError("CubicCharacter: modulus must be squarefree");
    if (!associates(modulus_.factorization.reassemble(), c) || modulus_.norm != c.norm())
      throw ValidationError("CubicCharacter: factorization does not match modulus");
    for (const auto& f : modulus_.factorization.factors) fields_.emplace_back(f.prime);
  }

  static CubicCharacter of(EisensteinInt c) {
    if (c.is_zero() || c.is_unit()) throw ValidationError("CubicCharacter: modulus must be a non-unit");
    return CubicCharacter(FamilyElement{c, c.norm(), factor(c)});
  }

  const FamilyElement& modulus() const { return modulus_; }
  bool conjugated() const { return conjugated_; }

  // The conjugate character chi_c^2.
  CubicCharacter conjugate() const {
    CubicCharacter out = *this;
    out.conjugated_ = !conjugated_;
    return out;
  }

  CharValue operator()(EisensteinInt x) const {
    CharValue v = CharValue::one();
    for (const auto& f : fields_) {
      v *= f.cubic_symbol(x);
      if (v.is_zero()) return v;
    }
    return conjugated_ ? v.conj() : v;
  }

  // Value on the ideal generated by a prime ideal record.
  CharValue operator()(const PrimeIdealRec& p) const { return (*this)(p.generator); }

  // Values on every prime ideal of a table, in table order.
  std::vector<CharValue> on_primes(std::span<const PrimeIdealRec> primes) const {
    std::vector<CharValue> out;
    out.reserve(primes.size());
    for (const auto& p : primes) out.push_back((*this)(p));
    return out;
  }

 private:
  FamilyElement modulus_;
  std::vector<ResidueField> fields_;
  bool conjugated_ = false;
};

inline CharValue chi(const CubicCharacter& c, EisensteinInt x) { return c(x); }

// Value on an integral ideal expressed over a prime table.
inline CharValue chi(const CubicCharacter& c, const IdealView& ideal, std::span<const PrimeIdealRec> primes) {
  CharValue v = CharValue::one();
  for (const auto& f : ideal.factors) v *= c(primes[f.prime_index]).pow(f.exponent);
  return v;
}

}  // namespace cubicvd
