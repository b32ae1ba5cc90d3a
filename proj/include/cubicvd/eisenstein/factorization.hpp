#pragma once

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "cubicvd/eisenstein/prime_ideals.hpp"

namespace cubicvd {

struct IdealFactor {
  PrimeIdealRec prime;
  int exponent = 1;
  friend bool operator==(const IdealFactor&, const IdealFactor&) = default;
};

struct IdealFactorization {
  std::vector<IdealFactor> factors;  // generator order

  bool squarefree() const {
    return std::all_of(factors.begin(), factors.end(), [](const auto& f) { return f.exponent == 1; });
  }

  // Product of generator^exponent; an associate of the factored element.
  EisensteinInt reassemble() const {
    EisensteinInt r = EisensteinInt::one();
    for (const auto& f : factors) r *= pow(f.prime.generator, static_cast<unsigned>(f.exponent));
    return r;
  }

  friend bool operator==(const IdealFactorization&, const IdealFactorization&) = default;
};

namespace detail {

inline int strip(EisensteinInt& w, Int& n, EisensteinInt pi, Int pnorm) {
  int e = 0;
  for (;;) {
    auto [q, r] = divmod(w, pi);
    if (!r.is_zero()) break;
    w = q;
    n /= pnorm;
    ++e;
  }
  return e;
}

}  // namespace detail

// Factor z by trial division of its norm by the rational primes in `primes`
// (must cover every prime up to sqrt(N(z))).
inline IdealFactorization factor(EisensteinInt z, std::span<const std::uint32_t> primes) {
  if (z.is_zero()) throw ValidationError("factor: zero has no factorization");
  if (z.is_unit()) throw ValidationError("factor: units have no prime factors");
  IdealFactorization out;
  EisensteinInt w = z;
  Int n = z.norm();
  auto push = [&](const PrimeIdealRec& rec, int e) {
    if (e > 0) out.factors.push_back({rec, e});
  };
  if (n % 3 == 0) {
    auto rec = ramified_prime();
    push(rec, detail::strip(w, n, rec.generator, 3));
  }
  for (std::uint32_t p32 : primes) {
    const Int p = p32;
    if (p == 3) continue;
    if (p * p > n) break;
    if (n % p != 0) continue;
    if (p % 3 == 2) {
      auto rec = inert_prime(p);
      push(rec, detail::strip(w, n, rec.generator, p * p));
    } else if ((n / p) % p != 0) {
      // exactly one split prime above p divides w, once
      EisensteinInt g = normalize(gcd(w, EisensteinInt{p, 0}));
      push(PrimeIdealRec{g, p, Splitting::split, p}, detail::strip(w, n, g, p));
    } else {
      for (const auto& rec : split_primes(p)) push(rec, detail::strip(w, n, rec.generator, p));
    }
  }
  if (n > 1) {
    if (!is_prime_u64(static_cast<std::uint64_t>(n)))
      throw CapacityError("factor: prime table does not reach sqrt(norm)");
    if (n % 3 != 1) throw DomainError("factor: leftover cofactor is not a split prime norm");
    push(PrimeIdealRec{normalize(w), n, Splitting::split, n}, 1);
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const IdealFactor& x, const IdealFactor& y) { return ideal_order(x.prime, y.prime); });
  return out;
}

inline IdealFactorization factor(EisensteinInt z) {
  if (z.is_zero()) throw ValidationError("factor: zero has no factorization");
  const auto table = primes_up_to(isqrt(static_cast<std::uint64_t>(z.norm())) + 1);
  return factor(z, table);
}

}  // namespace cubicvd
