#pragma once

// The family C = { c in Z[w] : c != 1, c squarefree, c = 1 (mod 9) }.

#include <algorithm>
#include <cmath>
#include <vector>

#include "cubicvd/eisenstein/factorization.hpp"

namespace cubicvd {

struct FamilyElement {
  EisensteinInt c;
  Int norm = 0;
  IdealFactorization factorization;
};

inline bool congruent_one_mod_nine(EisensteinInt c) {
  const Int a = c.a - 1, b = c.b;
  return a % 9 == 0 && b % 9 == 0;
}

inline bool family_order(const FamilyElement& x, const FamilyElement& y) {
  if (x.norm != y.norm) return x.norm < y.norm;
  return x.c < y.c;
}

// Calls visit(c, norm) for every c = 1 + 9(u + v w) with 1 < N(c) <= Y, in
// lattice scan order. No squarefree test.
template <class Visit>
void for_each_candidate(std::uint64_t Y, Visit&& visit) {
  // |1 + 9 w| <= sqrt(Y)  <=>  |w + 1/9| <= sqrt(Y) / 9
  const double r = std::sqrt(static_cast<double>(Y)) / 9.0;
  const Int vmax = static_cast<Int>(std::ceil(2.0 * r / std::sqrt(3.0))) + 1;
  for (Int v = -vmax; v <= vmax; ++v) {
    const double centre = 0.5 * static_cast<double>(v) - 1.0 / 9.0;
    const Int ulo = static_cast<Int>(std::floor(centre - r)) - 1;
    const Int uhi = static_cast<Int>(std::ceil(centre + r)) + 1;
    for (Int u = ulo; u <= uhi; ++u) {
      const EisensteinInt c{1 + 9 * u, 9 * v};
      const Wide n = c.wide_norm();
      if (n <= 1 || n > static_cast<Wide>(Y)) continue;
      visit(c, static_cast<Int>(n));
    }
  }
}

// Members of C with norm <= Y sorted by norm, then by (a, b).
inline std::vector<FamilyElement> enumerate_family(std::uint64_t Y,
                                                   std::uint64_t sieve_limit = kDefaultSieveLimit) {
  if (Y < 1) throw ValidationError("enumerate_family: Y must be >= 1");
  if (Y > sieve_limit) throw CapacityError("enumerate_family: Y exceeds sieve limit");
  const auto primes = primes_up_to(isqrt(Y) + 1);
  std::vector<FamilyElement> out;
  for_each_candidate(Y, [&](EisensteinInt c, Int n) {
    auto f = factor(c, primes);
    if (f.squarefree()) out.push_back({c, n, std::move(f)});
  });
  std::sort(out.begin(), out.end(), family_order);
  return out;
}

// Squarefree test only; used by counting sweeps that do not keep records.
inline bool is_family_member(EisensteinInt c, std::span<const std::uint32_t> primes) {
  if (c == EisensteinInt::one() || !congruent_one_mod_nine(c)) return false;
  return factor(c, primes).squarefree();
}

}  // namespace cubicvd
