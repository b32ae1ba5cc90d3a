#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "cubicvd/eisenstein/integer.hpp"
#include "cubicvd/eisenstein/rational_primes.hpp"

namespace cubicvd {

enum class Splitting { ramified, inert, split };

inline std::string_view to_string(Splitting s) {
  switch (s) {
    case Splitting::ramified: return "ramified";
    case Splitting::inert: return "inert";
    case Splitting::split: return "split";
  }
  return "?";
}

struct PrimeIdealRec {
  EisensteinInt generator;  // normalized associate
  Int norm = 0;
  Splitting splitting = Splitting::inert;
  Int rational_prime = 0;

  friend bool operator==(const PrimeIdealRec&, const PrimeIdealRec&) = default;
};

// Generator order: ascending norm, then lexicographic normalized generator.
inline bool ideal_order(const PrimeIdealRec& x, const PrimeIdealRec& y) {
  if (x.norm != y.norm) return x.norm < y.norm;
  return x.generator < y.generator;
}

inline constexpr std::uint64_t kDefaultSieveLimit = 100'000'000;

inline PrimeIdealRec ramified_prime() { return {EisensteinInt{1, -1}, 3, Splitting::ramified, 3}; }

inline PrimeIdealRec inert_prime(Int p) { return {EisensteinInt{p, 0}, p * p, Splitting::inert, p}; }

// A primitive cube root of unity modulo p, p = 1 (mod 3).
inline std::uint64_t cube_root_of_unity(std::uint64_t p) {
  for (std::uint64_t g = 2; g < p; ++g) {
    std::uint64_t r = powmod(g, (p - 1) / 3, p);
    if (r != 1) return r;
  }
  throw DomainError("no primitive cube root of unity: p is not 1 mod 3");
}

// The two prime ideals above a split rational prime p, in generator order.
inline std::array<PrimeIdealRec, 2> split_primes(Int p) {
  if (p % 3 != 1) throw ValidationError("split_primes: p must be 1 mod 3");
  const auto r = static_cast<Int>(cube_root_of_unity(static_cast<std::uint64_t>(p)));
  EisensteinInt g = gcd(EisensteinInt{p, 0}, EisensteinInt{-r, 1});
  if (g.norm() != p) throw DomainError("split_primes: gcd did not isolate a prime of norm p");
  PrimeIdealRec x{normalize(g), p, Splitting::split, p};
  PrimeIdealRec y{normalize(g.conj()), p, Splitting::split, p};
  if (ideal_order(y, x)) std::swap(x, y);
  return {x, y};
}

// Every prime ideal of norm <= X, in generator order.
inline std::vector<PrimeIdealRec> enumerate_prime_ideals(std::uint64_t X,
                                                         std::uint64_t sieve_limit = kDefaultSieveLimit) {
  if (X > sieve_limit) throw CapacityError("enumerate_prime_ideals: X exceeds sieve limit");
  std::vector<PrimeIdealRec> out;
  if (X < 3) return out;
  for (std::uint32_t p : primes_up_to(X)) {
    if (p == 3) {
      out.push_back(ramified_prime());
    } else if (p % 3 == 2) {
      if (std::uint64_t(p) * p <= X) out.push_back(inert_prime(p));
    } else if (p % 3 == 1) {
      auto pair = split_primes(p);
      out.push_back(pair[0]);
      out.push_back(pair[1]);
    }
  }
  std::sort(out.begin(), out.end(), ideal_order);
  return out;
}

// Norm with the number of prime ideals of that norm; charfn only needs this.
struct PrimeNorm {
  std::uint64_t norm;
  int count;
};

// Prime ideal norms in [lo, hi], ascending, without computing generators.
inline std::vector<PrimeNorm> prime_norms_in(std::uint64_t lo, std::uint64_t hi) {
  std::vector<PrimeNorm> out;
  if (hi < 3 || lo > hi) return out;
  // inert norms p^2 with lo <= p^2 <= hi
  std::vector<PrimeNorm> inert;
  const std::uint64_t plo = isqrt(lo > 0 ? lo - 1 : 0) + 1, phi = isqrt(hi);
  for_each_prime_in(plo, phi, [&](std::uint64_t p) {
    if (p % 3 == 2) inert.push_back({p * p, 1});
  });
  std::size_t k = 0;
  for_each_prime_in(lo, hi, [&](std::uint64_t p) {
    while (k < inert.size() && inert[k].norm < p) out.push_back(inert[k++]);
    if (p == 3) out.push_back({3, 1});
    else if (p % 3 == 1) out.push_back({p, 2});
  });
  while (k < inert.size()) out.push_back(inert[k++]);
  return out;
}

inline std::vector<PrimeNorm> prime_norms_up_to(std::uint64_t X) { return prime_norms_in(1, X); }

// Number of prime ideals with norm <= x.
inline std::uint64_t prime_ideal_count(std::uint64_t x) {
  std::uint64_t n = 0;
  for (const auto& pn : prime_norms_up_to(x)) n += static_cast<std::uint64_t>(pn.count);
  return n;
}

}  // namespace cubicvd
