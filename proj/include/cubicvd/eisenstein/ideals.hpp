#pragma once

// Integral ideals generated multiplicatively from a prime-ideal table.

#include <span>
#include <utility>
#include <vector>

#include "cubicvd/eisenstein/prime_ideals.hpp"

namespace cubicvd {

struct PrimePower {
  std::size_t prime_index;  // into the prime table handed to the enumerator
  int exponent;
};

struct IdealView {
  std::uint64_t norm;
  std::span<const PrimePower> factors;  // ascending prime_index
};

namespace detail {

template <class Visit>
void ideals_rec(std::span<const PrimeIdealRec> primes, std::uint64_t X, std::size_t start,
                std::uint64_t norm, std::vector<PrimePower>& stack, Visit& visit) {
  visit(IdealView{norm, std::span<const PrimePower>(stack)});
  for (std::size_t i = start; i < primes.size(); ++i) {
    const auto pn = static_cast<std::uint64_t>(primes[i].norm);
    if (norm > X / pn) break;  // table is sorted by norm
    std::uint64_t m = norm * pn;
    int e = 1;
    stack.push_back({i, 1});
    for (;;) {
      stack.back().exponent = e;
      ideals_rec(primes, X, i + 1, m, stack, visit);
      if (m > X / pn) break;
      m *= pn;
      ++e;
    }
    stack.pop_back();
  }
}

}  // namespace detail

// Streams every integral ideal of norm <= X exactly once (the unit ideal
// first, then depth-first). `primes` must be sorted by norm and contain every
// prime ideal of norm <= X.
template <class Visit>
void enumerate_ideals(std::span<const PrimeIdealRec> primes, std::uint64_t X, Visit&& visit) {
  if (X < 1) return;
  std::vector<PrimePower> stack;
  detail::ideals_rec(primes, X, 0, 1, stack, visit);
}

struct IdealRecord {
  std::uint64_t norm;
  std::vector<PrimePower> factors;
};

inline std::vector<IdealRecord> collect_ideals(std::span<const PrimeIdealRec> primes, std::uint64_t X) {
  std::vector<IdealRecord> out;
  enumerate_ideals(primes, X, [&](const IdealView& v) {
    out.push_back({v.norm, {v.factors.begin(), v.factors.end()}});
  });
  return out;
}

}  // namespace cubicvd
