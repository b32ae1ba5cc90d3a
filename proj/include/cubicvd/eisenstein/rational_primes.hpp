#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cubicvd/common/error.hpp"

namespace cubicvd {

inline std::uint64_t mulmod(std::uint64_t x, std::uint64_t y, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * y) % m);
}

inline std::uint64_t powmod(std::uint64_t x, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  x %= m;
  while (e) {
    if (e & 1u) r = mulmod(r, x, m);
    x = mulmod(x, x, m);
    e >>= 1u;
  }
  return r;
}

inline std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1u) == 0) {
    d >>= 1u;
    ++r;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r && composite; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

// All primes <= limit, ascending.
inline std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  if (limit > 0xFFFFFFFFull) throw CapacityError("primes_up_to: limit exceeds 32-bit table");
  std::vector<std::uint8_t> composite(limit + 1, 0);
  for (std::uint64_t i = 2; i * i <= limit; ++i)
    if (!composite[i])
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  out.reserve(static_cast<std::size_t>(1.1 * limit / std::max(1.0, std::log(double(limit)))) + 8);
  for (std::uint64_t i = 2; i <= limit; ++i)
    if (!composite[i]) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

// Segmented sieve: calls visit(p) for every prime lo <= p <= hi, ascending.
template <class Visit>
void for_each_prime_in(std::uint64_t lo, std::uint64_t hi, Visit&& visit) {
  if (hi < 2 || lo > hi) return;
  lo = std::max<std::uint64_t>(lo, 2);
  const auto base = primes_up_to(isqrt(hi));
  constexpr std::uint64_t kSegment = 1u << 20;
  std::vector<std::uint8_t> seg(kSegment);
  for (std::uint64_t start = lo; start <= hi; start += kSegment) {
    const std::uint64_t end = std::min(hi, start + kSegment - 1);
    std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(end - start + 1), 0);
    for (std::uint64_t p : base) {
      if (p * p > end) break;
      std::uint64_t first = std::max(p * p, (start + p - 1) / p * p);
      for (std::uint64_t j = first; j <= end; j += p) seg[j - start] = 1;
    }
    for (std::uint64_t i = start; i <= end; ++i)
      if (!seg[i - start]) visit(i);
    if (end == hi) break;
  }
}

}  // namespace cubicvd
