#pragma once

// Exact-integer CSV tables for prime ideals and family members.

#include <ostream>
#include <span>

#include "cubicvd/eisenstein/family.hpp"

namespace cubicvd {

inline void write_prime_ideal_csv(std::ostream& os, std::span<const PrimeIdealRec> primes) {
  os << "a,b,norm,splitting,rational_prime\n";
  for (const auto& p : primes)
    os << p.generator.a << ',' << p.generator.b << ',' << p.norm << ',' << to_string(p.splitting) << ','
       << p.rational_prime << '\n';
}

inline void write_family_csv(std::ostream& os, std::span<const FamilyElement> family) {
  os << "a,b,norm\n";
  for (const auto& f : family) os << f.c.a << ',' << f.c.b << ',' << f.norm << '\n';
}

}  // namespace cubicvd
