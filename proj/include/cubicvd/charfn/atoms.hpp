#pragma once

// Local shifts a_{p,j}(s) and the four-point local distributions.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "cubicvd/lfunc/types.hpp"

namespace cubicvd {

inline const std::array<cplx, 3> kZeta3 = {cplx{1.0, 0.0}, cplx{-0.5, std::numbers::sqrt3 / 2},
                                           cplx{-0.5, -std::numbers::sqrt3 / 2}};

// log(1 - x), accurate for small |x|
inline cplx log1m(cplx x) {
  const double r = std::abs(x);
  if (r >= 0.01) return std::log(1.0 - x);
  cplx term = x, sum{};
  for (int k = 1; k < 40; ++k) {
    sum += term / double(k);
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    term *= x;
  }
  return -sum;
}

// Case 1: log(1 - zeta^j N^{-s});  Case 2: zeta^j log N / (N^s - zeta^j).
inline cplx local_a(double norm, int j, const EvalPoint& s, Mode mode) {
  if (j < 0 || j > 2) throw ValidationError("local_a: j must be 0, 1 or 2");
  const double L = std::log(norm);
  if (mode == Mode::case1) {
    const cplx x = kZeta3[j] * std::exp(-s.s() * L);
    if (std::abs(1.0 - x) == 0.0) throw DomainError("local_a: logarithm singularity");
    return log1m(x);
  }
  const cplx d = std::exp(s.s() * L) - kZeta3[j];
  if (std::abs(d) == 0.0) throw DomainError("local_a: pole");
  return kZeta3[j] * L / d;
}

inline cplx local_a(const PrimeIdealRec& p, int j, const EvalPoint& s, Mode mode) {
  return local_a(double(p.norm), j, s, mode);
}

// Atoms -a_j with weight N/(3(N+1)) each and 0 with weight 1/(N+1); the
// ramified prime carries the single atom -a_0 with weight 1.
struct LocalAtomSet {
  PrimeIdealRec prime;
  EvalPoint s;
  Mode mode;
  std::array<cplx, 3> a;
  bool deterministic = false;
  double weight_zero = 0.0;  // 1/(N+1)
  double weight_atom = 0.0;  // N/(3(N+1))

  // Exact rational weights: numerators over the common denominator 3(N+1).
  std::uint64_t denominator() const { return deterministic ? 1 : 3 * (std::uint64_t(prime.norm) + 1); }
  std::uint64_t zero_numerator() const { return deterministic ? 0 : 3; }
  std::uint64_t atom_numerator() const { return deterministic ? 1 : std::uint64_t(prime.norm); }
};

inline LocalAtomSet local_atoms(const PrimeIdealRec& p, const EvalPoint& s, Mode mode) {
  LocalAtomSet out{p, s, mode, {}, p.splitting == Splitting::ramified, 0.0, 0.0};
  for (int j = 0; j < 3; ++j) out.a[j] = local_a(p, j, s, mode);
  if (out.deterministic) {
    out.weight_zero = 0.0;
    out.weight_atom = 1.0;
  } else {
    const auto den = static_cast<double>(out.denominator());
    out.weight_zero = 3.0 / den;
    out.weight_atom = double(p.norm) / den;
  }
  return out;
}

}  // namespace cubicvd
