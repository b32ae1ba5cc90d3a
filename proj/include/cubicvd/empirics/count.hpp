#pragma once

// Smoothed family counts N*(Y) = sum_{c in C} exp(-N(c)/Y) and the constant
// in N*(Y) ~ 3 res zeta_k / (4 |H| zeta_k(2)) Y, each factor computed here.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "cubicvd/eisenstein/family.hpp"

namespace cubicvd {

// #{nonzero a + b w : N <= x} / (6 x); tends to the residue of zeta_k at 1.
inline double residue_from_lattice(std::uint64_t x) {
  const auto bmax = static_cast<Int>(std::sqrt(4.0 * double(x) / 3.0)) + 1;
  std::uint64_t count = 0;
  for (Int b = -bmax; b <= bmax; ++b) {
    // a^2 - a b + b^2 <= x  <=>  |a - b/2| <= sqrt(x - 3 b^2 / 4)
    const double disc = double(x) - 0.75 * double(b) * double(b);
    if (disc < 0) continue;
    const double r = std::sqrt(disc);
    for (Int a = static_cast<Int>(std::floor(0.5 * double(b) - r)) - 1; a <= static_cast<Int>(0.5 * double(b) + r) + 1;
         ++a) {
      const Wide n = EisensteinInt{a, b}.wide_norm();
      if (n >= 1 && n <= Wide(x)) ++count;
    }
  }
  return double(count) / (6.0 * double(x));
}

// L(s, chi_{-3}) = sum_k 1/(3k+1)^s - 1/(3k+2)^s for s >= 1. The paired term
// is s (3k + 3/2)^{-s-1} + O(k^{-s-3}); its sum from K is (3K)^{-s}/3 + O(K^{-s-2}).
inline double dirichlet_l_minus3(double s, std::uint64_t K = 1000000) {
  if (s < 1) throw ValidationError("dirichlet_l_minus3: needs s >= 1");
  double sum = 0;
  for (std::uint64_t k = K; k-- > 0;) sum += std::pow(3.0 * k + 1, -s) - std::pow(3.0 * k + 2, -s);
  return sum + std::pow(3.0 * double(K), -s) / 3.0;
}

inline double dedekind_zeta2(std::uint64_t K = 1000000) {
  return std::numbers::pi * std::numbers::pi / 6.0 * dirichlet_l_minus3(2.0, K);
}

// Order of (Z[w]/9)^* modulo the image of the six units, by orbit counting.
inline std::size_t ray_class_order_mod9() {
  const int m = 9;
  auto coprime_to_3 = [](int a, int b) { return (a * a - a * b + b * b) % 3 != 0; };
  const std::array<EisensteinInt, 6> units = {EisensteinInt{1, 0},  EisensteinInt{-1, 0}, EisensteinInt{0, 1},
                                              EisensteinInt{0, -1}, EisensteinInt{-1, -1}, EisensteinInt{1, 1}};
  auto reduce = [&](EisensteinInt z) {
    return std::pair<int, int>{int(((z.a % m) + m) % m), int(((z.b % m) + m) % m)};
  };
  std::set<std::pair<int, int>> seen;
  std::size_t orbits = 0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (!coprime_to_3(a, b) || seen.count({a, b})) continue;
      ++orbits;
      for (const auto& u : units) seen.insert(reduce(u * EisensteinInt{a, b}));
    }
  return orbits;
}

struct CountConstant {
  double residue = 0;      // L(1, chi_{-3})
  double residue_lattice = 0;
  double zeta_k2 = 0;
  std::size_t ray_class = 0;
  double value = 0;        // 3 res / (4 |H| zeta_k(2))
};

inline CountConstant count_constant(std::uint64_t lattice_x = 4000000) {
  CountConstant c;
  c.residue = dirichlet_l_minus3(1.0);
  c.residue_lattice = residue_from_lattice(lattice_x);
  c.zeta_k2 = dedekind_zeta2();
  c.ray_class = ray_class_order_mod9();
  c.value = 3.0 * c.residue / (4.0 * double(c.ray_class) * c.zeta_k2);
  return c;
}

struct CountReport {
  std::vector<std::uint64_t> ladder;
  std::vector<double> smoothed;       // N*(Y)
  std::vector<std::uint64_t> plain;   // N(Y)
  std::vector<double> smoothing_tail; // bound on the omitted N(c) > kSmoothSpan Y
  double fit_upper = 0;  // mean of N*/Y over [Ymax/2, Ymax]
  double fit_lower = 0;  // mean of N*/Y over [Ymax/4, Ymax/2]
  double fitted() const { return fit_upper; }
  double stability() const { return std::abs(fit_upper - fit_lower) / fit_upper; }
};

inline constexpr double kSmoothSpan = 30.0;

// Members of C with norm <= T, sorted; squarefree test by factoring.
inline std::vector<std::uint64_t> family_norms(std::uint64_t T) {
  if (T > kDefaultSieveLimit) throw CapacityError("family_norms: bound exceeds sieve limit");
  const auto primes = primes_up_to(isqrt(T) + 1);
  std::vector<std::uint64_t> out;
  for_each_candidate(T, [&](EisensteinInt c, Int n) {
    if (factor(c, primes).squarefree()) out.push_back(std::uint64_t(n));
  });
  std::sort(out.begin(), out.end());
  return out;
}

// sum_{N(c) > T} exp(-N/Y) over c = 1 + 9w: the count of such c with N <= x
// is at most (2 pi / sqrt3)(sqrt(x)/9 + 1/sqrt3)^2; integrate by parts.
inline double smoothing_tail_bound(double T, double Y) {
  const double e = std::exp(-T / Y), lin = (T + Y) * e;
  return 2 * std::numbers::pi / std::numbers::sqrt3 *
         (lin / 81.0 + 2.0 / (9.0 * std::numbers::sqrt3) * lin / std::sqrt(T) + e / 3.0);
}

inline CountReport smoothed_count(std::vector<std::uint64_t> ladder) {
  if (ladder.empty()) throw ValidationError("smoothed_count: empty ladder");
  std::sort(ladder.begin(), ladder.end());
  if (ladder.front() < 1) throw ValidationError("smoothed_count: ladder entries must be positive");
  const std::uint64_t Ymax = ladder.back();
  const double T = kSmoothSpan * double(Ymax);
  if (T > double(kDefaultSieveLimit)) throw CapacityError("smoothed_count: ladder exceeds enumeration capacity");
  const auto norms = family_norms(static_cast<std::uint64_t>(T));
  CountReport rep;
  rep.ladder = ladder;
  for (std::uint64_t Y : ladder) {
    const double Tk = kSmoothSpan * double(Y);
    double s = 0;
    // descending order adds the small terms first
    for (auto it = norms.rbegin(); it != norms.rend(); ++it)
      if (double(*it) <= Tk) s += std::exp(-double(*it) / double(Y));
    rep.smoothed.push_back(s);
    rep.plain.push_back(std::uint64_t(std::upper_bound(norms.begin(), norms.end(), Y) - norms.begin()));
    rep.smoothing_tail.push_back(smoothing_tail_bound(Tk, double(Y)));
  }
  auto fit = [&](double lo, double hi) {
    double s = 0;
    int k = 0;
    for (std::size_t i = 0; i < ladder.size(); ++i)
      if (double(ladder[i]) >= lo && double(ladder[i]) <= hi) s += rep.smoothed[i] / double(ladder[i]), ++k;
    if (k == 0) throw ValidationError("smoothed_count: ladder has no point in a fit window");
    return s / k;
  };
  rep.fit_upper = fit(double(Ymax) / 2, double(Ymax));
  rep.fit_lower = fit(double(Ymax) / 4, double(Ymax) / 2);
  return rep;
}

// Ymax k / n for k = 1..n
inline std::vector<std::uint64_t> linear_ladder(std::uint64_t Ymax, int n = 16) {
  std::vector<std::uint64_t> v;
  for (int k = 1; k <= n; ++k) v.push_back(Ymax * std::uint64_t(k) / std::uint64_t(n));
  return v;
}

}  // namespace cubicvd
