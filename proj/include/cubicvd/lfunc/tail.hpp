#pragma once

// Explicit majorants for Dirichlet-series tails over ideals of Q(sqrt(-3)).

#include <cmath>
#include <cstdint>
#include <numbers>

#include "cubicvd/common/error.hpp"

namespace cubicvd::tail {

// The hexagonal lattice Z[w] has covolume sqrt(3)/2 and Voronoi circumradius
// 1/sqrt(3). Counting cells inside/around the disc |z|^2 <= x gives
//   kappa (sqrt x - delta)^2 - 1/6 <= A(x) <= kappa (sqrt x + delta)^2
// for A(x) = #{ideals of norm <= x}.
inline constexpr double kappa = std::numbers::pi / (3.0 * std::numbers::sqrt3);
inline constexpr double delta = 1.0 / std::numbers::sqrt3;

inline double ideal_count_upper(double x) {
  const double r = std::sqrt(x) + delta;
  return kappa * r * r;
}
inline double ideal_count_lower(double x) {
  const double r = std::sqrt(x) - delta;
  return r > 0 ? std::max(0.0, kappa * r * r - 1.0 / 6.0) : 0.0;
}

// Bound on sum_{N(a) > X} N(a)^{-sigma} given the exact count A(X) = count_at_X.
// Partial summation: -A(X) X^{-sigma} + sigma * int_X^inf A(u) u^{-sigma-1} du.
inline double ideal_series_tail(double X, double sigma, double count_at_X) {
  if (!(sigma > 1.0)) throw ValidationError("ideal_series_tail: needs sigma > 1");
  if (X < 1.0) throw ValidationError("ideal_series_tail: needs X >= 1");
  const double integral = kappa * sigma *
                          (std::pow(X, 1.0 - sigma) / (sigma - 1.0) +
                           2.0 * delta * std::pow(X, 0.5 - sigma) / (sigma - 0.5) +
                           delta * delta * std::pow(X, -sigma) / sigma);
  return std::max(0.0, integral - count_at_X * std::pow(X, -sigma));
}

// sum over all ideals of N^{-sigma}
inline double ideal_series_total(double sigma) { return 1.0 + ideal_series_tail(1.0, sigma, 1.0); }

// int_X^inf log^k(u) u^{-p} du for k in {0,1,2}, p > 1
inline double log_power_integral(double X, double p, int k) {
  const double q = p - 1.0, L = std::log(X), base = std::pow(X, -q);
  switch (k) {
    case 0: return base / q;
    case 1: return base * (L / q + 1.0 / (q * q));
    case 2: return base * (L * L / q + 2.0 * L / (q * q) + 2.0 / (q * q * q));
    default: throw ValidationError("log_power_integral: k must be 0, 1 or 2");
  }
}

// sum_{m >= n0} log^k(m) m^{-p}. Terms are summed directly until the
// summand is decreasing, then one term plus the integral.
inline double log_power_sum_from(std::uint64_t n0, double p, int k) {
  if (!(p > 1.0)) throw ValidationError("log_power_sum_from: needs p > 1");
  if (n0 < 1) n0 = 1;
  const double turn = std::exp(k / p);  // log^k u u^{-p} decreases beyond this
  double s = 0.0;
  std::uint64_t m = n0;
  auto f = [&](double u) { return std::pow(std::log(u), k) * std::pow(u, -p); };
  for (; static_cast<double>(m) < turn + 1.0; ++m) s += f(static_cast<double>(m));
  const double um = static_cast<double>(m);
  return s + f(um) + log_power_integral(um, p, k);
}

// At most two prime ideals share a norm, so a sum over prime ideals (or prime
// powers, weighted by log N(p)) with N > X is at most twice the integer sum.
inline std::uint64_t first_integer_above(double X) {
  return X < 0 ? 1 : static_cast<std::uint64_t>(std::floor(X)) + 1;
}

}  // namespace cubicvd::tail
