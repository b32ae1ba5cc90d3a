#pragma once

// Coefficients lambda_y of exp((i/2) y L(s, chi)) = sum_a lambda_y(a) chi(a) N(a)^{-s}
// and the truncated double series for exp(i Re(conj(y) L)).

#include <cmath>
#include <complex>

#include "cubicvd/lfunc/series.hpp"

namespace cubicvd {

inline constexpr int kLambdaExponentCap = 64;

// G_r(u) = sum_{k=1}^r C(r-1, k-1) u^k / k!,  G_0 = 1; exp(u t/(1-t)) = sum G_r(u) t^r.
inline cplx generating_g(int r, cplx u) {
  if (r == 0) return {1.0, 0.0};
  cplx term = u, sum = u;
  for (int k = 1; k < r; ++k) {
    term *= u * (double(r - k) / (double(k) * double(k + 1)));
    sum += term;
  }
  return sum;
}

// Local coefficient lambda_y(p^alpha). Case 2 depends on N(p) through
// u = -(i/2) y log N(p); Case 1 is (w)_alpha / alpha! with w = i y / 2.
inline cplx lambda_y(const PrimeIdealRec& prime, int alpha, cplx y, Mode mode) {
  if (alpha < 0) throw ValidationError("lambda_y: exponent must be nonnegative");
  if (alpha > kLambdaExponentCap) throw CapacityError("lambda_y: exponent above cap");
  const cplx half_iy = cplx{0.0, 0.5} * y;
  if (mode == Mode::case2) return generating_g(alpha, -half_iy * std::log(double(prime.norm)));
  cplx c{1.0, 0.0};
  for (int k = 1; k <= alpha; ++k) c *= (half_iy + double(k - 1)) / double(k);
  return c;
}

struct LambdaCoefficient {
  PrimeIdealRec prime;
  int alpha = 0;
  cplx y;
  Mode mode = Mode::case2;
  cplx value;
};

inline LambdaCoefficient lambda_coefficient(const PrimeIdealRec& p, int alpha, cplx y, Mode mode) {
  return {p, alpha, y, mode, lambda_y(p, alpha, y, mode)};
}

namespace detail {

// sum_{N(a) <= X} lambda_y(a) chi(a) N(a)^{-s}
inline cplx lambda_dirichlet_sum(const EvalPoint& s, const CharTable& t, cplx y, Mode mode, std::uint64_t X) {
  const auto x = local_terms(s, t);
  std::vector<std::vector<cplx>> cache(t.size());
  return multiplicative_sum(prime_span(t), X, [&](std::size_t i, int e) {
    if (x[i] == cplx{}) return cplx{};
    auto& row = cache[i];
    while (int(row.size()) < e) {
      const int a = int(row.size()) + 1;
      row.push_back(lambda_y(t.prime(i), a, y, mode) * std::pow(x[i], a));
    }
    return row[e - 1];
  });
}

}  // namespace detail

// Truncation of I_y = sum_{a,b} lambda_{conj y}(a) lambda_y(b) chi(a b^2) N(a)^{-s} N(b)^{-conj s}
// to N(a), N(b) <= X. The box factorizes into two single sums.
inline cplx i_y_series(const EvalPoint& s, const CharTable& t, cplx y, Mode mode, std::uint64_t X) {
  if (!(s.sigma() > 1.0)) throw ValidationError("i_y_series: needs sigma > 1");
  t.require(X);
  const cplx a = detail::lambda_dirichlet_sum(s, t, std::conj(y), mode, X);
  const cplx b = detail::lambda_dirichlet_sum(s.conj(), t.conjugate(), y, mode, X);
  return a * b;
}

inline cplx i_y_series(const EvalPoint& s, const CubicCharacter& c, cplx y, Mode mode, std::uint64_t X) {
  return i_y_series(s, CharTable::of(c, X), y, mode, X);
}

// exp(i (y1 Re L + y2 Im L)) = exp(i Re(conj(y) L))
inline cplx unit_phase(cplx y, cplx L) { return std::polar(1.0, std::real(std::conj(y) * L)); }

}  // namespace cubicvd
