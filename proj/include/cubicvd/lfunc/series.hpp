#pragma once

// Truncated Dirichlet series and Euler sums for L(s, chi_c).

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "cubicvd/lfunc/tail.hpp"
#include "cubicvd/lfunc/types.hpp"

namespace cubicvd {

namespace detail {

template <class Local>
void multiplicative_rec(std::span<const PrimeIdealRec> primes, std::uint64_t X, std::size_t start,
                        std::uint64_t norm, cplx prod, Local& local, cplx& total, std::uint64_t& count) {
  total += prod;
  ++count;
  for (std::size_t i = start; i < primes.size(); ++i) {
    const auto pn = static_cast<std::uint64_t>(primes[i].norm);
    if (norm > X / pn) break;
    std::uint64_t m = norm * pn;
    for (int e = 1;; ++e) {
      multiplicative_rec(primes, X, i + 1, m, prod * local(i, e), local, total, count);
      if (m > X / pn) break;
      m *= pn;
    }
  }
}

}  // namespace detail

// sum over ideals a with N(a) <= X of f(a), f multiplicative with
// f(p_i^e) = local(i, e). The count of ideals visited is returned through `count`.
template <class Local>
cplx multiplicative_sum(std::span<const PrimeIdealRec> primes, std::uint64_t X, Local&& local,
                        std::uint64_t* count = nullptr) {
  cplx total{0.0, 0.0};
  std::uint64_t n = 0;
  if (X >= 1) detail::multiplicative_rec(primes, X, 0, 1, cplx{1.0, 0.0}, local, total, n);
  if (count) *count = n;
  return total;
}

namespace detail {

inline std::span<const PrimeIdealRec> prime_span(const CharTable& t) { return {t.primes->data(), t.primes->size()}; }

inline std::vector<cplx> local_terms(const EvalPoint& s, const CharTable& t) {
  std::vector<cplx> x(t.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = t.values[i].is_zero() ? cplx{} : t.values[i].to_complex() * s.norm_power(double(t.prime(i).norm));
  return x;
}

}  // namespace detail

// sum_{N(a) <= X} chi(a) N(a)^{-s}
inline LValue l_series(const EvalPoint& s, const CharTable& t, std::uint64_t X) {
  t.require(X);
  LValue out;
  if (X == 0) {
    out.heuristic = !(s.sigma() > 1.0);
    out.truncation_error = out.heuristic ? kNoBound : tail::ideal_series_total(s.sigma());
    return out;
  }
  const auto x = detail::local_terms(s, t);
  std::uint64_t count = 0;
  out.value = multiplicative_sum(detail::prime_span(t), X, [&](std::size_t i, int e) { return std::pow(x[i], e); }, &count);
  if (s.sigma() > 1.0) {
    out.truncation_error = tail::ideal_series_tail(double(X), s.sigma(), double(count));
  } else {
    out.heuristic = true;
    out.truncation_error = kNoBound;
  }
  return out;
}

// sum_a chi(a) N(a)^{-s} exp(-N(a)/Xs), summed to N(a) <= 40 Xs. Always heuristic.
inline LValue l_series_smoothed(const EvalPoint& s, const CharTable& t, double Xs) {
  if (!(Xs > 0)) throw ValidationError("l_series_smoothed: smoothing length must be positive");
  const auto X = static_cast<std::uint64_t>(std::ceil(40.0 * Xs));
  t.require(X);
  const auto x = detail::local_terms(s, t);
  LValue out;
  out.heuristic = true;
  out.truncation_error = kNoBound;
  // exp(-N/Xs) is not multiplicative, so walk ideals explicitly
  enumerate_ideals(detail::prime_span(t), X, [&](const IdealView& v) {
    cplx term{1.0, 0.0};
    for (const auto& f : v.factors) term *= std::pow(x[f.prime_index], f.exponent);
    out.value += term * std::exp(-double(v.norm) / Xs);
  });
  return out;
}

// sum_{N(p) <= X} -log(1 - chi(p) N(p)^{-s}) = sum_p sum_k chi(p)^k / (k N(p)^{ks})
inline LValue log_l(const EvalPoint& s, const CharTable& t, std::uint64_t X) {
  t.require(X);
  LValue out;
  for (std::size_t i = 0; i < t.size() && std::uint64_t(t.prime(i).norm) <= X; ++i) {
    if (t.values[i].is_zero()) continue;
    out.value -= std::log(1.0 - t.values[i].to_complex() * s.norm_power(double(t.prime(i).norm)));
  }
  if (s.sigma() > 1.0) {
    // -log(1 - r) <= r / (1 - r) with r = N^{-sigma} <= n0^{-sigma}
    const std::uint64_t n0 = std::max<std::uint64_t>(tail::first_integer_above(double(X)), 3);
    const double r0 = std::pow(double(n0), -s.sigma());
    out.truncation_error = 2.0 * tail::log_power_sum_from(n0, s.sigma(), 0) / (1.0 - r0);
  } else {
    out.heuristic = true;
    out.truncation_error = kNoBound;
  }
  return out;
}

// -sum_{N(p)^k <= X} log N(p) chi(p)^k N(p)^{-ks}
inline LValue log_deriv_l(const EvalPoint& s, const CharTable& t, std::uint64_t X) {
  t.require(X);
  LValue out;
  for (std::size_t i = 0; i < t.size() && std::uint64_t(t.prime(i).norm) <= X; ++i) {
    if (t.values[i].is_zero()) continue;
    const auto pn = static_cast<std::uint64_t>(t.prime(i).norm);
    const double L = std::log(double(pn));
    const cplx x = t.values[i].to_complex() * s.norm_power(double(pn));
    cplx xk = x;
    for (std::uint64_t m = pn;; m *= pn) {
      out.value -= L * xk;
      if (m > X / pn) break;
      xk *= x;
    }
  }
  if (s.sigma() > 1.0) {
    // weight of prime powers of norm m is at most 2 log m
    out.truncation_error = 2.0 * tail::log_power_sum_from(tail::first_integer_above(double(X)), s.sigma(), 1);
  } else {
    out.heuristic = true;
    out.truncation_error = kNoBound;
  }
  return out;
}

inline LValue l_function(Mode mode, const EvalPoint& s, const CharTable& t, std::uint64_t X) {
  return mode == Mode::case1 ? log_l(s, t, X) : log_deriv_l(s, t, X);
}

// Overloads that build the character table on the fly.
inline LValue l_series(const EvalPoint& s, const CubicCharacter& c, std::uint64_t X) {
  return l_series(s, CharTable::of(c, X), X);
}
inline LValue log_l(const EvalPoint& s, const CubicCharacter& c, std::uint64_t X) {
  return log_l(s, CharTable::of(c, X), X);
}
inline LValue log_deriv_l(const EvalPoint& s, const CubicCharacter& c, std::uint64_t X) {
  return log_deriv_l(s, CharTable::of(c, X), X);
}

}  // namespace cubicvd
