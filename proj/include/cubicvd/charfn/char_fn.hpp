#pragma once

// Truncated Euler product for the characteristic function
//   phi_s(y) = E exp(i Re(conj(y) Z)),  Z = sum_p X_p,
// with an explicit bound on the omitted primes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "cubicvd/charfn/atoms.hpp"
#include "cubicvd/common/parallel.hpp"
#include "cubicvd/lfunc/tail.hpp"

namespace cubicvd {

// exp(-i Re(conj(y) a)) = exp(-i (y1 Re a + y2 Im a))
inline cplx phase(cplx y, cplx a) { return std::polar(1.0, -(y.real() * a.real() + y.imag() * a.imag())); }

inline cplx local_factor(const LocalAtomSet& at, cplx y) {
  if (at.deterministic) throw ValidationError("local_factor: the ramified prime enters through the prefactor");
  // w0 + w sum_j z_j with w0 = 1 - 3w, written so that y = 0 gives exactly 1
  return 1.0 - at.weight_atom * (3.0 - (phase(y, at.a[0]) + phase(y, at.a[1]) + phase(y, at.a[2])));
}

inline cplx local_factor(const PrimeIdealRec& p, const EvalPoint& s, cplx y, Mode mode) {
  return local_factor(local_atoms(p, s, mode), y);
}

inline cplx ramified_prefactor(const EvalPoint& s, cplx y, Mode mode) {
  return phase(y, local_a(3.0, 0, s, mode));
}

struct CharFnResult {
  cplx value;
  double tail_bound = 0.0;
  std::uint64_t cutoff = 0;
  bool warn = false;  // tail_bound > 0.5
};

inline constexpr double kTailWarn = 0.5;

// Atoms for every non-ramified prime norm up to the cutoff. The local factor
// depends on the prime only through its norm; split norms occur twice.
class CharFnEvaluator {
 public:
  struct NormAtoms {
    double norm;
    int count;
    std::array<cplx, 3> a;
    double w0, w;
  };

  CharFnEvaluator(EvalPoint s, Mode mode, std::uint64_t cutoff) : s_(s), mode_(mode), cutoff_(cutoff) {
    if (cutoff < 3) throw ValidationError("char_fn: cutoff must be at least 3");
    if (cutoff > kDefaultSieveLimit) throw CapacityError("char_fn: cutoff exceeds sieve limit");
    a3_ = local_a(3.0, 0, s, mode);
    for (const auto& pn : prime_norms_up_to(cutoff)) {
      if (pn.norm == 3) continue;
      NormAtoms na{double(pn.norm), pn.count, {}, 0.0, 0.0};
      for (int j = 0; j < 3; ++j) na.a[j] = local_a(na.norm, j, s, mode);
      na.w0 = 1.0 / (na.norm + 1.0);
      na.w = na.norm / (3.0 * (na.norm + 1.0));
      norms_.push_back(na);
    }
  }

  const EvalPoint& point() const { return s_; }
  Mode mode() const { return mode_; }
  std::uint64_t cutoff() const { return cutoff_; }
  std::span<const NormAtoms> norms() const { return norms_; }

  cplx prefactor(cplx y) const { return phase(y, a3_); }

  static cplx factor(const NormAtoms& na, cplx y) {
    const cplx f = 1.0 - na.w * (3.0 - (phase(y, na.a[0]) + phase(y, na.a[1]) + phase(y, na.a[2])));
    return na.count == 2 ? f * f : f;
  }

  cplx value(cplx y) const {
    cplx v = prefactor(y);
    for (const auto& na : norms_) v *= factor(na, y);
    return v;
  }

  // prod over lo < N <= hi (hi <= cutoff), excluding the ramified prime
  cplx partial_product(cplx y, double lo, double hi) const {
    cplx v{1.0, 0.0};
    for (const auto& na : norms_)
      if (na.norm > lo && na.norm <= hi) v *= factor(na, y);
    return v;
  }

  // sum over N <= cutoff of log|factor|
  double log_abs(cplx y) const {
    double s = 0.0;
    for (const auto& na : norms_) s += 0.5 * std::log(std::norm(factor(na, y)));
    return s;
  }

  // Bound on sum_{N(p) > cutoff} |local_factor - 1| at modulus |y|. Uses
  // |f - 1| <= |y| |sum_j w a_j| + |y|^2/2 sum_j w |a_j|^2 with
  //   sum_j a_j = 3 log N / (N^{3s} - 1)  or  log(1 - N^{-3s}),
  // and at most two prime ideals per norm.
  double tail_sum(double yabs) const { return tail_sum(yabs, cutoff_); }

  double tail_sum(double yabs, std::uint64_t X) const {
    return yabs * tail_first_moment(X) + 0.5 * yabs * yabs * tail_second_moment(X);
  }

  // sum_{N(p) > X} |E X_p| and sum_{N(p) > X} E|X_p|^2 bounds
  double tail_first_moment(std::uint64_t X) const {
    const double sg = s_.sigma();
    const std::uint64_t n0 = std::max<std::uint64_t>(X + 1, 3);
    const double c1 = 1.0 / (1.0 - std::pow(double(n0), -3.0 * sg));
    if (mode_ == Mode::case2) return 2.0 * c1 * tail::log_power_sum_from(n0, 3.0 * sg, 1);
    return 2.0 * c1 / 3.0 * tail::log_power_sum_from(n0, 3.0 * sg, 0);
  }

  double tail_second_moment(std::uint64_t X) const {
    const double sg = s_.sigma();
    const std::uint64_t n0 = std::max<std::uint64_t>(X + 1, 3);
    const double r = std::pow(double(n0), -sg);
    const double c2 = 1.0 / ((1.0 - r) * (1.0 - r));
    return 2.0 * c2 * tail::log_power_sum_from(n0, 2.0 * sg, mode_ == Mode::case2 ? 2 : 0);
  }

  // |prod_{N > X} f - 1| <= sum |f - 1| since every |f| <= 1.
  double tail_bound(cplx value, double yabs) const { return std::abs(value) * std::min(tail_sum(yabs), 2.0); }

  CharFnResult operator()(cplx y) const {
    CharFnResult r;
    r.value = value(y);
    r.tail_bound = tail_bound(r.value, std::abs(y));
    r.cutoff = cutoff_;
    r.warn = r.tail_bound > kTailWarn;
    return r;
  }

  // Values on the lattice y = (y1_0 + i dy1, y2_0 + k dy2), row-major in k.
  // Along a row each phase advances by a fixed rotation; phases are reseeded
  // every kReseed steps to bound drift.
  std::vector<cplx> grid(double y1_0, double dy1, std::size_t n1, double y2_0, double dy2, std::size_t n2,
                         unsigned threads = 1) const {
    std::vector<cplx> out(n1 * n2);
    parallel_for(n2, threads, [&](std::size_t k) {
      const double y2 = y2_0 + double(k) * dy2;
      cplx* row = out.data() + k * n1;
      for (std::size_t i = 0; i < n1; ++i) row[i] = prefactor({y1_0 + double(i) * dy1, y2});
      for (const auto& na : norms_) {
        std::array<cplx, 3> z, step;
        for (int j = 0; j < 3; ++j) step[j] = std::polar(1.0, -dy1 * na.a[j].real());
        for (std::size_t i = 0; i < n1; ++i) {
          if (i % kReseed == 0) {
            const cplx y{y1_0 + double(i) * dy1, y2};
            for (int j = 0; j < 3; ++j) z[j] = phase(y, na.a[j]);
          }
          const cplx f = 1.0 - na.w * (3.0 - (z[0] + z[1] + z[2]));
          row[i] *= na.count == 2 ? f * f : f;
          for (int j = 0; j < 3; ++j) z[j] *= step[j];
        }
      }
    });
    return out;
  }

  static constexpr std::size_t kReseed = 64;

 private:
  EvalPoint s_;
  Mode mode_;
  std::uint64_t cutoff_;
  cplx a3_;
  std::vector<NormAtoms> norms_;
};

inline CharFnResult char_fn(const EvalPoint& s, cplx y, Mode mode, std::uint64_t cutoff) {
  return CharFnEvaluator(s, mode, cutoff)(y);
}

}  // namespace cubicvd
