#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "cubicvd/cubic_char.hpp"

namespace cubicvd {

using cplx = std::complex<double>;

// s = sigma + i t with sigma > 1/2.
class EvalPoint {
 public:
  EvalPoint(double sigma, double t = 0.0) : sigma_(sigma), t_(t) {
    if (!(sigma > 0.5) || !std::isfinite(sigma) || !std::isfinite(t))
      throw ValidationError("EvalPoint: need finite sigma > 1/2 and finite t");
  }
  double sigma() const { return sigma_; }
  double t() const { return t_; }
  cplx s() const { return {sigma_, t_}; }
  EvalPoint conj() const { return {sigma_, -t_}; }
  // N^{-s}
  cplx norm_power(double norm) const { return std::exp(-s() * std::log(norm)); }
  friend bool operator==(const EvalPoint&, const EvalPoint&) = default;

 private:
  double sigma_, t_;
};

// case1: log L(s, chi); case2: L'/L(s, chi).
enum class Mode { case1 = 1, case2 = 2 };

inline Mode mode_from_int(int k) {
  if (k == 1) return Mode::case1;
  if (k == 2) return Mode::case2;
  throw ValidationError("mode must be 1 or 2");
}
inline int to_int(Mode m) { return static_cast<int>(m); }

struct LValue {
  cplx value{0.0, 0.0};
  double truncation_error = 0.0;  // proven bound when !heuristic; +inf otherwise
  bool heuristic = false;
};

inline constexpr double kNoBound = std::numeric_limits<double>::infinity();

// Prime ideals of norm <= limit together with the character values on them.
struct CharTable {
  std::shared_ptr<const std::vector<PrimeIdealRec>> primes;
  std::uint64_t limit = 0;
  std::vector<CharValue> values;

  std::size_t size() const { return values.size(); }
  const PrimeIdealRec& prime(std::size_t i) const { return (*primes)[i]; }

  static std::shared_ptr<const std::vector<PrimeIdealRec>> make_primes(std::uint64_t limit) {
    return std::make_shared<const std::vector<PrimeIdealRec>>(
        limit >= 2 ? enumerate_prime_ideals(limit) : std::vector<PrimeIdealRec>{});
  }

  static CharTable of(const CubicCharacter& chi, std::shared_ptr<const std::vector<PrimeIdealRec>> primes,
                      std::uint64_t limit) {
    CharTable t{std::move(primes), limit, {}};
    t.values = chi.on_primes(*t.primes);
    return t;
  }
  static CharTable of(const CubicCharacter& chi, std::uint64_t limit) { return of(chi, make_primes(limit), limit); }

  // chi == 1 on every prime: the Dedekind zeta function of Q(sqrt(-3)).
  static CharTable trivial(std::shared_ptr<const std::vector<PrimeIdealRec>> primes, std::uint64_t limit) {
    CharTable t{std::move(primes), limit, {}};
    t.values.assign(t.primes->size(), CharValue::one());
    return t;
  }

  CharTable conjugate() const {
    CharTable t = *this;
    for (auto& v : t.values) v = v.conj();
    return t;
  }

  void require(std::uint64_t X) const {
    if (X > limit) throw CapacityError("character table does not reach the requested truncation");
  }
};

}  // namespace cubicvd
