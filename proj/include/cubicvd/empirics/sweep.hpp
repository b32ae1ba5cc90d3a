#pragma once

// L-values over the family C and their empirical distribution.

#include <cmath>
#include <vector>

#include "cubicvd/cubic_char.hpp"
#include "cubicvd/density/compare.hpp"
#include "cubicvd/lfunc/series.hpp"

namespace cubicvd {

struct SweepRecord {
  FamilyElement element;
  cplx value;
  double err_bound = 0;  // inf when heuristic
  bool heuristic = false;
  bool vanishing = false;  // |L| < kVanishing; excluded from statistics
};

inline constexpr double kVanishing = 1e-12;

struct FamilySweep {
  EvalPoint s{1.5};
  Mode mode = Mode::case2;
  std::uint64_t Y = 0, X = 0;
  std::vector<SweepRecord> records;  // family order

  bool heuristic() const { return s.sigma() <= 1.0; }
  std::size_t flagged() const {
    std::size_t k = 0;
    for (const auto& r : records) k += r.vanishing;
    return k;
  }
};

struct SweepOptions {
  unsigned threads = 1;
  bool allow_heuristic = false;  // sigma <= 1: truncated sums without bounds
  double capacity = 2e10;        // limit on Y * X
};

inline FamilySweep sweep_family(const EvalPoint& s, Mode mode, std::uint64_t Y, std::uint64_t X,
                                const SweepOptions& opt = {}) {
  if (s.sigma() <= 1.0 && !opt.allow_heuristic)
    throw ValidationError("sweep_family: sigma <= 1 needs the explicit heuristic option");
  if (X < 2) throw ValidationError("sweep_family: truncation X must be at least 2");
  if (double(Y) * double(X) > opt.capacity) throw CapacityError("sweep_family: Y * X exceeds capacity");
  FamilySweep sw{s, mode, Y, X, {}};
  auto family = enumerate_family(Y);
  sw.records.resize(family.size());
  const auto primes = CharTable::make_primes(X);
  parallel_for(family.size(), opt.threads, [&](std::size_t i) {
    SweepRecord& r = sw.records[i];
    r.element = std::move(family[i]);
    const CubicCharacter chi(r.element);
    const LValue v = l_function(mode, s, CharTable::of(chi, primes, X), X);
    r.value = v.value;
    r.err_bound = v.truncation_error;
    r.heuristic = v.heuristic;
    r.vanishing = std::abs(v.value) < kVanishing;
  });
  return sw;
}

struct EmpiricalCF {
  std::vector<cplx> lattice;
  std::vector<cplx> values;
  double weight_sum = 0;  // sum of exp(-N(c)/Y_smooth) over the records used
  std::size_t n = 0;
};

// sum* exp(i Re(conj(y) L)) exp(-N(c)/Ys) normalized by the same weights over
// the sweep's records.
inline EmpiricalCF empirical_cf(const FamilySweep& sw, double Y_smooth, const std::vector<cplx>& lattice) {
  if (!(Y_smooth > 0)) throw ValidationError("empirical_cf: smoothing scale must be positive");
  EmpiricalCF out;
  out.lattice = lattice;
  out.values.assign(lattice.size(), cplx{});
  for (const auto& r : sw.records) {
    if (r.vanishing) continue;
    const double w = std::exp(-double(r.element.norm) / Y_smooth);
    out.weight_sum += w;
    ++out.n;
    for (std::size_t k = 0; k < lattice.size(); ++k)
      out.values[k] += w * std::polar(1.0, lattice[k].real() * r.value.real() + lattice[k].imag() * r.value.imag());
  }
  if (out.n == 0) throw ValidationError("empirical_cf: empty sweep");
  for (auto& v : out.values) v /= out.weight_sum;
  return out;
}

inline EmpiricalCF empirical_cf(const FamilySweep& sw, const std::vector<cplx>& lattice) {
  return empirical_cf(sw, double(sw.Y), lattice);
}

// L-values of records with N(c) <= Y, flagged ones removed.
inline std::vector<cplx> sweep_values(const FamilySweep& sw, std::uint64_t Y) {
  std::vector<cplx> v;
  for (const auto& r : sw.records)
    if (!r.vanishing && std::uint64_t(r.element.norm) <= Y) v.push_back(r.value);
  return v;
}

struct TheoryDiscrepancy {
  DiscrepancyReport at_Y, at_half_Y;
};

inline TheoryDiscrepancy discrepancy_vs_theory(const FamilySweep& sw, const DensityGrid& grid) {
  if (sw.heuristic()) throw ValidationError("discrepancy_vs_theory: needs a rigorous sweep (sigma > 1)");
  const auto full = sweep_values(sw, sw.Y), half = sweep_values(sw, sw.Y / 2);
  if (full.empty() || half.empty()) throw ValidationError("discrepancy_vs_theory: empty sweep");
  return {compare_2d(full, grid), compare_2d(half, grid)};
}

}  // namespace cubicvd
