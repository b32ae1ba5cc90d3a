#pragma once

// Sup distance between the empirical CDF of points and a grid CDF on a
// lattice of marginal sample quantiles.

#include <algorithm>
#include <span>
#include <vector>

#include "cubicvd/density/grid.hpp"

namespace cubicvd {

struct DiscrepancyReport {
  double sup = 0;
  double at_z1 = 0, at_z2 = 0;
  double empirical_at = 0, model_at = 0;
  std::size_t lattice = 0, points_used = 0, points_skipped = 0, n = 0;
};

inline constexpr std::size_t kCompareLattice = 64;

inline DiscrepancyReport compare_2d(std::span<const cplx> z, const DensityGrid& grid,
                                    std::size_t lattice = kCompareLattice) {
  if (z.empty()) throw ValidationError("compare_2d: no samples");
  if (lattice == 0) throw ValidationError("compare_2d: empty lattice");
  DiscrepancyReport r;
  r.lattice = lattice;
  r.n = z.size();
  std::vector<double> re, im;
  re.reserve(z.size());
  im.reserve(z.size());
  for (const cplx& v : z) re.push_back(v.real()), im.push_back(v.imag());
  std::sort(re.begin(), re.end());
  std::sort(im.begin(), im.end());
  std::vector<double> q1(lattice), q2(lattice);
  for (std::size_t a = 0; a < lattice; ++a) {
    const auto idx = static_cast<std::size_t>((double(a) + 0.5) / double(lattice) * double(z.size()));
    q1[a] = re[std::min(idx, z.size() - 1)];
    q2[a] = im[std::min(idx, z.size() - 1)];
  }
  // counts[b][a]: points whose first lattice index >= own coordinate is (a, b)
  std::vector<std::size_t> counts((lattice + 1) * (lattice + 1), 0);
  for (const cplx& v : z) {
    const auto a = static_cast<std::size_t>(std::lower_bound(q1.begin(), q1.end(), v.real()) - q1.begin());
    const auto b = static_cast<std::size_t>(std::lower_bound(q2.begin(), q2.end(), v.imag()) - q2.begin());
    ++counts[b * (lattice + 1) + a];
  }
  std::vector<double> F(lattice * lattice);
  std::vector<std::size_t> col(lattice, 0);
  for (std::size_t b = 0; b < lattice; ++b) {
    std::size_t row = 0;
    for (std::size_t a = 0; a < lattice; ++a) {
      row += counts[b * (lattice + 1) + a];
      col[a] += row;
      F[b * lattice + a] = double(col[a]) / double(z.size());
    }
  }
  for (std::size_t b = 0; b < lattice; ++b)
    for (std::size_t a = 0; a < lattice; ++a) {
      double model;
      try {
        model = cdf(grid, q1[a], q2[b]);
      } catch (const DomainError&) {
        ++r.points_skipped;
        continue;
      }
      ++r.points_used;
      const double d = std::abs(F[b * lattice + a] - model);
      if (d > r.sup || r.points_used == 1) {
        r.sup = d;
        r.at_z1 = q1[a], r.at_z2 = q2[b];
        r.empirical_at = F[b * lattice + a];
        r.model_at = model;
      }
    }
  return r;
}

}  // namespace cubicvd
