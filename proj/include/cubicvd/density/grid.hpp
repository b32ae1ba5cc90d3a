#pragma once

// Density of Z by Fourier inversion of the truncated Euler product.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "cubicvd/charfn/char_fn.hpp"
#include "cubicvd/charfn/decay.hpp"
#include "cubicvd/density/philox.hpp"

namespace cubicvd {

struct DensityBox {
  double t1_lo = 0, t1_hi = 0, t2_lo = 0, t2_hi = 0;
  double width1() const { return t1_hi - t1_lo; }
  double width2() const { return t2_hi - t2_lo; }
};

inline DensityBox reflect_t2(const DensityBox& b) { return {b.t1_lo, b.t1_hi, -b.t2_hi, -b.t2_lo}; }

// Marginal q / 1-q quantiles, each side padded by `pad` times the width.
inline DensityBox box_from_samples(std::span<const cplx> z, double q = 0.001, double pad = 0.25) {
  if (z.size() < 2) throw ValidationError("box_from_samples: need at least two samples");
  std::vector<double> re, im;
  re.reserve(z.size());
  im.reserve(z.size());
  for (const cplx& v : z) re.push_back(v.real()), im.push_back(v.imag());
  std::sort(re.begin(), re.end());
  std::sort(im.begin(), im.end());
  auto quant = [](const std::vector<double>& v, double p) {
    return v[std::min(v.size() - 1, static_cast<std::size_t>(p * double(v.size() - 1) + 0.5))];
  };
  DensityBox b{quant(re, q), quant(re, 1 - q), quant(im, q), quant(im, 1 - q)};
  const double p1 = pad * b.width1(), p2 = pad * b.width2();
  b.t1_lo -= p1, b.t1_hi += p1, b.t2_lo -= p2, b.t2_hi += p2;
  if (!(b.width1() > 0 && b.width2() > 0)) throw ValidationError("box_from_samples: degenerate sample");
  return b;
}

struct DensityErrorBudget {
  double fourier_tail = 0;  // (1/4pi^2) int_{|y|>R} envelope
  double taper_bias = 0;    // (dy^2/4pi^2) sum (1-w)|phi| over the taper ring
  double truncation = 0;    // (dy^2/4pi^2) sum w * char_fn tail bound
  double total() const { return fourier_tail + taper_bias + truncation; }
};

struct InversionConfig {
  std::uint64_t cutoff = 10000;
  DensityBox box;
  double radius = 0;        // 0: smallest R with envelope(R) <= target
  double target = 1e-6;
  double step = 0;          // t-grid step; 0: width / (points - 1)
  std::size_t points = 161; // per axis when step == 0
  double period_factor = 2; // y step = 2 pi / (period_factor * max width)
  unsigned threads = 1;
};

inline constexpr double kEnvelopeRefuse = 1e-3;
inline constexpr double kEnvelopeFitMax = 1e4;
inline constexpr std::size_t kMaxFrequencyPoints = 4001;

struct DensityGrid {
  EvalPoint s{1.5};
  Mode mode = Mode::case2;
  std::uint64_t cutoff = 0;
  double radius = 0, y_step = 0, h1 = 0, h2 = 0;
  std::size_t y_points = 0;
  DecayEnvelope envelope;
  double envelope_at_radius = 0;
  std::vector<double> t1, t2;
  std::vector<double> values;  // row-major, values[j * t1.size() + i] at (t1[i], t2[j])
  double max_imag = 0, min_value = 0, mass = 0, clipped_negative_mass = 0;
  DensityErrorBudget budget;
  std::vector<double> cumulative;  // node CDF from nonnegative cell masses

  std::size_t n1() const { return t1.size(); }
  std::size_t n2() const { return t2.size(); }
  double at(std::size_t i, std::size_t j) const { return values[j * n1() + i]; }
  double cum(std::size_t i, std::size_t j) const { return cumulative[j * n1() + i]; }
  double cell_mass(std::size_t i, std::size_t j) const {
    return 0.25 * h1 * h2 * (at(i, j) + at(i + 1, j) + at(i, j + 1) + at(i + 1, j + 1));
  }
};

namespace detail {

inline double raised_cosine(double r, double R) {
  const double r0 = 0.9 * R;
  if (r <= r0) return 1.0;
  if (r >= R) return 0.0;
  return 0.5 * (1 + std::cos(std::numbers::pi * (r - r0) / (R - r0)));
}

// (1/2pi) int_R^inf r exp(-C shape(r)) dr, Simpson in log r
inline double envelope_tail_integral(const DecayEnvelope& env, double R) {
  if (env.C <= 0) return 1.0 / 0.0;
  auto g = [&](double u) {
    const double r = std::exp(u);
    return r * r * std::exp(-env.C * decay_shape(env.sigma, env.mode, r));
  };
  const double h = 0.01;
  double u = std::log(R), total = 0, peak = 0;
  for (int k = 0; k < 200000; ++k) {
    const double a = g(u), m = g(u + h / 2), b = g(u + h);
    const double piece = h / 6 * (a + 4 * m + b);
    total += piece;
    peak = std::max(peak, a);
    u += h;
    if (b < 1e-18 * total && b < peak) break;
  }
  return total / (2 * std::numbers::pi);
}

}  // namespace detail

struct FourierInversion {
  std::vector<double> values;  // row-major in t2
  double max_imag = 0;
};

// (dy^2/4pi^2) sum_{k,l} pw[k][l] exp(-i (t1 y_l + t2 y_k)) on a uniform
// symmetric frequency axis; pw is row-major with y2 = yax[k], y1 = yax[l].
inline FourierInversion fourier_invert(std::span<const cplx> pw, std::span<const double> yax,
                                       std::span<const double> t1, std::span<const double> t2, unsigned threads = 1) {
  const std::size_t n1 = t1.size(), n2 = t2.size(), ny = yax.size();
  if (ny < 2 || pw.size() != ny * ny) throw ValidationError("fourier_invert: frequency grid shape mismatch");
  const double dy = yax[1] - yax[0];
  const double cell = dy * dy / (4 * std::numbers::pi * std::numbers::pi);
  std::vector<cplx> e1(n1 * ny), e2(n2 * ny), B(ny * n1);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t l = 0; l < ny; ++l) e1[i * ny + l] = std::polar(1.0, -t1[i] * yax[l]);
  for (std::size_t j = 0; j < n2; ++j)
    for (std::size_t k = 0; k < ny; ++k) e2[j * ny + k] = std::polar(1.0, -t2[j] * yax[k]);
  parallel_for(ny, threads, [&](std::size_t k) {
    const cplx* row = pw.data() + k * ny;
    for (std::size_t i = 0; i < n1; ++i) {
      cplx acc{};
      const cplx* e = e1.data() + i * ny;
      for (std::size_t l = 0; l < ny; ++l) acc += row[l] * e[l];
      B[k * n1 + i] = acc;
    }
  });
  FourierInversion out;
  out.values.assign(n1 * n2, 0.0);
  std::vector<double> imag_row(n2, 0.0);
  parallel_for(n2, threads, [&](std::size_t j) {
    const cplx* e = e2.data() + j * ny;
    for (std::size_t i = 0; i < n1; ++i) {
      cplx acc{};
      for (std::size_t k = 0; k < ny; ++k) acc += B[k * n1 + i] * e[k];
      acc *= cell;
      out.values[j * n1 + i] = acc.real();
      imag_row[j] = std::max(imag_row[j], std::abs(acc.imag()));
    }
  });
  out.max_imag = n2 ? *std::max_element(imag_row.begin(), imag_row.end()) : 0.0;
  return out;
}

// Fits exp(-C shape) to log|phi| (exact product to the cutoff, smooth tail
// beyond) on |y| in [lo, kEnvelopeFitMax].
inline DecayEnvelope density_envelope(const LogCharFn& f, double lo) {
  const auto& ev = f.evaluator();
  std::vector<double> thetas;
  for (int k = 0; k < 16; ++k) thetas.push_back(2 * std::numbers::pi * k / 16);
  lo = std::max(lo, kEnvelopeMinY);
  return fit_decay_envelope([&](cplx y) { return f(y); }, ev.point().sigma(), ev.mode(),
                            log_spaced(lo, std::max(kEnvelopeFitMax, 2 * lo), 24), thetas);
}

inline double radius_for_target(const DecayEnvelope& env, double target) {
  if (env.C <= 0) throw DomainError("invert_density: decay envelope is flat");
  double lo = env.y_min, hi = lo;
  while (decay_envelope(env, hi) > target) {
    hi *= 2;
    if (hi > 1e12) throw CapacityError("invert_density: no radius reaches the target");
  }
  if (hi == lo) return lo;
  lo = hi / 2;
  for (int k = 0; k < 60; ++k) {
    const double m = 0.5 * (lo + hi);
    (decay_envelope(env, m) > target ? lo : hi) = m;
  }
  return hi;
}

inline DensityGrid invert_density(const EvalPoint& s, Mode mode, const InversionConfig& cfg) {
  const DensityBox& box = cfg.box;
  if (!(box.width1() > 0 && box.width2() > 0)) throw ValidationError("invert_density: empty box");
  if (!(cfg.target > 0 && cfg.target < 1)) throw ValidationError("invert_density: target must lie in (0, 1)");
  if (cfg.radius < 0 || cfg.step < 0) throw ValidationError("invert_density: negative radius or step");
  if (cfg.step == 0 && cfg.points < 2) throw ValidationError("invert_density: need at least two points per axis");

  DensityGrid g;
  g.s = s;
  g.mode = mode;
  g.cutoff = cfg.cutoff;
  CharFnEvaluator ev(s, mode, cfg.cutoff);
  const LogCharFn logphi(ev);

  // A global fit locates R, then refits on [R/4, ...] where the envelope is
  // actually used. When the refit puts R below its own window the window is
  // moved down and refit; R stays inside the fitted range.
  if (cfg.radius > 0) {
    g.envelope = density_envelope(logphi, cfg.radius / 4);
    g.radius = cfg.radius;
  } else {
    double r = radius_for_target(density_envelope(logphi, kEnvelopeMinY), cfg.target);
    for (int pass = 0;; ++pass) {
      g.envelope = density_envelope(logphi, r / 4);
      const double next = radius_for_target(g.envelope, cfg.target);
      if (next > g.envelope.y_min || pass == 7 || g.envelope.y_min <= kEnvelopeMinY) {
        g.radius = std::max(next, g.envelope.y_min);
        break;
      }
      r = next;
    }
  }
  g.envelope_at_radius = g.radius < kEnvelopeMinY ? 1.0 : decay_envelope(g.envelope, g.radius);
  if (g.envelope_at_radius > kEnvelopeRefuse)
    throw ValidationError("invert_density: envelope at R exceeds 1e-3; truncation would dominate");

  // frequency lattice, symmetric about 0
  g.y_step = 2 * std::numbers::pi / (cfg.period_factor * std::max(box.width1(), box.width2()));
  const auto m = static_cast<std::size_t>(std::ceil(g.radius / g.y_step));
  g.y_points = 2 * m + 1;
  if (g.y_points > kMaxFrequencyPoints) throw CapacityError("invert_density: frequency lattice too large");
  const double y0 = -double(m) * g.y_step, dy = g.y_step;
  std::vector<double> yax(g.y_points);
  for (std::size_t k = 0; k < g.y_points; ++k) yax[k] = y0 + double(k) * dy;

  // spatial lattice
  auto axis = [&](double lo, double hi, std::vector<double>& t, double& h) {
    std::size_t n = cfg.step > 0 ? static_cast<std::size_t>(std::floor((hi - lo) / cfg.step + 1e-9)) + 1 : cfg.points;
    if (n < 2) throw ValidationError("invert_density: grid step exceeds box");
    h = cfg.step > 0 ? cfg.step : (hi - lo) / double(n - 1);
    t.resize(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = lo + double(i) * h;
  };
  axis(box.t1_lo, box.t1_hi, g.t1, g.h1);
  axis(box.t2_lo, box.t2_hi, g.t2, g.h2);
  if (g.t1.size() * g.t2.size() > 16'000'000) throw CapacityError("invert_density: spatial lattice too large");

  // tapered characteristic function and budget terms
  const auto phi = ev.grid(y0, dy, g.y_points, y0, dy, g.y_points, cfg.threads);
  const double cell = dy * dy / (4 * std::numbers::pi * std::numbers::pi);
  std::vector<cplx> pw(phi.size());
  double taper = 0, trunc = 0;
  for (std::size_t k = 0; k < g.y_points; ++k)
    for (std::size_t l = 0; l < g.y_points; ++l) {
      const double r = std::hypot(yax[l], yax[k]);
      const double w = detail::raised_cosine(r, g.radius);
      const cplx v = phi[k * g.y_points + l];
      pw[k * g.y_points + l] = w * v;
      taper += (1 - w) * (r < g.radius ? std::abs(v) : 0.0);
      if (w > 0) trunc += w * ev.tail_bound(v, r);
    }
  g.budget.taper_bias = cell * taper;
  g.budget.truncation = cell * trunc;
  g.budget.fourier_tail = detail::envelope_tail_integral(g.envelope, g.radius);

  const auto inv = fourier_invert(pw, yax, g.t1, g.t2, cfg.threads);
  g.values = inv.values;
  g.max_imag = inv.max_imag;
  g.min_value = *std::min_element(g.values.begin(), g.values.end());

  // trapezoid mass and node CDF
  const std::size_t n1 = g.t1.size(), n2 = g.t2.size();
  g.cumulative.assign(n1 * n2, 0.0);
  std::vector<double> colsum(n1, 0.0);
  for (std::size_t j = 0; j + 1 < n2; ++j) {
    double rowacc = 0;
    for (std::size_t i = 0; i + 1 < n1; ++i) {
      const double cm = g.cell_mass(i, j);
      g.mass += cm;
      if (cm < 0) g.clipped_negative_mass -= cm;
      rowacc += std::max(cm, 0.0);
      colsum[i + 1] += rowacc;
      g.cumulative[(j + 1) * n1 + i + 1] = colsum[i + 1];
    }
  }
  return g;
}

// Bilinear interpolation of the node CDF.
inline double cdf(const DensityGrid& g, double z1, double z2) {
  const double eps1 = 1e-12 * (1 + std::abs(g.t1.back())), eps2 = 1e-12 * (1 + std::abs(g.t2.back()));
  if (!(z1 >= g.t1.front() - eps1 && z1 <= g.t1.back() + eps1 && z2 >= g.t2.front() - eps2 &&
        z2 <= g.t2.back() + eps2))
    throw DomainError("cdf: query outside the grid would need extrapolation");
  auto locate = [](const std::vector<double>& t, double h, double z, std::size_t& i, double& f) {
    double x = (z - t.front()) / h;
    x = std::clamp(x, 0.0, double(t.size() - 1));
    i = std::min(static_cast<std::size_t>(x), t.size() - 2);
    f = x - double(i);
  };
  std::size_t i, j;
  double f1, f2;
  locate(g.t1, g.h1, z1, i, f1);
  locate(g.t2, g.h2, z2, j, f2);
  const double v = (1 - f1) * (1 - f2) * g.cum(i, j) + f1 * (1 - f2) * g.cum(i + 1, j) +
                   (1 - f1) * f2 * g.cum(i, j + 1) + f1 * f2 * g.cum(i + 1, j + 1);
  return std::clamp(v, 0.0, g.cumulative.back());
}

// Inverse-transform draws from the grid's cell masses, uniform within cells.
// The CDF of these draws is exactly cdf(g, .) up to normalization.
inline std::vector<cplx> sample_from_grid(const DensityGrid& g, std::size_t n, std::uint64_t seed) {
  const std::size_t n1 = g.n1(), n2 = g.n2();
  std::vector<double> acc;
  acc.reserve((n1 - 1) * (n2 - 1));
  double tot = 0;
  for (std::size_t j = 0; j + 1 < n2; ++j)
    for (std::size_t i = 0; i + 1 < n1; ++i) acc.push_back(tot += std::max(g.cell_mass(i, j), 0.0));
  std::vector<cplx> out(n);
  const Philox4x64::Key key{seed, 0x677269645f696e76ULL};
  for (std::size_t k = 0; k < n; ++k) {
    const auto w = Philox4x64::block({k, 0, 0, 0}, key);
    auto unit = [](std::uint64_t x) { return double(x >> 11) * 0x1.0p-53; };
    const double u = unit(w[0]) * tot;
    const auto c = static_cast<std::size_t>(std::upper_bound(acc.begin(), acc.end(), u) - acc.begin());
    const std::size_t cc = std::min(c, acc.size() - 1), i = cc % (n1 - 1), j = cc / (n1 - 1);
    out[k] = {g.t1[i] + unit(w[1]) * g.h1, g.t2[j] + unit(w[2]) * g.h2};
  }
  return out;
}

}  // namespace cubicvd
