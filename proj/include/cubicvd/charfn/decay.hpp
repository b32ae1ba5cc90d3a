#pragma once

// Decay of |phi_s(y)|: the factors G, H, J of the window argument, the window
// verifier, log|phi| with a smooth prime-density tail, and fitted envelopes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "cubicvd/charfn/char_fn.hpp"

namespace cubicvd {

// theta_y in [0, 2 pi)
inline double polar_angle(cplx y) {
  double th = std::atan2(y.imag(), y.real());
  if (th < 0) th += 2 * std::numbers::pi;
  return th;
}

namespace detail {
inline double wrap_two_pi(double x) {
  x = std::fmod(x, 2 * std::numbers::pi);
  return x < 0 ? x + 2 * std::numbers::pi : x;
}
}  // namespace detail

// H = 1 + exp(-i log N Re(conj(y)(zeta - 1) N^{-it}) / N^sigma) + (same with zeta^2)
inline cplx h_factor(double norm, const EvalPoint& s, cplx y) {
  const double L = std::log(norm), Ns = std::pow(norm, s.sigma());
  const cplx nit = std::polar(1.0, -s.t() * L);
  auto term = [&](cplx w) { return phase(y, L * w * nit / Ns); };
  return 1.0 + term(kZeta3[1] - 1.0) + term(kZeta3[2] - 1.0);
}

// G = 1/(N+1) + N/(3(N+1)) exp(-i log N Re(conj(y) N^{-it}) / N^sigma) H
inline cplx g_factor(double norm, const EvalPoint& s, cplx y) {
  const double L = std::log(norm), Ns = std::pow(norm, s.sigma());
  const cplx nit = std::polar(1.0, -s.t() * L);
  return 1.0 / (norm + 1.0) + norm / (3.0 * (norm + 1.0)) * phase(y, L * nit / Ns) * h_factor(norm, s, y);
}

// |H|^2 = 3 + 2 J
inline double j_quantity(double norm, const EvalPoint& s, cplx y) {
  const double L = std::log(norm), x = std::abs(y) * L / std::pow(norm, s.sigma());
  const double ph = polar_angle(y) + s.t() * L;
  return 2.0 * std::cos(1.5 * x * std::cos(ph)) * std::cos(std::numbers::sqrt3 / 2 * x * std::sin(ph)) +
         std::cos(std::numbers::sqrt3 * x * std::sin(ph));
}

inline cplx h_factor(const PrimeIdealRec& p, const EvalPoint& s, cplx y) { return h_factor(double(p.norm), s, y); }
inline cplx g_factor(const PrimeIdealRec& p, const EvalPoint& s, cplx y) { return g_factor(double(p.norm), s, y); }
inline double j_quantity(const PrimeIdealRec& p, const EvalPoint& s, cplx y) { return j_quantity(double(p.norm), s, y); }

// Window constants
inline constexpr double kWindowUpper = std::numbers::pi / 6;                      // pi/6
inline constexpr double kWindowLower = std::numbers::pi / (9 * std::numbers::sqrt3 / 2);  // pi/(9 sqrt3/2)
inline constexpr double kGLower = 0.097, kGUpper = 0.9978;
inline constexpr double kGUpperA = 0.9799, kGLowerB = 0.099;

struct DecayWindow {
  double sigma = 0, epsilon = 0, y_abs = 0;
  double a_lo = 0, b_hi = 0;  // bounds on N^sigma
  bool nonempty() const { return a_lo < b_hi; }
  double norm_lo() const { return std::pow(a_lo, 1.0 / sigma); }
  double norm_hi() const { return std::pow(b_hi, 1.0 / sigma); }
};

inline DecayWindow decay_window(double sigma, double epsilon, double y_abs) {
  if (!(sigma > 0.5)) throw ValidationError("decay_window: sigma must exceed 1/2");
  if (!(epsilon > 0) || !(epsilon < kWindowUpper)) throw ValidationError("decay_window: epsilon out of range");
  if (!(y_abs > 1)) throw ValidationError("decay_window: |y| must exceed 1");
  const double k = y_abs * std::log(y_abs) / sigma;
  return {sigma, epsilon, y_abs, k / (kWindowUpper - epsilon), k / (kWindowLower + epsilon)};
}

// Set A: angle mod 2 pi in (-pi/6, pi/6) or (5pi/6, 7pi/6); set B otherwise.
inline bool in_set_a(double angle) {
  const double a = detail::wrap_two_pi(angle), pi = std::numbers::pi;
  return a < pi / 6 || a > 11 * pi / 6 || (a > 5 * pi / 6 && a < 7 * pi / 6);
}

struct GBoundEntry {
  std::uint64_t norm;
  int count;
  double abs_g;
  bool set_a;
  double ratio;  // |y| log N / N^sigma
};

struct GBoundReport {
  DecayWindow window;
  double sigma = 0, t = 0;
  cplx y;
  std::uint64_t norm_lo = 0, norm_hi = 0;
  std::uint64_t prime_ideals = 0, norms = 0;
  std::uint64_t violations = 0;          // outside (0.097, 0.9978)
  std::uint64_t set_a = 0, set_b = 0;
  std::uint64_t sub_violations_a = 0;    // outside (0.097, 0.9799)
  std::uint64_t sub_violations_b = 0;    // outside (0.099, 0.9978)
  std::uint64_t ratio_condition = 0;     // pi/(9 sqrt3/2) < |y| log N / N^sigma < pi/6
  double min_abs_g = 1.0 / 0.0, max_abs_g = 0.0;
  double min_ratio = 1.0 / 0.0, max_ratio = 0.0;
  std::vector<GBoundEntry> first_violations;  // at most 32

  bool passed() const { return norms > 0 && violations == 0; }
  double ratio_fraction() const { return prime_ideals ? double(ratio_condition) / double(prime_ideals) : 0.0; }
};

// Scans every prime ideal with a_lo <= N^sigma <= b_hi. Optional visit(entry) sees each norm.
inline GBoundReport verify_gbound(const DecayWindow& w, const EvalPoint& s, cplx y,
                                  const std::function<void(const GBoundEntry&)>& visit = {}) {
  if (!w.nonempty()) throw DomainError("verify_gbound: empty window (a_lo >= b_hi)");
  if (std::abs(std::abs(y) - w.y_abs) > 1e-9 * w.y_abs) throw ValidationError("verify_gbound: |y| does not match window");
  if (std::abs(s.sigma() - w.sigma) > 1e-15) throw ValidationError("verify_gbound: sigma does not match window");
  GBoundReport r;
  r.window = w;
  r.sigma = s.sigma();
  r.t = s.t();
  r.y = y;
  r.norm_lo = static_cast<std::uint64_t>(std::ceil(w.norm_lo() * (1 - 1e-15)));
  r.norm_hi = static_cast<std::uint64_t>(std::floor(w.norm_hi() * (1 + 1e-15)));
  if (r.norm_hi > kDefaultSieveLimit * 10) throw CapacityError("verify_gbound: window beyond sieve capacity");
  const double theta = polar_angle(y);
  for (const auto& pn : prime_norms_in(r.norm_lo, r.norm_hi)) {
    const double N = double(pn.norm), Ns = std::pow(N, s.sigma());
    if (Ns < w.a_lo || Ns > w.b_hi) continue;  // rounding at the ends
    const double L = std::log(N);
    const double g = std::abs(g_factor(N, s, y));
    const bool a = in_set_a(theta + s.t() * L);
    const double ratio = w.y_abs * L / Ns;
    GBoundEntry e{pn.norm, pn.count, g, a, ratio};
    const auto c = static_cast<std::uint64_t>(pn.count);
    ++r.norms;
    r.prime_ideals += c;
    r.min_abs_g = std::min(r.min_abs_g, g);
    r.max_abs_g = std::max(r.max_abs_g, g);
    r.min_ratio = std::min(r.min_ratio, ratio);
    r.max_ratio = std::max(r.max_ratio, ratio);
    if (ratio > kWindowLower && ratio < kWindowUpper) r.ratio_condition += c;
    if (!(g > kGLower && g < kGUpper)) {
      r.violations += c;
      if (r.first_violations.size() < 32) r.first_violations.push_back(e);
    }
    if (a) {
      r.set_a += c;
      if (!(g > kGLower && g < kGUpperA)) r.sub_violations_a += c;
    } else {
      r.set_b += c;
      if (!(g > kGLowerB && g < kGUpper)) r.sub_violations_b += c;
    }
    if (visit) visit(e);
  }
  return r;
}

// log|phi_s(y)| over all primes: the exact sum up to the evaluator cutoff X,
// then int_X^inf log|f(N)| dN / log N with f the local factor at a continuous
// norm (prime ideal density 1/log N). Once |y| max|a_j| < 1e-3 the integrand
// is replaced by its second-order form log|f| ~ -|y|^2 |A|^2 / 4 and
// integrated in closed form.
class LogCharFn {
 public:
  explicit LogCharFn(CharFnEvaluator ev) : ev_(std::move(ev)) {}

  const CharFnEvaluator& evaluator() const { return ev_; }

  double operator()(cplx y) const { return ev_.log_abs(y) + tail_integral(y); }

  double tail_integral(cplx y) const {
    const EvalPoint& s = ev_.point();
    const double sg = s.sigma(), yabs = std::abs(y);
    if (yabs == 0) return 0.0;
    auto amax = [&](double u) {  // bound on |a_j| at N = e^u
      const double r = std::exp(-sg * u);
      return ev_.mode() == Mode::case2 ? u * r / (1 - r) : r / (1 - r);
    };
    auto integrand = [&](double u) {
      const double N = std::exp(u);
      const double w0 = 1.0 / (N + 1.0), w = N / (3.0 * (N + 1.0));
      cplx f = w0;
      for (int j = 0; j < 3; ++j) f += w * phase(y, local_a(N, j, s, ev_.mode()));
      return 0.5 * std::log(std::norm(f)) * N / u;
    };
    static constexpr std::array<double, 8> x = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                                -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                                0.7966664774136267,  0.9602898564975363};
    static constexpr std::array<double, 8> wq = {0.1012285362903763, 0.2223810344533745, 0.3137066278921771,
                                                 0.3626837833783620, 0.3626837833783620, 0.3137066278921771,
                                                 0.2223810344533745, 0.1012285362903763};
    double u = std::log(double(ev_.cutoff()));
    double total = 0.0;
    constexpr double kSmall = 1e-3;
    while (yabs * amax(u) >= kSmall || u < 1.0 / sg + 1.0) {
      const double xi = yabs * amax(u);
      double h = std::min(0.05, 0.25 / std::max(1.0, sg * xi));
      if (s.t() != 0) h = std::min(h, 0.25 / std::abs(s.t()));
      const double mid = u + h / 2;
      double panel = 0.0;
      for (int k = 0; k < 8; ++k) panel += wq[k] * integrand(mid + h / 2 * x[k]);
      total += panel * h / 2;
      u += h;
      if (u > 400) throw DomainError("LogCharFn: tail integral did not reach the small-argument regime");
    }
    const double c = 2 * sg - 1;
    double rest;
    if (ev_.mode() == Mode::case2)
      rest = std::exp(-c * u) * (u / c + 1 / (c * c));
    else
      rest = -std::expint(-c * u);  // E1(c u)
    return total - 0.25 * yabs * yabs * rest;
  }

 private:
  CharFnEvaluator ev_;
};

inline double decay_shape(double sigma, Mode mode, double yabs) {
  const double L = std::log(yabs);
  return mode == Mode::case1 ? std::pow(yabs, 1 / sigma) / L : std::pow(yabs, 1 / sigma) * std::pow(L, 1 / sigma - 1);
}

struct DecayRegression {
  std::vector<double> y_abs, log_abs_phi;
  double slope = 0, intercept = 0;
};

// Least-squares slope of log(-log|phi(y)|) against log|y| along a ray.
inline DecayRegression regress_decay(const LogCharFn& f, const std::vector<double>& ys, double theta = 0.0) {
  DecayRegression r;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double ya : ys) {
    const double l = f(std::polar(ya, theta));
    if (!(l < 0)) throw DomainError("regress_decay: |phi| not below 1");
    r.y_abs.push_back(ya);
    r.log_abs_phi.push_back(l);
    const double X = std::log(ya), Y = std::log(-l);
    sx += X, sy += Y, sxx += X * X, sxy += X * Y;
  }
  const double n = double(ys.size());
  r.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  r.intercept = (sy - r.slope * sx) / n;
  return r;
}

inline std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1)));
  return v;
}

// exp(-C shape(|y|)) with C the largest constant keeping it above every sample.
struct DecayEnvelope {
  double sigma = 0;
  Mode mode = Mode::case2;
  double C = 0;
  double y_min = 0, y_max = 0;
  std::size_t samples = 0;
};

inline constexpr double kEnvelopeMinY = 7.38905609893065;  // e^2

inline DecayEnvelope fit_decay_envelope(const std::function<double(cplx)>& log_abs_phi, double sigma, Mode mode,
                                        const std::vector<double>& radii, const std::vector<double>& thetas) {
  DecayEnvelope env{sigma, mode, 1.0 / 0.0, 1.0 / 0.0, 0.0, 0};
  for (double r : radii) {
    if (r < kEnvelopeMinY) throw ValidationError("fit_decay_envelope: radii must be at least e^2");
    for (double th : thetas) {
      env.C = std::min(env.C, -log_abs_phi(std::polar(r, th)) / decay_shape(sigma, mode, r));
      ++env.samples;
    }
    env.y_min = std::min(env.y_min, r);
    env.y_max = std::max(env.y_max, r);
  }
  if (env.samples == 0) throw ValidationError("fit_decay_envelope: no samples");
  env.C = std::max(env.C, 0.0);
  return env;
}

inline double decay_envelope(const DecayEnvelope& env, double yabs) {
  if (yabs < kEnvelopeMinY) throw ValidationError("decay_envelope: needs |y| >= e^2");
  return std::exp(-env.C * decay_shape(env.sigma, env.mode, yabs));
}

}  // namespace cubicvd
