#pragma once

// Monte-Carlo draws of Z = sum_p X_p over prime ideals of norm <= cutoff.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cubicvd/charfn/atoms.hpp"
#include "cubicvd/common/parallel.hpp"
#include "cubicvd/density/philox.hpp"

namespace cubicvd {

class ConvolutionSampler {
 public:
  struct Ideal {
    std::uint64_t norm;
    std::uint64_t range;  // 3(N+1): u < 3 -> 0, else atom (u-3)/N
    std::array<cplx, 3> neg_a;
  };

  static constexpr std::uint64_t kStreamTag = 0x636f6e766f6c7665ULL;

  ConvolutionSampler(EvalPoint s, Mode mode, std::uint64_t cutoff, std::uint64_t seed)
      : s_(s), mode_(mode), cutoff_(cutoff), seed_(seed) {
    if (cutoff < 3) throw ValidationError("sampler: cutoff must be at least 3");
    if (cutoff > kDefaultSieveLimit) throw CapacityError("sampler: cutoff exceeds sieve limit");
    shift_ = -local_a(3.0, 0, s, mode);
    for (const auto& pn : prime_norms_up_to(cutoff)) {
      if (pn.norm == 3) continue;
      Ideal id{pn.norm, 3 * (pn.norm + 1), {}};
      for (int j = 0; j < 3; ++j) id.neg_a[j] = -local_a(double(pn.norm), j, s, mode);
      for (int c = 0; c < pn.count; ++c) ideals_.push_back(id);
    }
  }

  const EvalPoint& point() const { return s_; }
  Mode mode() const { return mode_; }
  std::uint64_t cutoff() const { return cutoff_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const Ideal> ideals() const { return ideals_; }
  cplx deterministic_shift() const { return shift_; }

  // Draw number `index`. Ideal k uses lane k % 4 of the block at counter
  // (index, k / 4, 0, 0); rejections continue at (index, k / 4, r, 0).
  cplx draw(std::uint64_t index) const {
    const Philox4x64::Key key{seed_, kStreamTag};
    cplx z = shift_;
    for (std::size_t b = 0; b * 4 < ideals_.size(); ++b) {
      const auto words = Philox4x64::block({index, b, 0, 0}, key);
      for (std::size_t lane = 0; lane < 4 && b * 4 + lane < ideals_.size(); ++lane) {
        const Ideal& id = ideals_[b * 4 + lane];
        std::uint64_t retry = 0;
        bool first = true;
        const std::uint64_t u = uniform_below(id.range, [&] {
          if (first) {
            first = false;
            return words[lane];
          }
          return Philox4x64::block({index, b, ++retry, 0}, key)[lane];
        });
        if (u >= 3) z += id.neg_a[(u - 3) / id.norm];
      }
    }
    return z;
  }

  std::vector<cplx> sample(std::uint64_t first, std::size_t n, unsigned threads = 1) const {
    std::vector<cplx> out(n);
    constexpr std::size_t kChunk = 4096;
    parallel_for((n + kChunk - 1) / kChunk, threads, [&](std::size_t c) {
      for (std::size_t i = c * kChunk; i < std::min(n, (c + 1) * kChunk); ++i) out[i] = draw(first + i);
    });
    return out;
  }

  // E Z, summed termwise
  cplx mean() const {
    cplx m = shift_;
    for (const auto& id : ideals_) m += weight_atom(id) * (id.neg_a[0] + id.neg_a[1] + id.neg_a[2]);
    return m;
  }

  // (Var Re Z, Var Im Z)
  std::pair<double, double> variance() const {
    double vr = 0, vi = 0;
    for (const auto& id : ideals_) {
      const double w = weight_atom(id);
      double er = 0, ei = 0, er2 = 0, ei2 = 0;
      for (const cplx& a : id.neg_a) {
        er += w * a.real(), ei += w * a.imag();
        er2 += w * a.real() * a.real(), ei2 += w * a.imag() * a.imag();
      }
      vr += er2 - er * er;
      vi += ei2 - ei * ei;
    }
    return {vr, vi};
  }

 private:
  static double weight_atom(const Ideal& id) { return double(id.norm) / double(id.range); }

  EvalPoint s_;
  Mode mode_;
  std::uint64_t cutoff_, seed_;
  cplx shift_;
  std::vector<Ideal> ideals_;
};

inline std::vector<cplx> sample_convolution(const ConvolutionSampler& sampler, std::size_t n, unsigned threads = 1) {
  return sampler.sample(0, n, threads);
}

// mean of exp(i Re(conj(y) z)) over the draws
inline cplx empirical_cf(std::span<const cplx> z, cplx y) {
  if (z.empty()) throw ValidationError("empirical_cf: no samples");
  cplx acc{};
  for (const cplx& v : z) acc += std::polar(1.0, y.real() * v.real() + y.imag() * v.imag());
  return acc / double(z.size());
}

}  // namespace cubicvd
