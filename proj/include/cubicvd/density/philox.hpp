#pragma once

// Philox4x64-10 counter-based generator (Salmon et al., SC'11).

#include <array>
#include <cstdint>

namespace cubicvd {

class Philox4x64 {
 public:
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static Counter block(Counter c, Key k) {
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        k[0] += kW0;
        k[1] += kW1;
      }
      c = round(c, k);
    }
    return c;
  }

 private:
  static constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL, kM1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL, kW1 = 0xBB67AE8584CAA73BULL;

  static Counter round(const Counter& c, const Key& k) {
    const unsigned __int128 p0 = static_cast<unsigned __int128>(kM0) * c[0];
    const unsigned __int128 p1 = static_cast<unsigned __int128>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint64_t>(p0 >> 64), lo0 = static_cast<std::uint64_t>(p0);
    const auto hi1 = static_cast<std::uint64_t>(p1 >> 64), lo1 = static_cast<std::uint64_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

// Unbiased integer in [0, m) from a keyed stream of 64-bit words (Lemire's
// multiply-and-reject). `next` is called again only on rejection.
template <class Next>
std::uint64_t uniform_below(std::uint64_t m, Next&& next) {
  std::uint64_t x = next();
  unsigned __int128 prod = static_cast<unsigned __int128>(x) * m;
  auto lo = static_cast<std::uint64_t>(prod);
  if (lo < m) {
    const std::uint64_t threshold = (0 - m) % m;
    while (lo < threshold) {
      x = next();
      prod = static_cast<unsigned __int128>(x) * m;
      lo = static_cast<std::uint64_t>(prod);
    }
  }
  return static_cast<std::uint64_t>(prod >> 64);
}

}  // namespace cubicvd
