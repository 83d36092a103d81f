#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace apptsched {

// Philox4x64-10 counter-based generator (Salmon et al., Random123).
//
// The 256-bit counter is split as (block, block_hi, stream_lo, stream_hi):
// the low two words advance as output is consumed, the high two words hold
// the substream index. Distinct substreams never share a counter value, so
// they are independent by construction and can be generated in any order.
class Philox4x64 {
 public:
  using result_type = std::uint64_t;
  using key_type = std::array<std::uint64_t, 2>;
  using counter_type = std::array<std::uint64_t, 4>;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  Philox4x64() = default;
  Philox4x64(key_type key, counter_type counter) : key_(key), counter_(counter) {}

  // One application of the 10-round bijection.
  static counter_type block(counter_type ctr, key_type key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const unsigned __int128 p0 = static_cast<unsigned __int128>(kMul0) * ctr[0];
      const unsigned __int128 p1 = static_cast<unsigned __int128>(kMul1) * ctr[2];
      const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
      const auto lo0 = static_cast<std::uint64_t>(p0);
      const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
      const auto lo1 = static_cast<std::uint64_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

  result_type operator()() {
    if (used_ == 4) {
      if (++counter_[0] == 0) ++counter_[1];
      buffer_ = block(counter_, key_);
      used_ = 0;
    }
    return buffer_[used_++];
  }

  void discard(unsigned long long z) {
    while (z-- > 0) (*this)();
  }

  const counter_type& counter() const { return counter_; }
  const key_type& key() const { return key_; }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  key_type key_{};
  counter_type counter_{};
  counter_type buffer_{};
  int used_ = 4;
};

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Philox4x64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Seed plus the substream derivation rule. substream(k) is a pure function of
// (seed, k); identical pairs always reproduce identical draws.
struct RngPolicy {
  std::uint64_t seed = 0;

  Philox4x64 substream(std::uint64_t k) const {
    return Philox4x64({seed, kKeyTag}, {0, 0, k, kStreamTag});
  }

 private:
  // Fixed words so that (seed, k) never collides with a raw Philox key/counter
  // pair used elsewhere.
  static constexpr std::uint64_t kKeyTag = 0x61707074736368ULL;  // "apptsch"
  static constexpr std::uint64_t kStreamTag = 1;
};

}  // namespace apptsched
