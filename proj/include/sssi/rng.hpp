#pragma once

#include <array>
#include <cstdint>

namespace sssi {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A draw is a pure function of (key, counter): there is no hidden state, so
/// any (stream, index) pair can be evaluated on any thread in any order.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit constexpr Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}
  constexpr Philox4x32(Key key) : key_(key) {}

  constexpr Counter operator()(Counter ctr) const {
    Key key = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      auto lo0 = static_cast<std::uint32_t>(p0);
      auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

  /// Two uniforms in the open interval (0, 1) for the pair (stream, index).
  std::array<double, 2> uniform_pair(std::uint64_t stream, std::uint64_t index) const {
    Counter out = (*this)({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                           static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)});
    std::uint64_t a = (std::uint64_t{out[0]} << 32) | out[1];
    std::uint64_t b = (std::uint64_t{out[2]} << 32) | out[3];
    return {to_open_unit(a), to_open_unit(b)};
  }

  static double to_open_unit(std::uint64_t bits) {
    // 53 significant bits, offset by half an ulp so 0 and 1 are excluded.
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  Key key_;
};

}  // namespace sssi
