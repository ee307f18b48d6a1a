// Philox4x32-10 counter-based generator (Salmon et al., SC'11).

#pragma once

#include <array>
#include <cstdint>

namespace spdcsim {

class Philox4x32 {
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kW0;
                key[1] += kW1;
            }
            const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

  private:
    static constexpr std::uint32_t kM0 = 0xD2511F53;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57;
    static constexpr std::uint32_t kW0 = 0x9E3779B9;
    static constexpr std::uint32_t kW1 = 0xBB67AE85;
};

// Uniform deviates in [0, 1) that depend only on (seed, index, stream) and the
// draw position, never on call order elsewhere.
class CounterStream {
  public:
    CounterStream(std::uint64_t seed, std::uint64_t index, std::uint32_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          index_(index),
          stream_(stream) {}

    double uniform() {
        if (pos_ == 2) {
            const Philox4x32::Counter ctr{block_++, stream_, static_cast<std::uint32_t>(index_),
                                          static_cast<std::uint32_t>(index_ >> 32)};
            out_ = Philox4x32::block(ctr, key_);
            pos_ = 0;
        }
        const std::uint64_t bits =
            (std::uint64_t{out_[2 * pos_]} << 32) | std::uint64_t{out_[2 * pos_ + 1]};
        ++pos_;
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

  private:
    Philox4x32::Key key_;
    std::uint64_t index_;
    std::uint32_t stream_;
    std::uint32_t block_ = 0;
    Philox4x32::Counter out_{};
    int pos_ = 2;
};

}  // namespace spdcsim
