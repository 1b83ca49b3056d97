#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A stateless
// keyed bijection on 128-bit counters: the same (key, counter) always gives
// the same output, so random paths can be addressed by index instead of
// being replayed from a stream.

#include <array>
#include <cmath>
#include <cstdint>

namespace rmc {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit constexpr Philox4x32(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}
    explicit constexpr Philox4x32(Key key) noexcept : key_(key) {}

    constexpr Counter operator()(Counter ctr) const noexcept {
        Key k = key_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k[0] += kWeyl0;
                k[1] += kWeyl1;
            }
            ctr = single_round(ctr, k);
        }
        return ctr;
    }

    /// Two independent 64-bit words for a (stream, tag, index) address.
    constexpr std::array<std::uint64_t, 2> words(std::uint32_t stream, std::uint32_t tag,
                                                 std::uint64_t index) const noexcept {
        const Counter out = (*this)({static_cast<std::uint32_t>(index),
                                     static_cast<std::uint32_t>(index >> 32), stream, tag});
        return {(std::uint64_t{out[1]} << 32) | out[0], (std::uint64_t{out[3]} << 32) | out[2]};
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform(std::uint32_t stream, std::uint32_t tag, std::uint64_t index) const noexcept {
        return to_unit(words(stream, tag, index)[0]);
    }

    /// Uniform double in (0, 1]; safe to pass to log().
    double uniform_open_low(std::uint32_t stream, std::uint32_t tag,
                            std::uint64_t index) const noexcept {
        return static_cast<double>((words(stream, tag, index)[0] >> 11) + 1) * 0x1.0p-53;
    }

    /// Unit-mean exponential variate.
    double exponential(std::uint32_t stream, std::uint32_t tag, std::uint64_t index) const noexcept {
        return -std::log(uniform_open_low(stream, tag, index));
    }

    static constexpr double to_unit(std::uint64_t bits) noexcept {
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter single_round(const Counter& c, const Key& k) noexcept {
        const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }

    Key key_;
};

}  // namespace rmc
