#pragma once

#include <array>
#include <cstdint>

namespace fundiff {

/// Philox4x64-10 counter-based generator (Salmon et al., Random123).
///
/// Output is a pure function of (key, counter), so distinct counters give
/// independent streams without any shared state.
class Philox4x64 {
public:
    using Counter = std::array<std::uint64_t, 4>;
    using Key = std::array<std::uint64_t, 2>;

    explicit constexpr Philox4x64(Key key) : key_(key) {}

    [[nodiscard]] constexpr Counter operator()(Counter ctr) const {
        Key k = key_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k[0] += kWeyl0;
                k[1] += kWeyl1;
            }
            const auto [hi0, lo0] = mulhilo(kMul0, ctr[0]);
            const auto [hi1, lo1] = mulhilo(kMul1, ctr[2]);
            ctr = {hi1 ^ ctr[1] ^ k[0], lo1, hi0 ^ ctr[3] ^ k[1], lo0};
        }
        return ctr;
    }

private:
    struct HiLo {
        std::uint64_t hi;
        std::uint64_t lo;
    };

    __extension__ using Wide = unsigned __int128;

    static constexpr HiLo mulhilo(std::uint64_t a, std::uint64_t b) {
        const Wide prod = static_cast<Wide>(a) * b;
        return {static_cast<std::uint64_t>(prod >> 64), static_cast<std::uint64_t>(prod)};
    }

    static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

    Key key_;
};

/// Uniform double in the open interval (0, 1) from 52 random bits.
[[nodiscard]] constexpr double to_open_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace fundiff
