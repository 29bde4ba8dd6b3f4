#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace wdep {

/// Philox4x32-10 block function (Salmon et al., Random123). Maps a 128-bit
/// counter and a 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Key of replicate stream `stream` under `seed`:
///   splitmix64(seed ^ splitmix64(stream))
/// Every replicate-indexed computation in the toolkit draws from
/// Rng(seed, i) for replicate i, so results never depend on scheduling.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Counter-based generator: output block j is philox4x32_10({j_lo, j_hi, 0, 0}, key).
/// Satisfies UniformRandomBitGenerator.
class Rng {
public:
    using result_type = std::uint64_t;

    Rng(std::uint64_t seed, std::uint64_t stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }
    result_type operator()() noexcept { return next_u64(); }

    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on (0, 1).
    double uniform_open() noexcept;
    /// Standard normal via Box-Muller; the second variate is cached.
    double normal() noexcept;
    /// Unbiased integer in [0, n). n must be positive.
    std::size_t below(std::size_t n) noexcept;

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace wdep
