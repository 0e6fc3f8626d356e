#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace gwk {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A (seed, stream) pair selects an independent sequence; the position inside
/// the sequence is an explicit 64-bit counter, so any block can be produced
/// without generating the ones before it.
class Philox {
public:
    using Block = std::array<std::uint32_t, 4>;

    Philox(std::uint64_t seed, std::uint64_t stream) noexcept;

    /// Raw 128-bit output for counter value `index`.
    Block block(std::uint64_t index) const noexcept;

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
};

/// Sequential reader over a Philox stream producing uniforms and normals.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept : gen_(seed, stream) {}

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept;
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Standard normal by Box-Muller; both variates of a pair are used.
    double normal() noexcept;
    /// Uniform integer in [0, bound), bound > 0, rejection-free multiply-shift.
    std::uint64_t below(std::uint64_t bound) noexcept;

private:
    Philox gen_;
    std::uint64_t counter_ = 0;
    Philox::Block buf_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// i.i.d. N(0,1) draws from substream `stream` of `seed`.
std::vector<double> standard_normals(std::uint64_t seed, std::uint64_t stream, std::size_t count);

/// Mixes several identifiers into one 64-bit stream id (splitmix64 finalizer chain).
std::uint64_t stream_id(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) noexcept;

}  // namespace gwk
