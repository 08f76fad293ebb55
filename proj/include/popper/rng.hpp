#pragma once

#include <array>
#include <cstdint>

namespace popper {

/// Philox4x64-10 counter-based generator (Salmon, Moraes, Dror, Shaw,
/// "Parallel random numbers: as easy as 1, 2, 3", SC'11).
///
/// The output is a pure function of (key, counter); streams never share
/// state, so per-cell seeds in parameter sweeps are just distinct stream
/// ids. Matches the reference implementation bit for bit.
class Philox4x64 {
public:
    using Block = std::array<std::uint64_t, 4>;

    Philox4x64(std::uint64_t seed, std::uint64_t stream = 0)
        : key_{seed, stream} {}

    /// Four 64-bit words for counter block (n, 0, 0, 0).
    Block block(std::uint64_t n) const;

private:
    std::array<std::uint64_t, 2> key_;
};

/// Streaming adapter over Philox4x64: uniform doubles and standard normals.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(seed, stream) {}

    std::uint64_t next_u64();

    /// Uniform on [0, 1), 53-bit resolution.
    double next_double();

    /// Standard normal via Box-Muller (pairs cached).
    double next_normal();

private:
    Philox4x64 engine_;
    Philox4x64::Block buffer_{};
    std::uint64_t counter_ = 0;
    int buffer_pos_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace popper
