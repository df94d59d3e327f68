#pragma once

// Counter-keyed uniform streams.
//
// Every trial owns one stream. Its 64-bit key is derived from the master seed
// and the trial index (and, for sweeps, the grid index) with derive_key().
// The key seeds splitmix64, whose first four outputs form the xoshiro256++
// state. Output number i of xoshiro256++ is "slot" i; simulators read vertex
// i's variate from slot i, so outcomes depend on nothing but the key.

#include <array>
#include <cstdint>

namespace rumour {

/// splitmix64 output finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Child key for lane `index` under `parent`: mix64(parent ^ mix64(index + gamma)).
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t index) noexcept
{
    return mix64(parent ^ mix64(index + kGoldenGamma));
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
    constexpr std::uint64_t next() noexcept { return mix64(state_ += kGoldenGamma); }

private:
    std::uint64_t state_;
};

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) noexcept;
    std::uint64_t next() noexcept;
    const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

private:
    std::array<std::uint64_t, 4> s_{};
};

/// Maps 64 random bits to a double in (0,1): the top 53 bits scaled by 2^-53,
/// with the all-zero pattern sent to 2^-54.
constexpr double to_unit_open(std::uint64_t bits) noexcept
{
    const std::uint64_t m = bits >> 11;
    return m == 0 ? 0x1p-54 : static_cast<double>(m) * 0x1p-53;
}

/// Sequential view of one trial's stream addressed by slot number. Slots must
/// be read in nondecreasing order; skipped slots are generated and discarded.
class SlotStream {
public:
    explicit SlotStream(std::uint64_t key) noexcept : key_(key), gen_(key) {}

    double uniform(std::uint64_t slot);
    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t position() const noexcept { return position_; }

private:
    std::uint64_t key_;
    Xoshiro256pp gen_;
    std::uint64_t position_ = 0;
    std::uint64_t last_slot_ = 0;
    double last_value_ = 0.0;
    bool has_last_ = false;
};

}  // namespace rumour
