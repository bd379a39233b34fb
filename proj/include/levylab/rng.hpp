#pragma once

#include <array>
#include <cstdint>

namespace levylab {

/// Address of one deterministic random stream. Identical keys reproduce the
/// identical sequence of draws on every run; distinct keys give streams that
/// are independent for all practical purposes. Lanes index particles or
/// paths, steps index time.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t lane = 0;
    std::uint64_t step = 0;
};

/// SplitMix64 finalizer; used to derive disjoint seeds (e.g. per refinement
/// level) from a base seed.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based stream of doubles (Philox4x64-10 underneath). Stateless
/// across keys: any number of workers may draw from disjoint keys with no
/// coordination. Draw order is part of the determinism contract; callers
/// that document their sequence get bit-identical results across runs on
/// one platform (fixed algorithm, default rounding mode).
class KeyedStream {
public:
    explicit KeyedStream(const StreamKey& key);

    double uniform();    // [0, 1)
    double uniform_oo(); // (0, 1), safe under log/division
    double normal();     // standard normal, Box-Muller pair cached
    double exponential();// rate 1, strictly positive

    std::uint64_t next_u64();

private:
    void refill();
    std::array<std::uint64_t, 4> counter_;
    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> block_{};
    int pos_ = 4;
    bool has_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

} // namespace levylab
