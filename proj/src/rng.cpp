#include "levylab/rng.hpp"

#include <cmath>
#include <numbers>

namespace levylab {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL; // golden ratio
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL; // sqrt(3)-1
constexpr std::uint64_t kKeySalt = 0x4C65767946504531ULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> ctr,
                                        std::array<std::uint64_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

} // namespace

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

KeyedStream::KeyedStream(const StreamKey& key)
    : counter_{0, key.lane, key.step, 0}, key_{key.seed, kKeySalt} {}

void KeyedStream::refill() {
    block_ = philox4x64(counter_, key_);
    ++counter_[0];
    pos_ = 0;
}

std::uint64_t KeyedStream::next_u64() {
    if (pos_ >= 4) refill();
    return block_[pos_++];
}

double KeyedStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double KeyedStream::uniform_oo() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double KeyedStream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform_oo();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

double KeyedStream::exponential() {
    return -std::log(uniform_oo());
}

} // namespace levylab
