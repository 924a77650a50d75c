#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace residlab {

// Seeded randomness is produced by splitmix64 (Steele, Lea, Flood; public
// domain), a platform-independent 64-bit generator.  Every random quantity in
// the project is drawn from a stream keyed by (seed, domain tag, member,
// wavenumber), so the draw for a given mode never depends on traversal order
// or thread count.  The exact scheme is documented in the README and must not
// change: force files and initial fields are reproduced from seeds alone.

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

struct SplitMix64 {
    std::uint64_t state = 0;
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        return splitmix64_mix(state);
    }
    /// Uniform in (0,1], 53-bit resolution.
    double next_open_closed() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1p-53;
    }
    /// Uniform in [0,1), 53-bit resolution.
    double next_closed_open() {
        return static_cast<double>(next() >> 11) * 0x1p-53;
    }
};

/// Domain tags keeping independent uses of one seed decorrelated.
enum class StreamTag : std::uint64_t {
    force = 1,
    initial_field = 2,
};

/// Map a signed wavenumber component to an unsigned word (zigzag code).
inline std::uint64_t zigzag(int v) {
    const std::int64_t x = v;
    return static_cast<std::uint64_t>((x << 1) ^ (x >> 63));
}

/// Stream key for the draw attached to (seed, tag, member, mode).
inline std::uint64_t stream_key(std::uint64_t seed, StreamTag tag, std::uint64_t member, int k1, int k2) {
    std::uint64_t h = splitmix64_mix(seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(tag));
    h = splitmix64_mix(h ^ (0xD1B54A32D192ED03ull + member));
    h = splitmix64_mix(h ^ (0x8CB92BA72F3D8DD7ull + zigzag(k1)));
    h = splitmix64_mix(h ^ (0xEB44ACCAB455D165ull + zigzag(k2)));
    return h;
}

/// Standard normal pair by the Box-Muller transform:
///   X = sqrt(-2 ln u1) cos(2 pi u2),  Y = sqrt(-2 ln u1) sin(2 pi u2)
/// with u1 in (0,1] and u2 in [0,1) from the keyed splitmix64 stream.
inline std::pair<double, double> gaussian_pair(std::uint64_t key) {
    SplitMix64 gen{key};
    const double u1 = gen.next_open_closed();
    const double u2 = gen.next_closed_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace residlab
