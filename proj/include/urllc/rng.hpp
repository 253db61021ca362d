#pragma once

// Seeding discipline: every random quantity in the toolkit derives from one
// master seed. Named components get their own stream via derive_stream(), and
// bulk Monte-Carlo loops open one Substream per trial index, so estimates are
// independent of execution order and thread count.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace urllc::rng {

/// One step of the splitmix64 output function (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stateless scramble of two words; used to fan a seed out into substreams.
constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2));
    std::uint64_t x = splitmix64_next(s);
    return x ^ splitmix64_next(s);
}

/// Stream seed for a named component: FNV-1a over the name, mixed with the
/// master seed. This is the documented splitting rule of the CLI harness.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::string_view component) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : component) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix(seed, h);
}

/// Counter-derived generator: cheap to construct per (stream, index), which
/// keeps parallel Monte-Carlo loops bit-reproducible under any schedule.
class Substream {
  public:
    Substream(std::uint64_t stream, std::uint64_t index) : state_(mix(stream, index)) {}

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    /// Uniform draw in (0, 1]; never returns 0 so log() is safe.
    double uniform01() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Box-Muller pair of independent standard normals.
    void normal_pair(double& z0, double& z1) {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        z0 = r * std::cos(t);
        z1 = r * std::sin(t);
    }

    double exponential(double mean) { return -mean * std::log(uniform01()); }

  private:
    std::uint64_t state_;
};

}  // namespace urllc::rng
