#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace opfunc {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Deterministic random stream. Distributions are implemented directly on the
/// raw 64-bit output so that identical seeds reproduce identical values on
/// every platform, which witness replay depends on.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Derive an independent stream from (seed, ids...).
    static Rng derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
        std::uint64_t x = seed;
        std::uint64_t h = detail::splitmix64(x);
        x ^= a * 0x9e3779b97f4a7c15ULL;
        h ^= detail::splitmix64(x);
        x ^= b * 0xc2b2ae3d27d4eb4fULL;
        h ^= detail::splitmix64(x);
        x ^= c * 0x165667b19e3779f9ULL;
        h ^= detail::splitmix64(x);
        return Rng(h);
    }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform integer in [0, n).
    int uniform_int(int n) { return n <= 1 ? 0 : int(next_u64() % std::uint64_t(n)); }

    /// Standard normal via Box-Muller (deterministic, no cached state).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace opfunc
