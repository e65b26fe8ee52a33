#ifndef LEVELSET_RNG_HPP
#define LEVELSET_RNG_HPP

#include <cmath>
#include <cstdint>

namespace levelset {

/// splitmix64 step, used for seeding and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ with explicit, platform-independent double generation.
/// Streams derived from (seed, stream id) are independent for practical
/// purposes and make parallel replicates deterministic regardless of
/// scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t sm = seed ^ (0x632be59bd9b4e019ULL * (stream + 1));
        for (auto& s : s_) s = splitmix64(sm);
        have_gauss_ = false;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform integer on [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        // modulo bias is < 2^-53 for the sizes used here
        return next_u64() % n;
    }

    /// Standard normal via Box-Muller (deterministic across platforms).
    double normal() {
        if (have_gauss_) {
            have_gauss_ = false;
            return gauss_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        gauss_ = r * std::sin(a);
        have_gauss_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t s_[4];
    double gauss_ = 0.0;
    bool have_gauss_ = false;
};

}  // namespace levelset

#endif
