#pragma once

#include <cstdint>
#include <random>

namespace pricer {

// Fixed-increment splitmix64 step, used both as a stand-alone mixer and to
// expand (master seed, replication index) pairs into independent generator
// seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Documented split rule: replication r of master seed m is seeded with
    // the second splitmix64 output of the stream started at m ^ mix(r).
    // Each replication owns its generator; streams never cross.
    static Rng for_replication(std::uint64_t master, std::uint64_t replication) {
        std::uint64_t s = replication;
        std::uint64_t state = master ^ splitmix64(s);
        splitmix64(state);
        return Rng(splitmix64(state));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 gen_;
};

}  // namespace pricer
