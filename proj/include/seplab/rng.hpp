#pragma once

#include <cstdint>
#include <random>

namespace seplab {

// splitmix64: used both as a seed mixer and to derive independent
// per-task streams from (master_seed, task_index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic stream seed: independent of scheduling order, so
// parallel runs reproduce serial ones exactly.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t task_index,
                                 std::uint64_t salt = 0) {
    std::uint64_t s = splitmix64(master ^ (0x7c15d3f9u + salt * 0x9e3779b97f4a7c15ULL));
    return splitmix64(s ^ splitmix64(task_index + 0x632be59bd9b4e019ULL));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(splitmix64(seed));
}

// xoshiro256++ for the Monte Carlo hot loops.
class FastRng {
  public:
    explicit FastRng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x += 0x9e3779b97f4a7c15ULL);
    }
    std::uint64_t next() {
        auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    // unbiased-enough index draw for lattice sizes
    std::uint64_t below(std::uint64_t n) { return next() % n; }

  private:
    std::uint64_t s_[4];
};

}  // namespace seplab
