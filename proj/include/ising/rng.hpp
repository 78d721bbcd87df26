#pragma once

#include <cstdint>

namespace ising {

// 64-bit finalizer (splitmix64). Stateless building block for the
// counter-based generators below.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline double to_unit_interval(std::uint64_t w) {
    return static_cast<double>(w >> 11) * 0x1.0p-53;  // [0,1)
}

// Counter-based generator keyed by (seed, stream). word(c) is a pure
// function of the key and the counter, so any past draw can be
// regenerated at O(1) cost.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(mix64(seed) ^ (stream * 0xd6e8feb86659fd93ULL))) {}

    std::uint64_t word(std::uint64_t counter) const {
        return mix64(mix64(key_ ^ counter) + counter);
    }

    double uniform(std::uint64_t counter) const { return to_unit_interval(word(counter)); }

private:
    std::uint64_t key_;
};

// Sequential view over a CounterRng for consumers that just need a
// stream of uniforms (the Edwards-Sokal conversion steps).
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

    double next_uniform() { return rng_.uniform(counter_++); }

private:
    CounterRng rng_;
    std::uint64_t counter_ = 0;
};

// The reuse contract of coupling from the past: draw(t) for a time index
// t <= 0 yields the same (vertex, uniform) pair on every call. One
// 128-bit draw per step, split into the vertex choice and the update
// uniform.
class RandomnessSchedule {
public:
    RandomnessSchedule(std::uint64_t seed, int vertex_count, std::uint64_t stream = 0)
        : rng_(seed, stream), vertex_count_(vertex_count) {}

    struct Draw {
        int vertex;
        double u;
    };

    Draw draw(std::int64_t t) const {
        std::uint64_t c = static_cast<std::uint64_t>(-t);
        std::uint64_t w1 = rng_.word(2 * c);
        std::uint64_t w2 = rng_.word(2 * c + 1);
        // floor(u1 * N) computed exactly in integer arithmetic
        int v = static_cast<int>((static_cast<unsigned __int128>(w1) * vertex_count_) >> 64);
        return {v, to_unit_interval(w2)};
    }

    int vertex_count() const { return vertex_count_; }

private:
    CounterRng rng_;
    std::uint64_t vertex_count_;
};

}  // namespace ising
