#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace solarcast {

// Deterministic RNG used everywhere randomness is needed. The standard
// library distributions are implementation-defined, so shuffles, bootstrap
// draws and synthetic noise all go through this generator to keep results
// bit-identical across platforms and compilers.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {
        // splitmix64 warm-up so nearby seeds diverge immediately.
        next_u64();
        next_u64();
    }

    // Derive an independent stream, e.g. one per tree.
    static Rng substream(uint64_t seed, uint64_t stream) {
        Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
        return r;
    }

    uint64_t next_u64() {
        // splitmix64 (Vigna); passes BigCrush, one 64-bit word of state.
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, bound) via Lemire's method.
    uint64_t next_below(uint64_t bound) {
        if (bound <= 1) return 0;
        while (true) {
            uint64_t x = next_u64();
            __uint128_t m = static_cast<__uint128_t>(x) * bound;
            uint64_t lo = static_cast<uint64_t>(m);
            if (lo >= bound || lo >= (0ULL - bound) % bound) {
                return static_cast<uint64_t>(m >> 64);
            }
        }
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Marsaglia polar method; fixed algorithm for reproducibility.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        have_spare_ = true;
        return u * factor;
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Deterministic Fisher-Yates shuffle of index vectors.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.next_below(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace solarcast
