#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gamelearn {

// splitmix64 step; used to whiten seeds and derive independent substreams.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Seed for substream `index` of a master seed. Consecutive indices give
// decorrelated engine seeds even for small/consecutive master seeds.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master;
    (void)splitmix64_next(s);
    s += index;
    return splitmix64_next(s);
}

// Deterministic RNG. mt19937_64 output is fully specified by the standard,
// and the uniform/categorical draws below avoid std::xxx_distribution (whose
// algorithms are implementation-defined), so identical seeds give identical
// trajectories on any platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Inverse-CDF draw from a probability vector (need not be exactly
    // normalized; the final bucket absorbs rounding slack).
    int categorical(const double* probs, int n) {
        const double u = uniform01();
        double acc = 0.0;
        for (int k = 0; k < n - 1; ++k) {
            acc += probs[k];
            if (u < acc) return k;
        }
        return n - 1;
    }

    int categorical(const std::vector<double>& probs) {
        return categorical(probs.data(), static_cast<int>(probs.size()));
    }

  private:
    std::mt19937_64 engine_;
};

// Per-trajectory RNG bundle: one action substream per player plus one for the
// environment chain. AP and CMS runs with the same master seed draw identical
// action randomness, and an APM run touches the env stream only when the
// environment actually has more than one state.
struct StepRngs {
    std::vector<Rng> player;
    Rng env;

    static StepRngs make(std::uint64_t master, int num_players) {
        StepRngs out{{}, Rng(substream_seed(master, static_cast<std::uint64_t>(num_players)))};
        out.player.reserve(static_cast<std::size_t>(num_players));
        for (int i = 0; i < num_players; ++i)
            out.player.emplace_back(substream_seed(master, static_cast<std::uint64_t>(i)));
        return out;
    }
};

}  // namespace gamelearn
