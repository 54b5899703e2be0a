#pragma once

#include <cstdint>
#include <random>

namespace plns {

// Seeded RNG with a fixed mapping from raw 64-bit draws to doubles, so that
// reports generated from the same seed are reproducible byte for byte.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform integer in [0, n).
    int uniform_int(int n) { return static_cast<int>(uniform() * n); }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace plns
