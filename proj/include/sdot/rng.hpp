#pragma once

#include <cstdint>
#include <random>

namespace sdot {

// Deterministic RNG. Draws go through fixed bit manipulation rather than
// std::uniform_real_distribution so streams are identical across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return (gen_() >> 11) * 0x1.0p-53;
    }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    int uniform_int(int n) {  // [0, n)
        return static_cast<int>(gen_() % static_cast<std::uint64_t>(n));
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace sdot
