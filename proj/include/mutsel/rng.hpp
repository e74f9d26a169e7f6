#pragma once

#include "mutsel/grid.hpp"

#include <cstdint>
#include <random>

namespace mutsel {

/// Deterministic source of positive random initial data. A draw is
/// exp(g) where g is a random cosine series of `modes` terms with amplitudes
/// decaying like 1/(1+m)^2, so fields are smooth and strictly positive.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    Field positive_field(const Grid1D& grid, int modes = 4, double amplitude = 0.5);
    double uniform(double lo, double hi);
    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

SeededRng seeded_rng(std::uint64_t seed);

}  // namespace mutsel
