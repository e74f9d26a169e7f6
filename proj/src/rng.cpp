#include "mutsel/rng.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace mutsel {

Field SeededRng::positive_field(const Grid1D& grid, int modes, double amplitude) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> coeff(static_cast<std::size_t>(modes) + 1);
    for (int m = 0; m <= modes; ++m) coeff[static_cast<std::size_t>(m)] = amplitude * normal(engine_) / ((1.0 + m) * (1.0 + m));
    Field out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double g = 0.0;
        for (int m = 0; m <= modes; ++m)
            g += coeff[static_cast<std::size_t>(m)] * std::cos(m * std::numbers::pi * grid.normalized(i));
        out[i] = std::exp(g);
    }
    return out;
}

double SeededRng::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

SeededRng seeded_rng(std::uint64_t seed) { return SeededRng(seed); }

}  // namespace mutsel
