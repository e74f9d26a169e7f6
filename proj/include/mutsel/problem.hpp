#pragma once

#include "mutsel/diffusion.hpp"
#include "mutsel/grid.hpp"
#include "mutsel/selection.hpp"

namespace mutsel {

/// Everything that defines du/dt = u (r - Psi(x, u)) + d/dx(A du/dx) on a grid.
struct Problem {
    Grid1D grid;
    DiffusionOperator op;
    Field r;
    Kernel kernel;
    double p = 1.0;
};

/// Throws LengthMismatch if the pieces live on different grids and
/// UnsupportedExponent if p < 1.
void validate(const Problem& problem);

}  // namespace mutsel
