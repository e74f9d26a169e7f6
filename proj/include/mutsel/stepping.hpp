#pragma once

#include "mutsel/diffusion.hpp"
#include "mutsel/grid.hpp"

namespace mutsel {

/// One positivity-preserving semi-implicit step of
///   du/dt = L u + g u,   g = r - psi   (psi frozen at the current state):
///
///   (I - dt L + dt g^-) u_new = u (1 + dt g^+)
///
/// The left matrix is an M-matrix and the right side is nonnegative for
/// u >= 0, so u_new >= 0 for every dt > 0. Fixed points are exactly the
/// solutions of L u + g u = 0.
Field positive_split_step(const DiffusionOperator& op, const Field& r, const Field& psi, const Field& u, double dt);

}  // namespace mutsel
