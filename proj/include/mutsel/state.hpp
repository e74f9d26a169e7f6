#pragma once

#include "mutsel/grid.hpp"

#include <vector>

namespace mutsel {

struct SimState {
    double t = 0.0;
    Field u;
    long step = 0;
};

using Trajectory = std::vector<SimState>;

}  // namespace mutsel
