#include "mutsel/stepping.hpp"

#include "mutsel/kernels.hpp"

namespace mutsel {

Field positive_split_step(const DiffusionOperator& op, const Field& r, const Field& psi, const Field& u, double dt) {
    const Grid1D& grid = u.grid();
    Field rhs(grid);
    Field shift(grid);
    kernels::split_reaction(u.values(), r.values(), psi.values(), dt, rhs.values(), shift.values());
    const double inv_dt = 1.0 / dt;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        rhs[i] *= inv_dt;
        shift[i] *= inv_dt;
    }
    return op.solve_shifted(shift, rhs);
}

}  // namespace mutsel
