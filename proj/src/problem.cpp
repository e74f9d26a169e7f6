#include "mutsel/problem.hpp"

#include "mutsel/error.hpp"

namespace mutsel {

void validate(const Problem& problem) {
    if (!(problem.op.grid() == problem.grid) || !(problem.r.grid() == problem.grid) ||
        !(problem.kernel.grid() == problem.grid))
        throw Error(ErrorCode::LengthMismatch, "problem components live on different grids");
    if (!(problem.p >= 1.0)) throw Error(ErrorCode::UnsupportedExponent, "selection exponent p must be >= 1");
}

}  // namespace mutsel
