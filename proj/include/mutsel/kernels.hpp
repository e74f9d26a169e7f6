#pragma once

#include "mutsel/matrix.hpp"

#include <cstddef>
#include <span>

// Data-parallel inner loops. Every kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp`; both produce
// bit-identical results (the parallel versions split work by output index and
// never reorder a reduction). The unqualified entry points dispatch to the
// OpenMP version above `parallel_threshold` cells.

namespace mutsel::kernels {

inline constexpr std::size_t parallel_threshold = 256;

/// Safe |x|^p for p >= 1 with 0^p = 0; exact for p = 1 and p = 2.
double abs_pow(double x, double p) noexcept;

namespace serial {

/// out_i = w * |u_i|^p
void weighted_abs_pow(std::span<const double> u, double p, double w, std::span<double> out);
/// out_i = sum_j K(i, j) v_j
void dense_matvec(const DenseMatrix& K, std::span<const double> v, std::span<double> out);
/// For g = r - psi: rhs_i = u_i (1 + dt g_i^+), shift_i = 1 + dt g_i^-.
void split_reaction(std::span<const double> u, std::span<const double> r, std::span<const double> psi, double dt,
                    std::span<double> rhs, std::span<double> shift);

}  // namespace serial

namespace omp {

void weighted_abs_pow(std::span<const double> u, double p, double w, std::span<double> out);
void dense_matvec(const DenseMatrix& K, std::span<const double> v, std::span<double> out);
void split_reaction(std::span<const double> u, std::span<const double> r, std::span<const double> psi, double dt,
                    std::span<double> rhs, std::span<double> shift);

}  // namespace omp

void weighted_abs_pow(std::span<const double> u, double p, double w, std::span<double> out);
void dense_matvec(const DenseMatrix& K, std::span<const double> v, std::span<double> out);
void split_reaction(std::span<const double> u, std::span<const double> r, std::span<const double> psi, double dt,
                    std::span<double> rhs, std::span<double> shift);

/// Number of OpenMP threads available to the parallel kernels (1 without OpenMP).
int max_threads() noexcept;

}  // namespace mutsel::kernels
