#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mutsel {

/// Uniform cell-centered partition of [a, b] with midpoint quadrature weights.
///
/// Cell i covers [a + i*dx, a + (i+1)*dx]; its center is a + (i + 1/2)*dx and
/// its quadrature weight is dx.
class Grid1D {
public:
    Grid1D(double a, double b, std::size_t n);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double length() const noexcept { return b_ - a_; }
    std::size_t size() const noexcept { return n_; }
    double dx() const noexcept { return dx_; }

    double center(std::size_t i) const noexcept { return a_ + (static_cast<double>(i) + 0.5) * dx_; }
    double weight(std::size_t) const noexcept { return dx_; }
    /// Position of cell i mapped to [0, 1].
    double normalized(std::size_t i) const noexcept { return (center(i) - a_) / (b_ - a_); }

    std::vector<double> centers() const;
    std::vector<double> weights() const;

    friend bool operator==(const Grid1D&, const Grid1D&) = default;

private:
    double a_;
    double b_;
    std::size_t n_;
    double dx_;
};

/// Throws InvalidDomain if b <= a or n < 2.
Grid1D build_grid(double a, double b, std::size_t n);

/// Real-valued function sampled at the cells of a grid.
class Field {
public:
    explicit Field(const Grid1D& grid, double value = 0.0);
    /// Throws LengthMismatch if values.size() != grid.size().
    Field(const Grid1D& grid, std::vector<double> values);

    const Grid1D& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& vector() const noexcept { return values_; }

    auto begin() noexcept { return values_.begin(); }
    auto end() noexcept { return values_.end(); }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);

private:
    Grid1D grid_;
    std::vector<double> values_;
};

Field operator+(Field lhs, const Field& rhs);
Field operator-(Field lhs, const Field& rhs);
Field operator*(double s, Field f);
/// Componentwise product.
Field hadamard(const Field& f, const Field& g);

/// Midpoint rule: sum_i w_i f_i.
double quadrature(const Field& f);
/// Weighted inner product <f, g>_w.
double inner(const Field& f, const Field& g);
double norm2(const Field& f);
double sup_norm(const Field& f);
double min_value(const Field& f);
double max_value(const Field& f);
/// sup-norm of f - g.
double sup_distance(const Field& f, const Field& g);
bool all_finite(const Field& f);

/// Throws LengthMismatch unless both fields live on the same grid.
void require_same_grid(const Field& f, const Field& g);

}  // namespace mutsel
