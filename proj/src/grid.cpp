#include "mutsel/grid.hpp"

#include "mutsel/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mutsel {

Grid1D::Grid1D(double a, double b, std::size_t n)
    : a_(a), b_(b), n_(n), dx_((b - a) / static_cast<double>(n)) {
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b))
        throw Error(ErrorCode::InvalidDomain, "require b > a, got [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    if (n < 2) throw Error(ErrorCode::InvalidDomain, "require n >= 2, got " + std::to_string(n));
}

std::vector<double> Grid1D::centers() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = center(i);
    return x;
}

std::vector<double> Grid1D::weights() const { return std::vector<double>(n_, dx_); }

Grid1D build_grid(double a, double b, std::size_t n) { return Grid1D(a, b, n); }

Field::Field(const Grid1D& grid, double value) : grid_(grid), values_(grid.size(), value) {}

Field::Field(const Grid1D& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw Error(ErrorCode::LengthMismatch, "field has " + std::to_string(values_.size()) +
                                                   " values but grid has " + std::to_string(grid_.size()) + " cells");
}

void require_same_grid(const Field& f, const Field& g) {
    if (!(f.grid() == g.grid())) throw Error(ErrorCode::LengthMismatch, "fields live on different grids");
}

Field& Field::operator+=(const Field& other) {
    require_same_grid(*this, other);
    for (std::size_t i = 0; i < size(); ++i) values_[i] += other[i];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(*this, other);
    for (std::size_t i = 0; i < size(); ++i) values_[i] -= other[i];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
Field operator*(double s, Field f) { return f *= s; }

Field hadamard(const Field& f, const Field& g) {
    require_same_grid(f, g);
    Field out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] * g[i];
    return out;
}

double quadrature(const Field& f) {
    double s = 0.0;
    for (double v : f) s += v;
    return s * f.grid().dx();
}

double inner(const Field& f, const Field& g) {
    require_same_grid(f, g);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
    return s * f.grid().dx();
}

double norm2(const Field& f) { return std::sqrt(inner(f, f)); }

double sup_norm(const Field& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

double min_value(const Field& f) { return *std::min_element(f.begin(), f.end()); }
double max_value(const Field& f) { return *std::max_element(f.begin(), f.end()); }

double sup_distance(const Field& f, const Field& g) {
    require_same_grid(f, g);
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
    return m;
}

bool all_finite(const Field& f) {
    return std::all_of(f.begin(), f.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace mutsel
