#pragma once

#include "mutsel/grid.hpp"
#include "mutsel/matrix.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mutsel {

struct SpecNode;
using SpecArg = std::variant<double, std::string, SpecNode>;

/// Parsed `name(arg, ...)` expression. A top-level `a + b + ...` parses to a
/// node named "+" whose arguments are the summands.
struct SpecNode {
    std::string name;
    std::vector<SpecArg> args;
};

/// Parses the call-expression syntax shared by coefficient and kernel specs.
/// Numbers become doubles, nested calls become nodes and any other bare token
/// (e.g. a file path) is kept as a string. Throws UnknownSpec on syntax errors.
SpecNode parse_spec_expression(std::string_view text);

/// Renders a node back to canonical text.
std::string to_string(const SpecNode& node);

/// A one-dimensional coefficient: const(c), poly(c0,c1,...), cos(k,phase[,amp]),
/// gaussian(center,width,amplitude), tabulated(v1,...,vn), or a `+` of these.
///
/// cos(k,phase,amp) means amp*cos(k*pi*(x-a)/(b-a) + phase); gaussian means
/// amplitude*exp(-(x-center)^2 / (2 width^2)).
class CoefficientSpec {
public:
    /// Throws UnknownSpec for unrecognized names or wrong arity.
    static CoefficientSpec parse(std::string_view text);
    static CoefficientSpec constant(double c);

    const SpecNode& node() const noexcept { return node_; }
    std::string text() const { return to_string(node_); }

private:
    explicit CoefficientSpec(SpecNode node) : node_(std::move(node)) {}
    SpecNode node_;
};

/// Evaluates the spec at cell centers. Throws LengthMismatch for a tabulated
/// spec whose length differs from the cell count.
Field sample(const CoefficientSpec& spec, const Grid1D& grid);

/// A two-dimensional kernel spec: const2(c), sepcos(c), tabulated2(file) or a
/// `+` of these. sepcos(c) is 1 + c*cos(pi x^)cos(pi y^) on normalized coordinates.
class Coefficient2DSpec {
public:
    static Coefficient2DSpec parse(std::string_view text);
    static Coefficient2DSpec from_node(const SpecNode& node);

    const SpecNode& node() const noexcept { return node_; }
    std::string text() const { return to_string(node_); }

private:
    explicit Coefficient2DSpec(SpecNode node) : node_(std::move(node)) {}
    SpecNode node_;
};

/// Samples K(x_i, y_j). Relative tabulated2 paths are resolved against base_dir.
DenseMatrix sample(const Coefficient2DSpec& spec, const Grid1D& grid,
                   const std::filesystem::path& base_dir = {});

/// Reads a CSV matrix (one row per line, comma separated).
DenseMatrix read_csv_matrix(const std::filesystem::path& path);

}  // namespace mutsel
