#include "mutsel/coefficient.hpp"

#include "mutsel/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mutsel {

namespace {

class SpecParser {
public:
    explicit SpecParser(std::string_view text) : text_(text) {}

    SpecNode parse() {
        SpecNode node = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters");
        return node;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::UnknownSpec,
                    msg + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(text_) + "'");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_call() const {
        std::size_t p = pos_;
        if (p >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[p])) || text_[p] == '_')) return false;
        while (p < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[p])) || text_[p] == '_')) ++p;
        while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
        return p < text_.size() && text_[p] == '(';
    }

    SpecNode parse_sum() {
        std::vector<SpecArg> terms;
        terms.emplace_back(parse_call());
        skip_ws();
        while (pos_ < text_.size() && text_[pos_] == '+') {
            ++pos_;
            terms.emplace_back(parse_call());
            skip_ws();
        }
        if (terms.size() == 1) return std::get<SpecNode>(std::move(terms.front()));
        return SpecNode{"+", std::move(terms)};
    }

    SpecNode parse_call() {
        skip_ws();
        if (!at_call()) fail("expected name(...)");
        std::size_t start = pos_;
        while (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_') ++pos_;
        SpecNode node{std::string(text_.substr(start, pos_ - start)), {}};
        skip_ws();
        ++pos_;  // '('
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ')') {
            ++pos_;
            return node;
        }
        while (true) {
            node.args.push_back(parse_arg());
            skip_ws();
            if (pos_ >= text_.size()) fail("unterminated argument list");
            if (text_[pos_] == ')') {
                ++pos_;
                return node;
            }
            if (text_[pos_] != ',') fail("expected ',' or ')'");
            ++pos_;
        }
    }

    SpecArg parse_arg() {
        skip_ws();
        if (at_call()) return parse_sum();
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ')') ++pos_;
        std::string_view raw = text_.substr(start, pos_ - start);
        while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.remove_suffix(1);
        if (raw.empty()) fail("empty argument");
        double value = 0.0;
        const char* first = raw.data();
        if (raw.front() == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, raw.data() + raw.size(), value);
        if (ec == std::errc() && ptr == raw.data() + raw.size()) return value;
        return std::string(raw);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

double number_arg(const SpecNode& node, std::size_t i) {
    if (i >= node.args.size() || !std::holds_alternative<double>(node.args[i]))
        throw Error(ErrorCode::UnknownSpec, node.name + ": argument " + std::to_string(i + 1) + " must be a number");
    return std::get<double>(node.args[i]);
}

void require_arity(const SpecNode& node, std::size_t lo, std::size_t hi) {
    if (node.args.size() < lo || node.args.size() > hi)
        throw Error(ErrorCode::UnknownSpec, node.name + ": wrong number of arguments (" +
                                                std::to_string(node.args.size()) + ")");
}

void require_numbers(const SpecNode& node) {
    for (std::size_t i = 0; i < node.args.size(); ++i) number_arg(node, i);
}

void validate_1d(const SpecNode& node) {
    constexpr std::size_t any = static_cast<std::size_t>(-1);
    if (node.name == "+") {
        for (const auto& a : node.args) {
            if (!std::holds_alternative<SpecNode>(a)) throw Error(ErrorCode::UnknownSpec, "'+' operands must be specs");
            validate_1d(std::get<SpecNode>(a));
        }
        return;
    }
    if (node.name == "const") require_arity(node, 1, 1);
    else if (node.name == "poly") require_arity(node, 1, any);
    else if (node.name == "cos") require_arity(node, 2, 3);
    else if (node.name == "gaussian") require_arity(node, 3, 3);
    else if (node.name == "tabulated") require_arity(node, 1, any);
    else throw Error(ErrorCode::UnknownSpec, "unknown coefficient function '" + node.name + "'");
    require_numbers(node);
    if (node.name == "gaussian" && !(number_arg(node, 1) > 0.0))
        throw Error(ErrorCode::UnknownSpec, "gaussian width must be positive");
}

void validate_2d(const SpecNode& node) {
    if (node.name == "+") {
        for (const auto& a : node.args) {
            if (!std::holds_alternative<SpecNode>(a)) throw Error(ErrorCode::UnknownSpec, "'+' operands must be specs");
            validate_2d(std::get<SpecNode>(a));
        }
        return;
    }
    if (node.name == "const2" || node.name == "sepcos") {
        require_arity(node, 1, 1);
        require_numbers(node);
    } else if (node.name == "tabulated2") {
        require_arity(node, 1, 1);
        if (!std::holds_alternative<std::string>(node.args[0]))
            throw Error(ErrorCode::UnknownSpec, "tabulated2 expects a file path");
    } else {
        throw Error(ErrorCode::UnknownSpec, "unknown 2D kernel function '" + node.name + "'");
    }
}

void add_1d(const SpecNode& node, const Grid1D& grid, std::vector<double>& out) {
    const std::size_t n = grid.size();
    if (node.name == "+") {
        for (const auto& a : node.args) add_1d(std::get<SpecNode>(a), grid, out);
        return;
    }
    if (node.name == "tabulated") {
        if (node.args.size() != n)
            throw Error(ErrorCode::LengthMismatch, "tabulated spec has " + std::to_string(node.args.size()) +
                                                       " values, grid has " + std::to_string(n) + " cells");
        for (std::size_t i = 0; i < n; ++i) out[i] += std::get<double>(node.args[i]);
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.center(i);
        double v = 0.0;
        if (node.name == "const") {
            v = number_arg(node, 0);
        } else if (node.name == "poly") {
            for (std::size_t k = node.args.size(); k-- > 0;) v = v * x + std::get<double>(node.args[k]);
        } else if (node.name == "cos") {
            const double amp = node.args.size() > 2 ? number_arg(node, 2) : 1.0;
            v = amp * std::cos(number_arg(node, 0) * std::numbers::pi * grid.normalized(i) + number_arg(node, 1));
        } else if (node.name == "gaussian") {
            const double d = x - number_arg(node, 0);
            const double w = number_arg(node, 1);
            v = number_arg(node, 2) * std::exp(-d * d / (2.0 * w * w));
        }
        out[i] += v;
    }
}

void add_2d(const SpecNode& node, const Grid1D& grid, const std::filesystem::path& base_dir, DenseMatrix& out) {
    const std::size_t n = grid.size();
    if (node.name == "+") {
        for (const auto& a : node.args) add_2d(std::get<SpecNode>(a), grid, base_dir, out);
        return;
    }
    if (node.name == "tabulated2") {
        std::filesystem::path p = std::get<std::string>(node.args[0]);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        DenseMatrix m = read_csv_matrix(p);
        if (m.rows() != n || m.cols() != n)
            throw Error(ErrorCode::LengthMismatch, "tabulated2 matrix is " + std::to_string(m.rows()) + "x" +
                                                       std::to_string(m.cols()) + ", grid has " + std::to_string(n) +
                                                       " cells");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(i, j) += m(i, j);
        return;
    }
    const double c = number_arg(node, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double cx = std::cos(std::numbers::pi * grid.normalized(i));
        for (std::size_t j = 0; j < n; ++j) {
            if (node.name == "const2") out(i, j) += c;
            else out(i, j) += 1.0 + c * cx * std::cos(std::numbers::pi * grid.normalized(j));
        }
    }
}

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

SpecNode parse_spec_expression(std::string_view text) { return SpecParser(text).parse(); }

std::string to_string(const SpecNode& node) {
    std::string out;
    if (node.name == "+") {
        for (std::size_t i = 0; i < node.args.size(); ++i) {
            if (i) out += " + ";
            out += to_string(std::get<SpecNode>(node.args[i]));
        }
        return out;
    }
    out = node.name + "(";
    for (std::size_t i = 0; i < node.args.size(); ++i) {
        if (i) out += ",";
        const auto& a = node.args[i];
        if (std::holds_alternative<double>(a)) out += format_number(std::get<double>(a));
        else if (std::holds_alternative<std::string>(a)) out += std::get<std::string>(a);
        else out += to_string(std::get<SpecNode>(a));
    }
    return out + ")";
}

CoefficientSpec CoefficientSpec::parse(std::string_view text) {
    SpecNode node = parse_spec_expression(text);
    validate_1d(node);
    return CoefficientSpec(std::move(node));
}

CoefficientSpec CoefficientSpec::constant(double c) { return CoefficientSpec(SpecNode{"const", {c}}); }

Field sample(const CoefficientSpec& spec, const Grid1D& grid) {
    std::vector<double> values(grid.size(), 0.0);
    add_1d(spec.node(), grid, values);
    return Field(grid, std::move(values));
}

Coefficient2DSpec Coefficient2DSpec::parse(std::string_view text) { return from_node(parse_spec_expression(text)); }

Coefficient2DSpec Coefficient2DSpec::from_node(const SpecNode& node) {
    validate_2d(node);
    return Coefficient2DSpec(node);
}

DenseMatrix sample(const Coefficient2DSpec& spec, const Grid1D& grid, const std::filesystem::path& base_dir) {
    DenseMatrix m(grid.size(), grid.size(), 0.0);
    add_2d(spec.node(), grid, base_dir, m);
    return m;
}

DenseMatrix read_csv_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw Error(ErrorCode::IoError, path.string() + ": bad number '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw Error(ErrorCode::LengthMismatch, path.string() + ": ragged CSV matrix");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorCode::IoError, path.string() + ": empty matrix");
    DenseMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

}  // namespace mutsel
