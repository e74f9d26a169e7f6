#include "mutsel/csv.hpp"

#include "mutsel/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mutsel {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

void write_snapshots(const std::filesystem::path& path, const Trajectory& traj) {
    auto out = open_out(path);
    const std::size_t n = traj.empty() ? 0 : traj.front().u.size();
    out << 't';
    for (std::size_t i = 0; i < n; ++i) out << ",u" << i;
    out << '\n';
    for (const SimState& s : traj) {
        out << format_double(s.t);
        for (double v : s.u) out << ',' << format_double(v);
        out << '\n';
    }
}

Trajectory read_snapshots(const std::filesystem::path& path, const Grid1D& grid) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::string line;
    std::getline(in, line);  // header
    Trajectory traj;
    long row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc()) throw Error(ErrorCode::IoError, path.string() + ": bad number '" + cell + "'");
            values.push_back(v);
        }
        if (values.size() != grid.size() + 1)
            throw Error(ErrorCode::LengthMismatch, path.string() + ": snapshot row has " +
                                                       std::to_string(values.size() - 1) + " values, grid has " +
                                                       std::to_string(grid.size()));
        const double t = values.front();
        values.erase(values.begin());
        traj.push_back({t, Field(grid, std::move(values)), row++});
    }
    return traj;
}

void write_field(const std::filesystem::path& path, const Field& f) {
    auto out = open_out(path);
    out << "x,u\n";
    for (std::size_t i = 0; i < f.size(); ++i) out << format_double(f.grid().center(i)) << ',' << format_double(f[i]) << '\n';
}

}  // namespace mutsel
