#pragma once

#include "mutsel/grid.hpp"
#include "mutsel/state.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mutsel {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Snapshot file: header `t,u0,...,u{n-1}`, one row per snapshot.
void write_snapshots(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_snapshots(const std::filesystem::path& path, const Grid1D& grid);

/// Field file: header `x,u`, one row per cell.
void write_field(const std::filesystem::path& path, const Field& f);

}  // namespace mutsel
