#pragma once

#include "mutsel/config.hpp"
#include "mutsel/dynamics.hpp"
#include "mutsel/problem.hpp"
#include "mutsel/steady.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mutsel {

enum class Scenario { Eig, Gap, Simulate, Steady, EntropyCheck, EpsilonSweep, ConvergenceStudy, Dichotomy };

std::string to_string(Scenario s);
/// Accepts both the scenario names and the CLI subcommand names
/// (entropy, sweep, convergence).
Scenario parse_scenario(const std::string& text);

/// Scenario echo, measured quantities, per-criterion verdicts and the files
/// written. `to_json` flattens measured values to the top level next to
/// `scenario`, `config_hash`, `verdicts`, `files` and `passed`.
struct Report {
    std::string scenario;
    std::string config_hash;
    nlohmann::json measured = nlohmann::json::object();
    std::vector<std::pair<std::string, bool>> verdicts;
    std::vector<std::string> files;

    void verdict(const std::string& name, bool ok) { verdicts.emplace_back(name, ok); }
    bool passed() const;
    nlohmann::json to_json() const;
};

struct RunOptions {
    std::optional<std::filesystem::path> out_dir;  ///< overrides output.dir
    std::optional<std::uint64_t> seed;             ///< overrides rng.seed
    std::optional<std::filesystem::path> traj;     ///< snapshot CSV for the entropy scenario
};

/// Grid, operator, r, kernel and p from the `grid.*`, `coeff.*` and
/// `selection.*` keys.
Problem build_problem(const Config& cfg);

/// Executes the scenario named by `scenario` (or `forced`), writing CSV/JSON
/// artifacts into the output directory. Errors carry the config origin.
Report run(const Config& cfg, const RunOptions& options = {}, std::optional<Scenario> forced = std::nullopt);

// Refinement studies, usable directly or through the convergence scenario.

struct OrderStudy {
    std::vector<double> parameter;  ///< n or dt
    std::vector<double> error;
    std::vector<double> orders;     ///< between consecutive rungs
    double min_order() const;
};

/// Manufactured solution u = cos(pi x), A = 1 + x on [0, 1]; max interior-cell
/// error of L u against d/dx(A u').
OrderStudy operator_order_study(const std::vector<std::size_t>& ns);

/// r = 2, K = 1, p = 1, u0 = 0.1: error at t_end against 2 / (1 + 19 e^{-2t}).
OrderStudy time_order_study(const std::vector<double>& dts, double t_end = 5.0, std::size_t n = 8);

struct IdentityRung {
    std::size_t n = 0;
    double dt = 0.0;
    double max_residual = 0.0;
    double max_abs_dHdt = 0.0;
};

/// General-identity residual for the nonconstant blind scenario
/// (A = 1 + x, r = 2 + cos(pi x), k = 1 + y, p = 2) under joint (n, dt)
/// refinement, same seeded initial datum on every rung.
std::vector<IdentityRung> identity_refinement_study(const std::vector<std::pair<std::size_t, double>>& ladder,
                                                    double q, double t_end, std::uint64_t seed, int time_order = 2);

/// Sweep-level parallelism cap from MUTSEL_THREADS (default: all threads).
int sweep_threads();

}  // namespace mutsel
