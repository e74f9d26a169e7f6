#include "mutsel/config.hpp"
#include "mutsel/error.hpp"
#include "mutsel/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Invocation {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    std::string traj;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mutation-selection equation solver"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> commands{
        {"eig", "principal eigenpair of L + r"},
        {"gap", "spectral gap of the weighted operator"},
        {"simulate", "time integration with diagnostics"},
        {"steady", "positive steady state"},
        {"entropy", "entropy identity and monotonicity along a trajectory"},
        {"sweep", "perturbed-kernel epsilon sweep"},
        {"convergence", "refinement studies"},
        {"dichotomy", "existence dichotomy over constant r"},
    };

    Invocation inv;
    std::vector<std::pair<CLI::App*, std::string>> subs;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", inv.config, "experiment file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", inv.out, "output directory");
        sub->add_option("--seed", inv.seed, "RNG seed");
        if (name == "entropy") sub->add_option("--traj", inv.traj, "snapshot CSV")->check(CLI::ExistingFile);
        subs.emplace_back(sub, name);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& [sub, name] : subs) {
            if (!sub->parsed()) continue;
            const mutsel::Config cfg = mutsel::Config::load(inv.config);
            mutsel::RunOptions opts;
            if (sub->count("--out")) opts.out_dir = inv.out;
            if (sub->count("--seed")) opts.seed = inv.seed;
            if (name == "entropy" && sub->count("--traj")) opts.traj = inv.traj;
            const mutsel::Report rep = mutsel::run(cfg, opts, mutsel::parse_scenario(name));
            std::cout << rep.to_json().dump(2) << '\n';
            return rep.passed() ? 0 : 1;
        }
    } catch (const mutsel::Error& e) {
        std::cerr << "mutsel: " << mutsel::to_string(e.code()) << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "mutsel: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
