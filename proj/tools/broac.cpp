// broac: scenario runner and decision checker for the bivalent
// relation-object access control engine.
//
// Exit codes: 0 clean, 1 denied verdict in single-query mode (or fuzz
// divergence), 2 parse or reference error, 3 authorization failure on a
// guarded mutation.

#include <cstdint>
#include <memory>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "broac/bench.hpp"
#include "broac/fuzz.hpp"
#include "broac/scenario.hpp"

namespace {

using namespace broac;

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const AuthorizationError& e) {
        std::cerr << "authorization failure: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

std::unique_ptr<Engine> load_scenario(const std::string& path, bool anonymous_enabled,
                                      std::vector<std::string>* outputs) {
    auto engine = std::make_unique<Engine>(WorldOptions{anonymous_enabled});
    ExecutionResult result = execute(parse_scenario_file(path), *engine);
    if (outputs) *outputs = std::move(result.outputs);
    return engine;
}

int cmd_run(const std::string& file, bool no_anonymous) {
    std::vector<std::string> outputs;
    load_scenario(file, !no_anonymous, &outputs);
    for (const std::string& out : outputs) std::cout << out << "\n";
    return 0;
}

int cmd_check(const std::string& file, const std::string& agent, const std::string& item,
              const std::string& ability, bool explain_trace) {
    auto engine = load_scenario(file, true, nullptr);
    const World& world = engine->world();
    Decision d = engine->resolver().resolve_item_ability(world.index_of(agent),
                                                         world.index_of(item), ability);
    std::cout << (explain_trace ? format_decision_trace(d) : format_decision(d)) << "\n";
    if (explain_trace) return 0;
    return d.allowed ? 0 : 1;
}

int cmd_lint(const std::string& file) {
    auto engine = load_scenario(file, true, nullptr);
    const World& world = engine->world();
    const Resolver resolver = engine->resolver();
    const EntityIndex anon = *world.anonymous();

    std::size_t checks = 0, loopholes = 0;
    for (EntityIndex agent : world.live_entities()) {
        if (agent == anon || !world.is_agent(agent)) continue;
        for (EntityIndex item : world.live_entities()) {
            for (const std::string& ability :
                 world.registry().effective_item_abilities(world.entity(item).type)) {
                ++checks;
                LoopholeReport r = resolver.lint_anonymous(agent, item, ability);
                if (!r.flagged) continue;
                ++loopholes;
                std::cout << "LOOPHOLE " << world.entity(agent).id << " " << world.entity(item).id
                          << " \"" << ability << "\" (agent=DENIED anonymous=ALLOWED)\n";
            }
        }
    }
    std::cout << "lint: " << loopholes << " loophole(s) across " << checks << " checks\n";
    return 0;
}

int cmd_bench(const std::string& sizes_arg, std::uint64_t seed, std::size_t reps,
              std::size_t items_per_user, std::size_t perms_per_user, double anon_fraction,
              const std::string& csv_path) {
    std::vector<std::size_t> sizes;
    std::size_t start = 0;
    while (start <= sizes_arg.size()) {
        std::size_t end = sizes_arg.find(',', start);
        if (end == std::string::npos) end = sizes_arg.size();
        if (end > start) sizes.push_back(std::stoul(sizes_arg.substr(start, end - start)));
        start = end + 1;
    }

    WorldGenParams params;
    params.seed = seed;
    params.items_per_user = items_per_user;
    params.permissions_per_user = perms_per_user;
    params.anonymous_visible_fraction = anon_fraction;

    BenchReport report = run_scaling_benchmark(sizes, params, reps);
    std::cout << format_bench_table(report);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw ValidationError("cannot write CSV report: " + csv_path);
        out << bench_csv(report);
        std::cout << "report written to " << csv_path << "\n";
    }
    return 0;
}

int cmd_fuzz(std::size_t trials, std::uint64_t seed) {
    EquivalenceReport report = run_equivalence(trials, seed);
    std::cout << "fuzz: " << report.worlds << " worlds, " << report.decisions << " decisions, "
              << report.divergences << " divergences\n";
    if (report.divergences > 0) {
        std::cerr << "first divergence: " << report.first_divergence << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bivalent relation-object access control engine"};
    app.require_subcommand(1);

    std::string file, agent, item, ability;
    bool no_anonymous = false;

    CLI::App* run = app.add_subcommand("run", "execute a scenario file and print query outputs");
    run->add_option("file", file, "scenario file")->required();
    run->add_flag("--no-anonymous", no_anonymous, "disable the reserved anonymous agent");

    CLI::App* check = app.add_subcommand("check", "run a scenario, then one ability check");
    check->add_option("file", file)->required();
    check->add_option("--agent", agent)->required();
    check->add_option("--item", item)->required();
    check->add_option("--ability", ability)->required();

    CLI::App* explain = app.add_subcommand("explain", "like check, with the full candidate trace");
    explain->add_option("file", file)->required();
    explain->add_option("--agent", agent)->required();
    explain->add_option("--item", item)->required();
    explain->add_option("--ability", ability)->required();

    CLI::App* lint = app.add_subcommand("lint", "scan every triple for anonymous loopholes");
    lint->add_option("file", file)->required();

    std::string sizes = "10,20,30,40,50,60,70,80,90,100";
    std::uint64_t seed = 1;
    std::size_t reps = 10, items_per_user = 12, perms_per_user = 24, trials = 1000;
    double anon_fraction = 0.5;
    std::string csv_path;

    CLI::App* bench = app.add_subcommand("bench", "scaling benchmark with linear fit");
    bench->add_option("--sizes", sizes, "comma-separated user counts (ascending)");
    bench->add_option("--seed", seed);
    bench->add_option("--reps", reps, "timed runs per query and size");
    bench->add_option("--items-per-user", items_per_user);
    bench->add_option("--perms-per-user", perms_per_user);
    bench->add_option("--anon-fraction", anon_fraction);
    bench->add_option("--csv", csv_path, "write the machine-readable report here");

    CLI::App* fuzz = app.add_subcommand("fuzz", "random-world resolver/oracle equivalence run");
    fuzz->add_option("--trials", trials);
    fuzz->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);

    return guarded([&]() -> int {
        if (run->parsed()) return cmd_run(file, no_anonymous);
        if (check->parsed()) return cmd_check(file, agent, item, ability, false);
        if (explain->parsed()) return cmd_check(file, agent, item, ability, true);
        if (lint->parsed()) return cmd_lint(file);
        if (bench->parsed())
            return cmd_bench(sizes, seed, reps, items_per_user, perms_per_user, anon_fraction,
                             csv_path);
        if (fuzz->parsed()) return cmd_fuzz(trials, seed);
        return 2;
    });
}
