// greennet <dispatch|optimize|radio|sched|all> --scenario <path> [--out <dir>] [--seed <n>]
//
// Exit status: 0 success, 2 invalid input (scenario, validation, topology),
// 3 runtime failure.

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "greennet/errors.hpp"
#include "greennet/runner.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Green HetNet energy, cost, radio and sleep-scheduling simulator"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", greennet::kEngineVersion);

    std::string scenario_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    bool quiet = false;

    for (const char* name : {"dispatch", "optimize", "radio", "sched", "all"}) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " engine(s)");
        sub->add_option("--scenario", scenario_path, "scenario JSON file")->required();
        sub->add_option("--out", out_dir, "output directory (default: scenario output_dir or out/<name>)");
        sub->add_option("--seed", seed, "override every seed in the scenario");
        sub->add_option("--threads", threads, "worker threads (0 = hardware concurrency)");
        sub->add_flag("-q,--quiet", quiet, "do not print the summary");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        const auto command = greennet::command_from_string(app.get_subcommands().front()->get_name());
        greennet::Scenario sc = greennet::load_scenario(scenario_path);
        if (seed) greennet::apply_seed(sc, *seed);
        std::filesystem::path out = out_dir;
        if (out.empty()) out = sc.output_dir.empty() ? std::filesystem::path("out") / sc.name : sc.output_dir;

        const auto manifest = greennet::run(sc, command, out, threads);
        if (!quiet) std::cout << manifest.summary;
        std::cout << "wrote " << manifest.files.size() << " files to " << out.string() << '\n';
        return 0;
    } catch (const greennet::ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << '\n';
        return kExitInput;
    } catch (const greennet::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitInput;
    } catch (const greennet::TopologyError& e) {
        std::cerr << "topology error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
