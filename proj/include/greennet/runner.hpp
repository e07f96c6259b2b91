#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "greennet/scenario.hpp"

namespace greennet {

inline constexpr const char* kEngineVersion = "1.0.0";

enum class Command { Dispatch, Optimize, Radio, Sched, All };

Command command_from_string(std::string_view name);  // throws ValidationError
std::string_view to_string(Command command);

struct RunManifest {
    std::string scenario;
    std::uint64_t scenario_hash = 0;
    std::string command;
    std::map<std::string, std::string> engine_versions;
    std::vector<std::filesystem::path> files;  // in write order
    std::string summary;                       // also written to summary.txt
    double wall_clock_s = 0.0;
};

// Runs the selected engines and writes CSV reports, summary.txt and
// manifest.json into out_dir. Engine failures are rethrown with the same
// exception type and the scenario name prefixed to the message.
RunManifest run(const Scenario& scenario, Command command, const std::filesystem::path& out_dir,
                unsigned threads = 0);

}  // namespace greennet
