#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "greennet/dispatch.hpp"
#include "greennet/econ.hpp"
#include "greennet/radio.hpp"
#include "greennet/sizing.hpp"
#include "greennet/sleep.hpp"

namespace greennet {

struct SizingSpec {
    std::vector<std::string> sites;  // empty = every site
    // Grid overrides; a missing dimension uses the default grid for the kind.
    std::optional<std::vector<double>> pv_kw;
    std::optional<std::vector<double>> bg_kw;
    std::optional<std::vector<int>> batt_units;
    std::optional<std::vector<double>> conv_kw;
    FeasibilityRules rules;
    unsigned threads = 0;

    SearchSpace space_for(BsKind kind) const;
};

struct RadioSweep {
    std::vector<int> bandwidths_mhz{5, 10, 15, 20};
    RadioScenario base;
    bool write_drops = true;
};

struct NrtSweep {
    std::vector<double> lambdas;
    std::vector<int> n_short_cycles;  // empty: use params as given
    bool compare_baseline = true;
    double horizon_ms = 2e6;
    DrxParams params;
    TrafficStream traffic;
};

struct IotSweep {
    std::vector<double> lambdas;
    std::vector<double> t3324_s;
    double horizon_ms = 2e7;
    IotParams params;
    TrafficStream traffic;
};

struct Scenario {
    std::string name;
    std::filesystem::path source;
    std::uint64_t source_hash = 0;
    std::optional<std::uint64_t> seed;
    int bandwidth_mhz = 10;

    std::vector<SiteConfig> sites;
    std::vector<ShareLink> links;
    RunOptions sharing;
    EconInputs econ;
    bool credit_avoided_burning = false;

    std::optional<SizingSpec> sizing;
    std::optional<RadioSweep> radio;
    std::optional<NrtSweep> nrt;
    std::optional<IotSweep> iot;

    std::filesystem::path output_dir;  // relative paths resolve against the scenario file
};

// Installed sizes from the sizing table for a kind and bandwidth.
EnergySystemDesign reference_design(BsKind kind, int bandwidth_mhz);

// Replaces every seed in the scenario (CLI override).
void apply_seed(Scenario& sc, std::uint64_t seed);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

// Throws ScenarioError carrying the dotted path of the bad field. Paths in
// the document resolve against base_dir.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir);

Scenario load_scenario(const std::filesystem::path& path);

}  // namespace greennet
