#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "greennet/dispatch.hpp"
#include "greennet/econ.hpp"

namespace greennet {

struct SearchSpace {
    std::vector<double> pv_kw;
    std::vector<double> bg_kw;  // {0} for sites without a generator
    std::vector<int> batt_units;
    std::vector<double> conv_kw;

    std::size_t size() const { return pv_kw.size() * bg_kw.size() * batt_units.size() * conv_kw.size(); }
    void validate(const SiteConfig& site) const;

    // Grids at the default step sizes (0.5 kW PV, 1 kW BG, 8 units, 0.1 kW).
    static SearchSpace default_for(BsKind kind);
};

struct FeasibilityRules {
    double shortage_tolerance = 0.0;  // allowed E_CS
    double backup_days = 3.0;         // bank must carry the average load this long
    double hours_per_day = 24.0;
    double ledger_tolerance_kwh = 1e-6;
};

// Zero shortage, SOC inside bounds, balanced ledger, and enough bank
// capacity for the backup period. `why` receives the first failed rule.
bool feasible(const SiteConfig& site, const SiteYearResult& year, const FeasibilityRules& rules,
              std::string* why = nullptr);

struct EvaluatedDesign {
    EnergySystemDesign design;
    bool feasible = false;
    std::string reason;  // empty when feasible
    double npc = 0.0;
    double tac = 0.0;
    double coe_per_kwh = 0.0;
    double e_cs = 0.0;
    double e_excess = 0.0;
    double e_gen = 0.0;
    double e_bs = 0.0;
};

// Lexicographic (pv, bg, batt, conv).
bool design_less(const EnergySystemDesign& a, const EnergySystemDesign& b);

EvaluatedDesign evaluate_design(const SiteConfig& site, const EnergySystemDesign& design,
                                const EconInputs& econ, const FeasibilityRules& rules);

struct OptimizeResult {
    std::vector<EvaluatedDesign> ranked;     // feasible, NPC ascending
    std::vector<EvaluatedDesign> evaluated;  // every candidate, grid order

    bool infeasible_space() const { return ranked.empty(); }
    const EvaluatedDesign& best() const;  // throws std::logic_error when infeasible
};

// Exhaustive search. threads == 0 picks the hardware concurrency.
OptimizeResult optimize(const SiteConfig& site, const SearchSpace& space, const EconInputs& econ,
                        const FeasibilityRules& rules = {}, unsigned threads = 0);

void write_ranking_csv(const std::filesystem::path& path, const OptimizeResult& result);

}  // namespace greennet
