#include "greennet/sizing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "greennet/csv.hpp"
#include "greennet/errors.hpp"

namespace greennet {

void SearchSpace::validate(const SiteConfig& site) const {
    if (pv_kw.empty() || bg_kw.empty() || batt_units.empty() || conv_kw.empty()) {
        throw ValidationError("search space has an empty dimension");
    }
    for (double v : pv_kw) {
        if (!(v >= 0.0)) throw ValidationError("pv sizes must be non-negative");
    }
    for (double v : bg_kw) {
        if (!(v >= 0.0)) throw ValidationError("bg sizes must be non-negative");
        if (v > 0.0 && !has_biomass(site.kind)) {
            throw ValidationError(std::string(to_string(site.kind)) + " sites cannot size a generator");
        }
    }
    for (double v : conv_kw) {
        if (!(v >= 0.0)) throw ValidationError("converter sizes must be non-negative");
    }
    for (int n : batt_units) {
        BatteryBank bank = site.battery;
        bank.n_batt = n;
        bank.validate(site.bus_v);
    }
}

SearchSpace SearchSpace::default_for(BsKind kind) {
    SearchSpace s;
    switch (kind) {
        case BsKind::Macro:
            for (int k = 1; k <= 12; ++k) s.pv_kw.push_back(0.5 * k);
            s.bg_kw = {0.0, 1.0, 2.0};
            for (int n = 8; n <= 64; n += 8) s.batt_units.push_back(n);
            s.conv_kw = {0.0, 0.1, 0.2};
            break;
        case BsKind::Micro:
            for (int k = 1; k <= 6; ++k) s.pv_kw.push_back(0.5 * k);
            s.bg_kw = {0.0, 1.0};
            for (int n = 8; n <= 48; n += 8) s.batt_units.push_back(n);
            s.conv_kw = {0.0, 0.1, 0.2};
            break;
        case BsKind::Pico:
        case BsKind::Femto:
            s.pv_kw = {0.1, 0.2, 0.3, 0.4, 0.5};
            s.bg_kw = {0.0};
            s.batt_units = {8, 16, 24};
            s.conv_kw = {0.0};
            break;
    }
    return s;
}

bool feasible(const SiteConfig& site, const SiteYearResult& year, const FeasibilityRules& rules,
              std::string* why) {
    auto fail = [&](const char* reason) {
        if (why) *why = reason;
        return false;
    };
    const auto& rel = year.reliability;
    if (rel.e_cs > rules.shortage_tolerance) return fail("capacity shortage");
    if (!year.soc_bounds_ok) return fail("soc bounds violated");
    if (std::abs(year.ledger_residual_kwh) > rules.ledger_tolerance_kwh) return fail("ledger imbalance");
    if (rules.backup_days > 0.0 && rel.e_bs > 0.0) {
        const double hours = year.hours.empty() ? kHoursPerYear : static_cast<double>(year.hours.size());
        const double avg_kw = rel.e_bs / hours;
        const double need_ah = battery_capacity_required_ah(avg_kw, rules.backup_days, rules.hours_per_day,
                                                            site.battery.dod, site.bus_v, site.battery.kb);
        if (site.battery.capacity_ah(site.bus_v) + 1e-9 < need_ah) return fail("insufficient backup capacity");
    }
    if (why) why->clear();
    return true;
}

bool design_less(const EnergySystemDesign& a, const EnergySystemDesign& b) {
    if (a.pv_kw != b.pv_kw) return a.pv_kw < b.pv_kw;
    if (a.bg_kw != b.bg_kw) return a.bg_kw < b.bg_kw;
    if (a.batt_units != b.batt_units) return a.batt_units < b.batt_units;
    return a.conv_kw < b.conv_kw;
}

EvaluatedDesign evaluate_design(const SiteConfig& site, const EnergySystemDesign& design,
                                const EconInputs& econ, const FeasibilityRules& rules) {
    SiteConfig s = site;
    s.apply(design);
    const YearResult year = run_year({s}, {});
    const SiteYearResult& r = year.sites.front();

    EvaluatedDesign e;
    e.design = design;
    e.e_cs = r.reliability.e_cs;
    e.e_excess = r.reliability.e_excess;
    e.e_gen = r.reliability.e_gen;
    e.e_bs = r.reliability.e_bs;
    e.feasible = feasible(s, r, rules, &e.reason);

    const DispatchSummary d = summarize(r);
    if (d.served_kwh > 0.0) {
        const CostLedger ledger = npc(design, s.battery, d, econ);
        e.npc = ledger.npc;
        e.tac = ledger.tac;
        e.coe_per_kwh = ledger.coe_per_kwh;
    } else {
        e.feasible = false;
        e.reason = "nothing served";
    }
    return e;
}

const EvaluatedDesign& OptimizeResult::best() const {
    if (ranked.empty()) throw std::logic_error("search space has no feasible design");
    return ranked.front();
}

OptimizeResult optimize(const SiteConfig& site, const SearchSpace& space, const EconInputs& econ,
                        const FeasibilityRules& rules, unsigned threads) {
    site.validate();
    space.validate(site);

    std::vector<EnergySystemDesign> grid;
    grid.reserve(space.size());
    for (double pv : space.pv_kw)
        for (double bg : space.bg_kw)
            for (int n : space.batt_units)
                for (double conv : space.conv_kw) grid.push_back({pv, bg, n, conv});

    OptimizeResult result;
    result.evaluated.resize(grid.size());

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t k = next++; k < grid.size() && !failed; k = next++) {
            try {
                result.evaluated[k] = evaluate_design(site, grid[k], econ, rules);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);

    for (const auto& e : result.evaluated) {
        if (e.feasible) result.ranked.push_back(e);
    }
    std::sort(result.ranked.begin(), result.ranked.end(), [](const auto& a, const auto& b) {
        if (a.npc != b.npc) return a.npc < b.npc;
        return design_less(a.design, b.design);
    });
    return result;
}

void write_ranking_csv(const std::filesystem::path& path, const OptimizeResult& result) {
    CsvWriter csv(path, {"rank", "pv_kw", "bg_kw", "batt_units", "conv_kw", "npc_usd", "tac_usd_per_yr",
                         "coe_usd_per_kwh", "e_gen_kwh", "e_bs_kwh", "e_excess_kwh"});
    int rank = 1;
    for (const auto& e : result.ranked) {
        csv.cell(rank++)
            .cell(e.design.pv_kw, 2)
            .cell(e.design.bg_kw, 2)
            .cell(e.design.batt_units)
            .cell(e.design.conv_kw, 2)
            .cell(e.npc, 2)
            .cell(e.tac, 2)
            .cell(e.coe_per_kwh, 4)
            .cell(e.e_gen, 3)
            .cell(e.e_bs, 3)
            .cell(e.e_excess, 3);
        csv.end_row();
    }
}

}  // namespace greennet
