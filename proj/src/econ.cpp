#include "greennet/econ.hpp"

#include <cmath>
#include <stdexcept>

#include "greennet/csv.hpp"
#include "greennet/errors.hpp"

namespace greennet {

double crf(double i, int years) {
    if (years < 1) throw ValidationError("project life must be at least one year");
    if (i < 0.0) throw ValidationError("interest rate must be non-negative");
    if (i == 0.0) return 1.0 / years;
    const double g = std::pow(1.0 + i, years);
    return i * g / (g - 1.0);
}

double salvage(double replacement_cost, double remaining_life, double component_life) {
    if (!(component_life > 0.0)) throw ValidationError("component life must be positive");
    if (remaining_life < 0.0 || remaining_life > component_life) {
        throw ValidationError("remaining life must lie in [0, component life]");
    }
    return replacement_cost * remaining_life / component_life;
}

void PriceTable::validate() const {
    for (double v : {pv_cc_per_kw, pv_rc_per_kw, pv_om_per_kw_yr, bg_cc_per_kw, bg_rc_per_kw,
                     bg_om_per_hour, fuel_per_tonne, batt_cc_per_unit, batt_rc_per_unit,
                     batt_om_per_unit_yr, conv_cc_per_kw, conv_rc_per_kw, conv_om_per_kw_yr}) {
        if (!(v >= 0.0)) throw ValidationError("prices must be non-negative");
    }
    if (!(pv_life_yr > 0.0) || !(bg_life_hours > 0.0) || !(conv_life_yr > 0.0)) {
        throw ValidationError("component lifetimes must be positive");
    }
}

DispatchSummary summarize(const SiteYearResult& year) {
    DispatchSummary d;
    d.bg_kwh = year.final_state.bg;
    d.bg_hours = year.final_state.bg_hours;
    d.batt_throughput_kwh = year.final_state.batt_discharge;
    d.served_kwh = year.reliability.e_bs - year.reliability.e_ed;
    return d;
}

std::vector<ComponentCost> component_costs(const EnergySystemDesign& design,
                                           const BatteryBank& bank, const DispatchSummary& dispatch,
                                           const EconInputs& econ) {
    const PriceTable& p = econ.prices;
    p.validate();
    std::vector<ComponentCost> out;

    out.push_back({"pv", design.pv_kw * p.pv_cc_per_kw, design.pv_kw * p.pv_rc_per_kw,
                   design.pv_kw * p.pv_om_per_kw_yr, 0.0, std::floor(p.pv_life_yr)});

    if (design.bg_kw > 0.0) {
        // A generator that never runs never wears out.
        const double life = dispatch.bg_hours > 0.0
                                ? std::max(1.0, std::floor(p.bg_life_hours / dispatch.bg_hours))
                                : 0.0;
        const double fuel_t = dispatch.bg_kwh > 0.0
                                  ? dispatch.bg_kwh *
                                        feedstock_kg_per_kwh(econ.bg_cv_kcal_kg, econ.bg_efficiency) /
                                        units::kKgPerTonne
                                  : 0.0;
        out.push_back({"bg", design.bg_kw * p.bg_cc_per_kw, design.bg_kw * p.bg_rc_per_kw,
                       dispatch.bg_hours * p.bg_om_per_hour, fuel_t * p.fuel_per_tonne, life});
    }

    BatteryBank sized = bank;
    sized.n_batt = design.batt_units;
    const double batt_life =
        std::max(1.0, std::floor(battery_lifetime_yr(sized, dispatch.batt_throughput_kwh)));
    out.push_back({"battery", design.batt_units * p.batt_cc_per_unit,
                   design.batt_units * p.batt_rc_per_unit, design.batt_units * p.batt_om_per_unit_yr,
                   0.0, batt_life});

    if (design.conv_kw > 0.0) {
        out.push_back({"converter", design.conv_kw * p.conv_cc_per_kw,
                       design.conv_kw * p.conv_rc_per_kw, design.conv_kw * p.conv_om_per_kw_yr, 0.0,
                       std::floor(p.conv_life_yr)});
    }
    return out;
}

namespace {

std::vector<CashFlow> nominal_flows(const ComponentCost& c, int years) {
    std::vector<CashFlow> flows(static_cast<std::size_t>(years) + 1);
    for (int y = 0; y <= years; ++y) flows[static_cast<std::size_t>(y)].year = y;
    flows[0].capital = c.capital;
    for (int y = 1; y <= years; ++y) {
        flows[static_cast<std::size_t>(y)].om = c.om_per_yr;
        flows[static_cast<std::size_t>(y)].fuel = c.fuel_per_yr;
    }
    if (c.life_yr <= 0.0) return flows;

    const int life = static_cast<int>(c.life_yr);
    int installed = 0;
    for (int y = life; y < years; y += life) {
        flows[static_cast<std::size_t>(y)].replacement = c.replacement;
        installed = y;
    }
    const double remaining = life - (years - installed);
    if (remaining > 0.0) {
        flows[static_cast<std::size_t>(years)].salvage = salvage(c.replacement, remaining, life);
    }
    return flows;
}

}  // namespace

CostLedger npc(const EnergySystemDesign& design, const BatteryBank& bank,
               const DispatchSummary& dispatch, const EconInputs& econ) {
    if (!(dispatch.served_kwh > 0.0)) throw std::domain_error("no energy served; CoE undefined");
    const double i = econ.interest;
    const int years = econ.project_years;

    CostLedger ledger;
    ledger.crf = crf(i, years);

    // Annuity route: closed-form present values turned into a yearly cost.
    double tac = 0.0;
    for (const auto& c : component_costs(design, bank, dispatch, econ)) {
        ComponentLedger comp;
        comp.cost = c;
        comp.flows = nominal_flows(c, years);

        double pv_once = c.capital;
        if (c.life_yr > 0.0) {
            const int life = static_cast<int>(c.life_yr);
            for (int y = life; y < years; y += life) pv_once += c.replacement * std::pow(1.0 + i, -y);
        }
        const double sv = comp.flows.back().salvage;
        comp.salvage_pv = sv * std::pow(1.0 + i, -years);
        pv_once -= comp.salvage_pv;
        tac += pv_once * ledger.crf + c.om_per_yr + c.fuel_per_yr;

        // Explicit route: discount every nominal flow.
        for (const auto& f : comp.flows) comp.npc += f.net() * std::pow(1.0 + i, -f.year);
        ledger.npc_discounted += comp.npc;
        ledger.salvage += comp.salvage_pv;
        ledger.components.push_back(std::move(comp));
    }
    ledger.tac = tac;
    ledger.npc = tac / ledger.crf;
    ledger.coe_per_kwh = tac / dispatch.served_kwh;
    return ledger;
}

void write_cash_flow_csv(const std::filesystem::path& path, const CostLedger& ledger) {
    CsvWriter csv(path, {"year", "component", "capital_usd", "replacement_usd", "om_usd", "fuel_usd",
                         "salvage_usd"});
    for (const auto& comp : ledger.components) {
        for (const auto& f : comp.flows) {
            csv.cell(f.year)
                .cell(comp.cost.name)
                .cell(f.capital, 2)
                .cell(f.replacement, 2)
                .cell(f.om, 2)
                .cell(f.fuel, 2)
                .cell(f.salvage, 2);
            csv.end_row();
        }
    }
}

EmissionFactors calibrated_factors(BsKind kind, double reference_bg_kwh) {
    if (!(reference_bg_kwh > 0.0)) throw ValidationError("reference generator output must be positive");
    // Annual kg at the reference output, in kPollutants order.
    static constexpr double kMacro[] = {0.216, 0.000967, 0.000107, 0.0000729, 0.0, 0.00863};
    static constexpr double kMicro[] = {0.558, 0.00249, 0.000276, 0.000188, 0.0, 0.0222};
    const double* table = nullptr;
    switch (kind) {
        case BsKind::Macro: table = kMacro; break;
        case BsKind::Micro: table = kMicro; break;
        default:
            throw ValidationError(std::string(to_string(kind)) + " sites have no generator emissions");
    }
    EmissionFactors f;
    for (std::size_t k = 0; k < std::size(kPollutants); ++k) {
        f.kg_per_kwh[kPollutants[k]] = table[k] / reference_bg_kwh;
    }
    return f;
}

std::map<std::string, double> emissions(double bg_kwh, double feedstock_kg,
                                        const EmissionFactors& factors) {
    if (!(bg_kwh >= 0.0) || !(feedstock_kg >= 0.0)) {
        throw ValidationError("emission drivers must be non-negative");
    }
    std::map<std::string, double> out;
    for (const auto& [name, factor] : factors.kg_per_kwh) {
        if (!(factor >= 0.0)) throw ValidationError("emission factor for " + name + " is negative");
        out[name] = factor * bg_kwh;
    }
    if (factors.credit_avoided_burning) {
        out["co2_avoided"] = factors.avoided_co2_per_kg_feedstock * feedstock_kg;
    }
    return out;
}

}  // namespace greennet
