#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "greennet/dispatch.hpp"
#include "greennet/power_model.hpp"

namespace greennet {

// i(1+i)^L / ((1+i)^L - 1); 1/L when i == 0.
double crf(double i, int years);

// Rep x Rem / Comp.
double salvage(double replacement_cost, double remaining_life, double component_life);

// Unit prices. Sizes are kW except the battery, which is priced per unit.
struct PriceTable {
    double pv_cc_per_kw = 1000.0;
    double pv_rc_per_kw = 1000.0;
    double pv_om_per_kw_yr = 10.0;
    double pv_life_yr = 25.0;

    double bg_cc_per_kw = 660.0;
    double bg_rc_per_kw = 660.0;
    double bg_om_per_hour = 0.05;
    double bg_life_hours = 25000.0;
    double fuel_per_tonne = 30.0;

    double batt_cc_per_unit = 300.0;
    double batt_rc_per_unit = 300.0;
    double batt_om_per_unit_yr = 10.0;

    double conv_cc_per_kw = 400.0;
    double conv_rc_per_kw = 400.0;
    double conv_om_per_kw_yr = 10.0;
    double conv_life_yr = 15.0;

    void validate() const;
};

struct EconInputs {
    PriceTable prices;
    double interest = 0.0675;
    int project_years = 20;
    double bg_cv_kcal_kg = 3411.33;
    double bg_efficiency = 0.30;
};

// What the cost model needs from a year of dispatch.
struct DispatchSummary {
    double bg_kwh = 0.0;
    double bg_hours = 0.0;
    double batt_throughput_kwh = 0.0;  // energy drawn from the bank per year
    double served_kwh = 0.0;           // end-use load actually met
};

DispatchSummary summarize(const SiteYearResult& year);

struct ComponentCost {
    std::string name;
    double capital = 0.0;      // per install
    double replacement = 0.0;  // per replacement
    double om_per_yr = 0.0;
    double fuel_per_yr = 0.0;
    double life_yr = 0.0;      // whole years; <= 0 means never replaced
};

// Nominal cash flows of one component in one project year.
struct CashFlow {
    int year = 0;
    double capital = 0.0;
    double replacement = 0.0;
    double om = 0.0;
    double fuel = 0.0;
    double salvage = 0.0;  // entered as a positive inflow

    double net() const { return capital + replacement + om + fuel - salvage; }
};

struct ComponentLedger {
    ComponentCost cost;
    std::vector<CashFlow> flows;  // years 0..L
    double npc = 0.0;             // discounted sum of flows
    double salvage_pv = 0.0;
};

struct CostLedger {
    double crf = 0.0;
    double tac = 0.0;
    double npc = 0.0;           // TAC / CRF
    double npc_discounted = 0.0;  // explicit discounted cash-flow sum
    double salvage = 0.0;       // present value of all salvage
    double coe_per_kwh = 0.0;
    std::vector<ComponentLedger> components;
};

// Per-component price and lifetime for a design.
std::vector<ComponentCost> component_costs(const EnergySystemDesign& design,
                                           const BatteryBank& bank, const DispatchSummary& dispatch,
                                           const EconInputs& econ);

// Throws std::domain_error when nothing was served (CoE undefined).
CostLedger npc(const EnergySystemDesign& design, const BatteryBank& bank,
               const DispatchSummary& dispatch, const EconInputs& econ);

void write_cash_flow_csv(const std::filesystem::path& path, const CostLedger& ledger);

// ---------------------------------------------------------------------------
// Emissions

inline constexpr const char* kPollutants[] = {"co2", "co", "unburned_hc", "particulates", "so2",
                                              "nox"};

struct EmissionFactors {
    std::map<std::string, double> kg_per_kwh;  // per kWh of generator output
    double avoided_co2_per_kg_feedstock = 1.49;
    bool credit_avoided_burning = false;
};

// Factor set that reproduces the tabulated annual emissions of the macro or
// micro site at the reference generator output.
EmissionFactors calibrated_factors(BsKind kind, double reference_bg_kwh = 107.0);

// kg/yr per pollutant; "co2_avoided" is added when the credit is enabled.
std::map<std::string, double> emissions(double bg_kwh, double feedstock_kg,
                                        const EmissionFactors& factors);

}  // namespace greennet
