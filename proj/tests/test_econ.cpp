#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "greennet/econ.hpp"
#include "greennet/errors.hpp"

using namespace greennet;

namespace {

DispatchSummary typical_macro_year() {
    DispatchSummary d;
    d.bg_kwh = 40.0;
    d.bg_hours = 60.0;
    d.batt_throughput_kwh = 900.0;
    d.served_kwh = 5119.0;
    return d;
}

const ComponentLedger& component(const CostLedger& l, const std::string& name) {
    for (const auto& c : l.components) {
        if (c.cost.name == name) return c;
    }
    throw std::out_of_range(name);
}

}  // namespace

TEST_CASE("capital recovery factor") {
    CHECK(std::abs(crf(0.0675, 20) - 0.09257) <= 1e-4);
    CHECK(crf(0.0675, 20) == doctest::Approx(0.0925667).epsilon(1e-6));
    CHECK(crf(0.0, 20) == doctest::Approx(0.05));
    CHECK(crf(0.1, 1) == doctest::Approx(1.1));
    CHECK_THROWS_AS(crf(0.05, 0), ValidationError);
    CHECK_THROWS_AS(crf(-0.01, 10), ValidationError);
}

TEST_CASE("salvage is linear in remaining life and replacement cost") {
    CHECK(salvage(3500.0, 5.0, 25.0) == doctest::Approx(700.0));
    CHECK(salvage(1000.0, 0.0, 10.0) == 0.0);
    CHECK(salvage(1000.0, 10.0, 10.0) == 1000.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double rep = 1000.0 * u(rng);
        const double life = 1.0 + 30.0 * u(rng);
        const double a = life * u(rng);
        const double b = life * u(rng);
        if (a + b <= life) {
            CHECK(salvage(rep, a + b, life) == doctest::Approx(salvage(rep, a, life) + salvage(rep, b, life)));
        }
        CHECK(salvage(2.0 * rep, a, life) == doctest::Approx(2.0 * salvage(rep, a, life)));
    }
    CHECK_THROWS_AS(salvage(1.0, 11.0, 10.0), ValidationError);
    CHECK_THROWS_AS(salvage(1.0, 1.0, 0.0), ValidationError);
}

TEST_CASE("capital cost ordering for the reference macro design") {
    const EnergySystemDesign d{3.5, 1.0, 32, 0.1};
    const auto costs = component_costs(d, BatteryBank{}, typical_macro_year(), EconInputs{});
    std::map<std::string, double> cc;
    for (const auto& c : costs) cc[c.name] = c.capital;
    CHECK(cc.at("battery") > cc.at("pv"));
    CHECK(cc.at("pv") > cc.at("bg"));
    CHECK(cc.at("bg") > cc.at("converter"));
    CHECK(cc.at("battery") == 9600.0);
    CHECK(cc.at("pv") == 3500.0);
    CHECK(cc.at("bg") == 660.0);
    CHECK(cc.at("converter") == doctest::Approx(40.0));
}

TEST_CASE("annuity and discounted cash-flow routes agree") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const EnergySystemDesign d{0.5 * (1 + static_cast<int>(12 * u(rng))), static_cast<double>(static_cast<int>(3 * u(rng))),
                                   8 * (1 + static_cast<int>(8 * u(rng))), 0.1 * static_cast<int>(3 * u(rng))};
        DispatchSummary s;
        s.bg_kwh = d.bg_kw > 0.0 ? 107.0 * u(rng) : 0.0;
        s.bg_hours = s.bg_kwh > 0.0 ? 1.0 + 3000.0 * u(rng) : 0.0;
        s.batt_throughput_kwh = 3000.0 * u(rng);
        s.served_kwh = 1000.0 + 6000.0 * u(rng);
        EconInputs econ;
        econ.interest = 0.15 * u(rng);
        econ.project_years = 1 + static_cast<int>(30 * u(rng));
        const auto l = npc(d, BatteryBank{}, s, econ);
        CAPTURE(k);
        CHECK(std::abs(l.npc - l.npc_discounted) / l.npc_discounted < 1e-3);
        CHECK(l.coe_per_kwh == doctest::Approx(l.tac / s.served_kwh));
    }
}

TEST_CASE("pv ledger by hand") {
    const EnergySystemDesign d{3.5, 0.0, 8, 0.0};
    const auto l = npc(d, BatteryBank{}, typical_macro_year(), EconInputs{});
    const auto& pv = component(l, "pv");
    // No replacement inside 20 years, five years of life left at the end.
    CHECK(pv.flows.size() == 21u);
    CHECK(pv.flows[0].capital == 3500.0);
    CHECK(pv.flows[20].salvage == doctest::Approx(700.0));
    CHECK(pv.salvage_pv == doctest::Approx(700.0 * std::pow(1.0675, -20.0)));
    CHECK(pv.salvage_pv == doctest::Approx(189.6).epsilon(1e-3));
    // Yearly O&M of $35 is worth 35 / CRF today.
    double om = 0.0;
    for (const auto& f : pv.flows) om += f.om * std::pow(1.0675, -f.year);
    CHECK(om == doctest::Approx(35.0 / crf(0.0675, 20)));
    CHECK(om == doctest::Approx(378.1).epsilon(1e-3));
}

TEST_CASE("converter is replaced once in a 20 year project") {
    const EnergySystemDesign d{3.5, 0.0, 8, 0.1};
    const auto l = npc(d, BatteryBank{}, typical_macro_year(), EconInputs{});
    const auto& c = component(l, "converter");
    CHECK(c.flows[15].replacement == doctest::Approx(40.0));
    // Installed at 15 with a 15 year life: 10 years remain at year 20.
    CHECK(c.flows[20].salvage == doctest::Approx(40.0 * 10.0 / 15.0));
}

TEST_CASE("an idle generator costs only capital and is never replaced") {
    DispatchSummary s = typical_macro_year();
    s.bg_kwh = 0.0;
    s.bg_hours = 0.0;
    const auto l = npc({3.5, 1.0, 32, 0.1}, BatteryBank{}, s, EconInputs{});
    const auto& bg = component(l, "bg");
    CHECK(bg.cost.life_yr == 0.0);
    CHECK(bg.npc == doctest::Approx(660.0));
}

TEST_CASE("fuel cost follows generator energy") {
    const auto costs = component_costs({3.5, 1.0, 32, 0.1}, BatteryBank{}, typical_macro_year(), EconInputs{});
    const double kg = 40.0 * feedstock_kg_per_kwh(3411.33, 0.30);
    for (const auto& c : costs) {
        if (c.name == "bg") {
            CHECK(c.fuel_per_yr == doctest::Approx(kg / 1000.0 * 30.0));
            CHECK(c.om_per_yr == doctest::Approx(60.0 * 0.05));
            CHECK(c.life_yr == doctest::Approx(std::floor(25000.0 / 60.0)));
        }
    }
}

TEST_CASE("cost of energy is undefined with nothing served") {
    DispatchSummary s = typical_macro_year();
    s.served_kwh = 0.0;
    CHECK_THROWS_AS(npc({3.5, 1.0, 32, 0.1}, BatteryBank{}, s, EconInputs{}), std::domain_error);
}

TEST_CASE("price table validation") {
    PriceTable p;
    CHECK_NOTHROW(p.validate());
    p.batt_cc_per_unit = -1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = PriceTable{};
    p.conv_life_yr = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("cash flow CSV carries a header with units") {
    const auto l = npc({3.5, 1.0, 32, 0.1}, BatteryBank{}, typical_macro_year(), EconInputs{});
    const auto path = std::filesystem::temp_directory_path() / "greennet_test_cash.csv";
    write_cash_flow_csv(path, l);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "year,component,capital_usd,replacement_usd,om_usd,fuel_usd,salvage_usd");
    std::filesystem::remove(path);
}

TEST_CASE("calibrated emission factors reproduce the macro and micro table") {
    const double macro[] = {0.216, 0.000967, 0.000107, 0.0000729, 0.0, 0.00863};
    const double micro[] = {0.558, 0.00249, 0.000276, 0.000188, 0.0, 0.0222};
    for (auto [kind, table] : {std::pair{BsKind::Macro, macro}, std::pair{BsKind::Micro, micro}}) {
        const auto e = emissions(107.0, 0.0, calibrated_factors(kind));
        for (std::size_t k = 0; k < std::size(kPollutants); ++k) {
            CHECK(e.at(kPollutants[k]) == doctest::Approx(table[k]).epsilon(1e-12));
        }
        CHECK(e.at("so2") == 0.0);
        CHECK(e.count("co2_avoided") == 0u);
    }
    CHECK_THROWS_AS(calibrated_factors(BsKind::Pico), ValidationError);
}

TEST_CASE("emissions are linear in generator energy") {
    const auto f = calibrated_factors(BsKind::Macro);
    const auto one = emissions(1.0, 0.0, f);
    for (double kwh : {0.0, 10.0, 53.5, 107.0, 1000.0}) {
        const auto e = emissions(kwh, 0.0, f);
        for (const auto& [name, v] : e) CHECK(v == doctest::Approx(kwh * one.at(name)));
    }
    CHECK_THROWS_AS(emissions(-1.0, 0.0, f), ValidationError);
}

TEST_CASE("avoided open burning credit is optional") {
    auto f = calibrated_factors(BsKind::Micro);
    f.credit_avoided_burning = true;
    const auto e = emissions(107.0, 300.0, f);
    CHECK(e.at("co2_avoided") == doctest::Approx(1.49 * 300.0));
}
