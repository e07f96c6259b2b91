#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dispatch_oracle.hpp"
#include "greennet/dispatch.hpp"

// Random short two-site networks, run through both the engine and the oracle.
namespace oracle {

struct Instance {
    std::vector<greennet::SiteConfig> sites;
    std::vector<greennet::SiteSeries> series;
    std::vector<greennet::ShareLink> links;
    greennet::RunOptions options;
    Site donor;
    Site recipient;
    Policy policy;
};

inline Instance random_instance(std::uint64_t seed, int hours = 48) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Instance in;
    in.options.mode = greennet::SharingMode::Hourly;
    in.options.hours = hours;
    in.options.e_ref_factor = 1.0 + 0.3 * u(rng);
    in.options.donor_soc_fraction = 0.5 + 0.5 * u(rng);
    in.options.donor_reserve_frac = 0.2 * u(rng);

    const greennet::BsKind kinds[2] = {greennet::BsKind::Macro,
                                       u(rng) < 0.5 ? greennet::BsKind::Macro : greennet::BsKind::Micro};
    const double pv_peak[2] = {1.0 + 3.0 * u(rng), 0.1 + 0.4 * u(rng)};
    const double load_mean[2] = {0.4 + 0.4 * u(rng), 0.4 + 0.6 * u(rng)};
    for (int j = 0; j < 2; ++j) {
        greennet::SiteConfig s;
        s.id = j == 0 ? "donor" : "recipient";
        s.kind = kinds[j];
        s.power = greennet::default_power_params(kinds[j]);
        s.battery.n_batt = 8;
        s.battery.q_nom_ah = 5.0 + 40.0 * u(rng);  // small banks run dry inside two days
        s.battery.round_trip_eff = 0.7 + 0.3 * u(rng);
        s.bg_kw = u(rng) < 0.5 ? 0.3 * u(rng) : 0.0;
        s.bg_annual_cap_kwh = 2.0 * u(rng);
        s.conv_kw = 0.1 * u(rng);
        s.conv_eff = 0.8 + 0.2 * u(rng);

        greennet::SiteSeries sr;
        for (int h = 0; h < hours; ++h) {
            const int hod = h % 24;
            const double sun = (hod >= 6 && hod < 18) ? std::sin(3.14159265358979 * (hod - 5.5) / 12.0) : 0.0;
            sr.pv_kwh.push_back(pv_peak[j] * sun * 2.0 * u(rng));
            sr.dc_load_kwh.push_back(load_mean[j] * (0.5 + u(rng)));
            sr.ac_load_kwh.push_back(hod >= 18 || hod < 6 ? 0.15 * u(rng) : 0.0);
        }

        Site& o = j == 0 ? in.donor : in.recipient;
        o.e_max = s.battery.nominal_kwh();
        o.e_min = s.battery.min_kwh();
        o.eta = s.battery.round_trip_eff;
        o.bg_kw = s.bg_kw;
        o.bg_cap = s.bg_annual_cap_kwh;
        o.conv_kw = s.conv_kw;
        o.conv_eff = s.conv_eff;
        o.pv = sr.pv_kwh;
        o.dc = sr.dc_load_kwh;
        o.ac = sr.ac_load_kwh;

        in.sites.push_back(s);
        in.series.push_back(std::move(sr));
    }
    const double r_ohm = 0.2 + 6.0 * u(rng);
    in.links.push_back({"donor", "recipient", r_ohm, greennet::kDefaultBusVoltage});
    in.policy = {r_ohm, greennet::kDefaultBusVoltage, in.options.e_ref_factor, in.options.donor_soc_fraction,
                 in.options.donor_reserve_frac};
    return in;
}

struct Comparison {
    double max_diff = 0.0;
    double max_ledger = 0.0;
    bool exercised_sharing = false;
};

inline Comparison compare(const Instance& in) {
    const auto year = greennet::run_year(in.sites, in.series, in.links, in.options);
    const Totals want = run(in.donor, in.recipient, in.policy, in.options.hours);
    Comparison c;
    auto diff = [&](double a, double b) { c.max_diff = std::max(c.max_diff, std::abs(a - b)); };
    const SiteTotals* t[2] = {&want.donor, &want.recipient};
    for (int j = 0; j < 2; ++j) {
        const auto& s = year.sites[static_cast<std::size_t>(j)];
        const auto& st = s.final_state;
        diff(st.pv, t[j]->pv);
        diff(st.bg, t[j]->bg);
        diff(st.served, t[j]->served);
        diff(s.reliability.e_ed, t[j]->unmet);
        diff(s.reliability.e_excess, t[j]->curtailed);
        diff(st.soc_kwh, t[j]->soc_end);
        diff(st.batt_loss, t[j]->batt_loss);
        diff(s.conv_loss_kwh, t[j]->conv_loss);
        c.max_ledger = std::max(c.max_ledger, std::abs(s.ledger_residual_kwh));
    }
    diff(year.links[0].share.e_excess, want.sent);
    diff(year.links[0].share.e_share, want.delivered);
    diff(year.line_loss_kwh, want.sent - want.delivered);
    c.max_ledger = std::max(c.max_ledger, std::abs(year.ledger_residual_kwh));
    c.exercised_sharing = want.delivered > 0.0;
    return c;
}

}  // namespace oracle
