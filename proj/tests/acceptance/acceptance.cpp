// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "greennet/dispatch.hpp"
#include "greennet/econ.hpp"
#include "greennet/power_model.hpp"
#include "greennet/radio.hpp"
#include "greennet/renewables.hpp"
#include "greennet/scenario.hpp"
#include "greennet/sizing.hpp"
#include "greennet/sleep.hpp"
#include "oracles/instances.hpp"

using namespace greennet;

namespace {

const std::filesystem::path kRoot = GREENNET_SOURCE_DIR;

// Collects the reasons a criterion failed.
struct Verdict {
    std::vector<std::string> failures;
    std::string note;

    void expect(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Verdict::expect(bool ok, const char* fmt, ...) {
    if (ok) return;
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    failures.emplace_back(buf);
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Scenario shipped(int bw) {
    char name[64];
    std::snprintf(name, sizeof name, "scenarios/hetnet_%dmhz.json", bw);
    return load_scenario(kRoot / name);
}

void sharing_table(Verdict& v) {
    const auto t0 = std::chrono::steady_clock::now();
    struct Row {
        int bw;
        double e_d, e_excess, amps, loss, share, save;
    };
    const Row rows[] = {{5, 3896, 1295, 3.07, 470.87, 824.12, 21.15},
                        {10, 5120, 2056, 4.88, 1187.20, 868.79, 16.96},
                        {15, 6434, 2116, 5.03, 1256.67, 859.32, 13.35},
                        {20, 7941, 2237, 5.32, 1405.75, 831.24, 10.46}};
    double worst = 0.0;
    for (const auto& r : rows) {
        const auto s = share_energy(r.e_excess, 5.67, 48.0, 8760.0, 0.01);
        const double save = 100.0 * s.e_share / r.e_d;
        for (auto [got, want, what] : {std::tuple{s.avg_current_a, r.amps, "I"},
                                       std::tuple{s.e_loss, r.loss, "E_loss"},
                                       std::tuple{s.e_share, r.share, "E_share"},
                                       std::tuple{save, r.save, "E_save"}}) {
            worst = std::max(worst, rel(got, want));
            v.expect(rel(got, want) <= 0.01, "%d MHz %s %.4g vs %.4g", r.bw, what, got, want);
        }
    }
    const double secs = seconds_since(t0);
    v.expect(secs < 1.0, "runtime %.3f s", secs);
    char buf[96];
    std::snprintf(buf, sizeof buf, "worst relative error %.3f%%", 100.0 * worst);
    v.note = buf;
}

void inter_bs_table(Verdict& v) {
    const auto mm = share_energy(2056, 5.67, 48.0, 8760.0, 0.01);
    const auto um = share_energy(128, 1.70, 48.0, 8760.0, 0.01);
    v.expect(rel(mm.e_loss, 1187.20) <= 0.01, "macro-macro E_loss %.2f", mm.e_loss);
    v.expect(rel(mm.e_share, 868.79) <= 0.01, "macro-macro E_share %.2f", mm.e_share);
    v.expect(rel(um.e_loss, 1.34) <= 0.01, "micro-macro E_loss %.3f", um.e_loss);
    v.expect(rel(um.e_share, 126.66) <= 0.01, "micro-macro E_share %.2f", um.e_share);
    char buf[128];
    std::snprintf(buf, sizeof buf, "macro-macro %.2f/%.2f kWh, micro-macro %.2f/%.2f kWh", mm.e_loss, mm.e_share,
                  um.e_loss, um.e_share);
    v.note = buf;
}

void pv_bg_example(Verdict& v) {
    PvConfig pv;
    pv.rated_kw = 3.5;
    pv.psh = 4.59;
    pv.derating = 0.9;
    pv.tracking_gain = 1.0;
    const double fixed = pv_annual_kwh(pv);
    pv.tracking_gain = 1.434;
    const double tracked = pv_annual_kwh(pv);
    const double p_bg = bg_power_kw(BgConfig{});
    const double e_bg = bg_annual_kwh(p_bg, BgConfig{}.capacity_factor);
    v.expect(std::abs(fixed - 5277.35) <= 0.01, "pv_annual %.4f", fixed);
    v.expect(std::abs(tracked - 7567.0) <= 10.0, "tracked %.2f", tracked);
    v.expect(std::abs(p_bg - 0.4995) <= 0.0005, "bg_power %.5f", p_bg);
    v.expect(std::abs(e_bg - 107.0) <= 1.0, "bg_annual %.2f", e_bg);
    char buf[128];
    std::snprintf(buf, sizeof buf, "PV %.2f / %.1f kWh, BG %.4f kW, %.1f kWh", fixed, tracked, p_bg, e_bg);
    v.note = buf;
}

void bs_power_tables(Verdict& v) {
    const BsKind kinds[] = {BsKind::Macro, BsKind::Micro, BsKind::Pico, BsKind::Femto};
    const double totals[] = {754.8, 144.6, 14.7, 10.4};
    const double sleep[] = {336.0, 78.0, 8.6, 5.8};
    std::string note;
    for (int k = 0; k < 4; ++k) {
        const double t = site_static_total(default_breakdown(kinds[k]));
        const auto p = default_power_params(kinds[k]);
        const double s = bs_power(p, 0.0);
        v.expect(rel(t, totals[k]) <= 0.015, "%s total %.2f W", std::string(to_string(kinds[k])).c_str(), t);
        v.expect(s == p.n_trx * p.p_sleep_w, "%s sleep %.4f is not N_TRX x P_sleep",
                 std::string(to_string(kinds[k])).c_str(), s);
        v.expect(std::abs(s - sleep[k]) <= 1e-9, "%s sleep %.4f W", std::string(to_string(kinds[k])).c_str(), s);
        char buf[48];
        std::snprintf(buf, sizeof buf, "%s%.1f", k ? "/" : "totals ", t);
        note += buf;
    }
    v.note = note + " W";
}

void sizing(Verdict& v) {
    const auto t0 = std::chrono::steady_clock::now();
    double prev_pv = 0.0;
    std::string note = "macro PV";
    for (int bw : kBandwidthsMhz) {
        const Scenario sc = shipped(bw);
        const SiteConfig& macro = sc.sites.front();
        const SizingSpec spec = sc.sizing.value_or(SizingSpec{});
        const auto res = optimize(macro, spec.space_for(macro.kind), sc.econ, spec.rules);
        if (res.infeasible_space()) {
            v.expect(false, "%d MHz: no feasible design", bw);
            continue;
        }
        const auto d = res.best().design;
        if (bw == 10) {
            v.expect(std::abs(d.pv_kw - 3.5) <= 0.5 + 1e-9, "10 MHz PV %.1f", d.pv_kw);
            v.expect(std::abs(d.bg_kw - 1.0) <= 1.0 + 1e-9, "10 MHz BG %.1f", d.bg_kw);
            v.expect(std::abs(d.batt_units - 32) <= 8, "10 MHz batteries %d", d.batt_units);
            v.expect(std::abs(d.conv_kw - 0.1) <= 0.1 + 1e-9, "10 MHz converter %.1f", d.conv_kw);
        }
        v.expect(d.pv_kw >= prev_pv, "PV falls to %.1f at %d MHz", d.pv_kw, bw);
        prev_pv = d.pv_kw;
        char buf[96];
        std::snprintf(buf, sizeof buf, " %d:%.1f", bw, d.pv_kw);
        note += buf;
        if (bw == 10) {
            std::snprintf(buf, sizeof buf, " (10 MHz: %.1f kW, %.0f kW, %d, %.1f kW)", d.pv_kw, d.bg_kw, d.batt_units,
                          d.conv_kw);
            note += buf;
        }
    }
    const double secs = seconds_since(t0);
    v.expect(secs < 120.0, "runtime %.1f s", secs);
    char buf[48];
    std::snprintf(buf, sizeof buf, ", %.1f s", secs);
    v.note = note + buf;
}

void dispatch_oracle(Verdict& v) {
    double worst = 0.0;
    double ledger = 0.0;
    int shared = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto c = oracle::compare(oracle::random_instance(1000 + seed));
        v.expect(c.max_diff <= 1e-9, "instance %llu differs by %.3g kWh", static_cast<unsigned long long>(seed),
                 c.max_diff);
        v.expect(c.max_ledger <= 1e-9, "instance %llu ledger residual %.3g kWh",
                 static_cast<unsigned long long>(seed), c.max_ledger);
        worst = std::max(worst, c.max_diff);
        ledger = std::max(ledger, c.max_ledger);
        shared += c.exercised_sharing ? 1 : 0;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "max diff %.2g kWh, max ledger residual %.2g kWh, %d/10 with transfers", worst,
                  ledger, shared);
    v.note = buf;
}

void scheduler(Verdict& v) {
    const Scenario sc = shipped(10);
    const NrtSweep& nrt = *sc.nrt;
    const IotSweep& iot = *sc.iot;

    auto t0 = std::chrono::steady_clock::now();
    int corner = 0;
    for (int n : nrt.n_short_cycles) {
        const DrxParams tri = nrt.params.with_short_cycles(n);
        DrxParams base = tri;
        base.strategy = DrxStrategy::ShortThenLong;
        double prev = 101.0;
        for (double lambda : nrt.lambdas) {
            TrafficStream t = nrt.traffic;
            t.lambda = lambda;
            const auto arrivals = mg1_arrivals(t, nrt.horizon_ms);
            const double s = simulate_nrt(tri, arrivals, nrt.horizon_ms).power_saving_pct;
            const double b = simulate_nrt(base, arrivals, nrt.horizon_ms).power_saving_pct;
            v.expect(s < prev, "N=%d saving not decreasing at lambda %.2f", n, lambda);
            prev = s;
            if (s < b) {
                if (n == 1 && lambda <= 0.1 + 1e-12) {
                    ++corner;
                } else {
                    v.expect(false, "N=%d lambda %.2f triangular %.3f < baseline %.3f", n, lambda, s, b);
                }
            }
        }
    }
    const double nrt_secs = seconds_since(t0);
    v.expect(nrt_secs < 30.0, "NRT sweep %.1f s", nrt_secs);

    const double idle = simulate_nrt(nrt.params, std::vector<Arrival>{}, 1e7).power_saving_pct;
    v.expect(std::abs(idle - 97.8) <= 0.5, "lambda->0 saving %.3f", idle);

    t0 = std::chrono::steady_clock::now();
    for (double lambda : iot.lambdas) {
        TrafficStream t = iot.traffic;
        t.lambda = lambda;
        const auto arrivals = mg1_arrivals(t, iot.horizon_ms);
        double prev = -1.0;
        for (double t3324 : iot.t3324_s) {
            IotParams p = iot.params;
            p.t3324_s = t3324;
            const double s = simulate_iot(p, arrivals, iot.horizon_ms).sleep.power_saving_pct;
            v.expect(s >= prev, "IoT saving falls at lambda %.3f, T3324 %.0f s", lambda, t3324);
            prev = s;
        }
    }
    const double iot_secs = seconds_since(t0);
    v.expect(iot_secs < 30.0, "IoT sweep %.1f s", iot_secs);

    TrafficStream none = iot.traffic;
    none.lambda = 0.0;
    const double psm = simulate_iot(iot.params, none, iot.horizon_ms).sleep.power_saving_pct;
    v.expect(psm > 99.99, "PSM bound %.4f", psm);

    char buf[192];
    std::snprintf(buf, sizeof buf, "idle %.2f%%, PSM %.4f%%, N=1 corner points %d, sweeps %.1f s / %.1f s", idle,
                  psm, corner, nrt_secs, iot_secs);
    v.note = buf;
}

void radio(Verdict& v) {
    const Scenario sc = shipped(10);
    RadioScenario base = sc.radio->base;
    double prev = 0.0;
    for (int bw : kBandwidthsMhz) {
        RadioScenario r = base;
        r.bandwidth_hz = bw * 1e6;
        const auto st = run_drops(r);
        v.expect(st.mean_r_total_bps > prev, "R_total not rising at %d MHz", bw);
        prev = st.mean_r_total_bps;
        const double pico = st.tiers.at(BsKind::Pico).mean_eta_ee;
        const double macro = st.tiers.at(BsKind::Macro).mean_eta_ee;
        v.expect(pico > macro, "%d MHz pico eta %.3g <= macro %.3g", bw, pico, macro);
    }

    RadioScenario fixed = base;
    fixed.shadow_sigma_db = 0.0;
    fixed.fixed_ues = {{120, 40}, {-450, 300}, {500, -20}, {0, -800}, {260, 610}};
    fixed.drops = 8;
    const auto layout = radio_layout(fixed);
    const auto a = run_drop(fixed, layout, 0);
    fixed.seed += 17;
    const auto b = run_drop(fixed, layout, 5);
    v.expect(a.sinr_db == b.sinr_db && a.r_total_bps == b.r_total_bps, "zero shadowing is not deterministic");

    RadioScenario big = base;
    big.drops = 10000;
    const auto t0 = std::chrono::steady_clock::now();
    run_drops(big);
    const double secs = seconds_since(t0);
    v.expect(secs < 10.0, "10^4 drops took %.2f s", secs);
    char buf[96];
    std::snprintf(buf, sizeof buf, "20 MHz mean R_total %.1f Mbit/s, 10^4 drops in %.2f s", prev / 1e6, secs);
    v.note = buf;
}

void costs(Verdict& v) {
    double worst = 0.0;
    int ledgers = 0;
    for (int bw : kBandwidthsMhz) {
        const Scenario sc = shipped(bw);
        const auto year = run_year(sc.sites, sc.links, sc.sharing);
        for (std::size_t i = 0; i < sc.sites.size(); ++i) {
            const auto summary = summarize(year.sites[i]);
            if (!(summary.served_kwh > 0.0)) continue;
            const auto l = npc(sc.sites[i].design(), sc.sites[i].battery, summary, sc.econ);
            const double e = rel(l.npc, l.npc_discounted);
            worst = std::max(worst, e);
            ++ledgers;
            v.expect(e <= 1e-3, "%s/%s NPC routes differ by %.4f%%", sc.name.c_str(), sc.sites[i].id.c_str(),
                     100.0 * e);
        }
    }
    const double c = crf(0.0675, 20);
    v.expect(std::abs(c - 0.09257) <= 1e-4, "CRF %.6f", c);

    v.expect(std::abs(salvage(3500.0, 5.0, 25.0) - 700.0) < 1e-9, "salvage 3500/5/25");
    v.expect(std::abs(salvage(1000.0, 3.0, 10.0) + salvage(1000.0, 4.0, 10.0) - salvage(1000.0, 7.0, 10.0)) < 1e-9,
             "salvage additivity");
    v.expect(std::abs(salvage(2000.0, 3.0, 10.0) - 2.0 * salvage(1000.0, 3.0, 10.0)) < 1e-9, "salvage scaling");

    DispatchSummary s;
    s.bg_kwh = 40.0;
    s.bg_hours = 60.0;
    s.batt_throughput_kwh = 900.0;
    s.served_kwh = 5119.0;
    std::map<std::string, double> cc;
    for (const auto& comp : component_costs({3.5, 1.0, 32, 0.1}, BatteryBank{}, s, EconInputs{})) {
        cc[comp.name] = comp.capital;
    }
    v.expect(cc["battery"] > cc["pv"] && cc["pv"] > cc["bg"] && cc["bg"] > cc["converter"],
             "capital ordering %.0f/%.0f/%.0f/%.0f", cc["battery"], cc["pv"], cc["bg"], cc["converter"]);

    char buf[128];
    std::snprintf(buf, sizeof buf, "CRF %.5f, %d site ledgers, worst route gap %.4f%%", c, ledgers, 100.0 * worst);
    v.note = buf;
}

void carbon(Verdict& v) {
    const double macro[] = {0.216, 0.000967, 0.000107, 0.0000729, 0.0, 0.00863};
    const double micro[] = {0.558, 0.00249, 0.000276, 0.000188, 0.0, 0.0222};
    for (auto [kind, table] : {std::pair{BsKind::Macro, macro}, std::pair{BsKind::Micro, micro}}) {
        const auto f = calibrated_factors(kind);
        const auto at_ref = emissions(107.0, 0.0, f);
        const auto unit = emissions(1.0, 0.0, f);
        for (std::size_t k = 0; k < std::size(kPollutants); ++k) {
            const double got = at_ref.at(kPollutants[k]);
            v.expect(std::abs(got - table[k]) <= 1e-12 * std::max(1.0, table[k]), "%s %s %.6g vs %.6g",
                     std::string(to_string(kind)).c_str(), kPollutants[k], got, table[k]);
        }
        v.expect(at_ref.at("so2") == 0.0, "SO2 is not zero");
        for (double kwh : {0.0, 12.5, 53.5, 250.0}) {
            const auto e = emissions(kwh, 0.0, f);
            for (const auto& [name, val] : e) {
                v.expect(std::abs(val - kwh * unit.at(name)) <= 1e-12 * std::max(1.0, val), "%s not linear at %.1f",
                         name.c_str(), kwh);
            }
        }
    }
    v.note = "macro and micro tables at 107 kWh";
}

}  // namespace

int main() {
    struct Criterion {
        const char* title;
        std::function<void(Verdict&)> check;
    };
    const Criterion criteria[] = {
        {"energy-sharing table", sharing_table},
        {"inter-BS sharing table", inter_bs_table},
        {"PV/BG worked example", pv_bg_example},
        {"BS power tables", bs_power_tables},
        {"sizing optimum", sizing},
        {"dispatch oracle equivalence", dispatch_oracle},
        {"scheduler properties", scheduler},
        {"radio properties", radio},
        {"cost identities", costs},
        {"carbon", carbon},
    };
    int failed = 0;
    int k = 0;
    for (const auto& c : criteria) {
        ++k;
        Verdict v;
        try {
            c.check(v);
        } catch (const std::exception& e) {
            v.failures.push_back(std::string("exception: ") + e.what());
        }
        const bool ok = v.failures.empty();
        failed += ok ? 0 : 1;
        std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", k, c.title, v.note.c_str());
        for (const auto& f : v.failures) std::printf("         - %s\n", f.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", k - failed, k);
    return failed;
}
