#include "greennet/runner.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "greennet/csv.hpp"
#include "greennet/errors.hpp"

namespace greennet {

namespace {

class Reporter {
public:
    explicit Reporter(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::filesystem::path file(const std::string& name) {
        auto p = dir_ / name;
        files_.push_back(p);
        return p;
    }

    void line(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
        char buf[512];
        va_list args;
        va_start(args, fmt);
        std::vsnprintf(buf, sizeof buf, fmt, args);
        va_end(args);
        summary_ += buf;
        summary_ += '\n';
    }

    std::vector<std::filesystem::path>& files() { return files_; }
    const std::string& summary() const { return summary_; }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> files_;
    std::string summary_;
};

// Reattaches the scenario name without changing the exception type, so the
// CLI can still tell input errors from runtime failures.
template <typename F>
void with_context(const std::string& ctx, F&& f) {
    try {
        f();
    } catch (const ScenarioError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ValidationError(ctx + ": " + e.what());
    } catch (const TopologyError& e) {
        throw TopologyError(ctx + ": " + e.what());
    } catch (const std::domain_error& e) {
        throw std::domain_error(ctx + ": " + e.what());
    } catch (const std::range_error& e) {
        throw std::range_error(ctx + ": " + e.what());
    } catch (const std::logic_error& e) {
        throw std::logic_error(ctx + ": " + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(ctx + ": " + e.what());
    }
}

std::string safe_name(const std::string& id) {
    std::string out;
    for (char c : id) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

void run_dispatch(const Scenario& sc, Reporter& rep) {
    RunOptions opts = sc.sharing;
    opts.keep_hours = true;
    const YearResult year = run_year(sc.sites, sc.links, opts);

    CsvWriter sites(rep.file("dispatch_sites.csv"),
                    {"site", "kind", "pv_kw", "bg_kw", "batt_units", "conv_kw", "e_bs_kwh", "e_gen_kwh", "pv_kwh",
                     "bg_kwh", "e_ed_kwh", "e_cs", "e_excess_kwh", "conv_loss_kwh", "batt_loss_kwh",
                     "shared_in_kwh", "shared_out_kwh", "soc_low_kwh", "soc_high_kwh", "ledger_residual_kwh"});
    rep.line("== dispatch (%s sharing) ==", opts.mode == SharingMode::Annual ? "annual" : "hourly");
    for (std::size_t k = 0; k < sc.sites.size(); ++k) {
        const SiteConfig& cfg = sc.sites[k];
        const SiteYearResult& r = year.sites[k];
        const ReliabilityReport& rel = r.reliability;
        const auto d = cfg.design();
        sites.cell(cfg.id).cell(to_string(cfg.kind)).cell(d.pv_kw, 3).cell(d.bg_kw, 3).cell(d.batt_units)
            .cell(d.conv_kw, 3).cell(rel.e_bs, 4).cell(rel.e_gen, 4).cell(r.final_state.pv, 4)
            .cell(r.final_state.bg, 4).cell(rel.e_ed, 4).cell(rel.e_cs, 8).cell(rel.e_excess, 4)
            .cell(rel.c_loss, 4).cell(rel.b_loss, 4).cell(r.shared_in_kwh, 4).cell(r.shared_out_kwh, 4)
            .cell(r.soc_low_kwh, 4).cell(r.soc_high_kwh, 4).cell(r.ledger_residual_kwh, 9);
        sites.end_row();
        write_hour_ledger_csv(rep.file("hourly_" + safe_name(cfg.id) + ".csv"), r);
        rep.line("site %s (%s): E_bs %.1f kWh, E_gen %.1f kWh, E_excess %.1f kWh, E_D %.1f kWh, E_CS %.4f",
                 cfg.id.c_str(), std::string(to_string(cfg.kind)).c_str(), rel.e_bs, rel.e_gen, rel.e_excess,
                 rel.e_ed, rel.e_cs);
    }

    if (!year.links.empty()) {
        CsvWriter links(rep.file("dispatch_links.csv"),
                        {"from", "to", "resistance_ohm", "e_excess_kwh", "current_a", "e_loss_kwh", "e_share_kwh",
                         "e_save_pct"});
        for (const auto& l : year.links) {
            links.cell(l.link.from_site).cell(l.link.to_site).cell(l.link.resistance_ohm, 4)
                .cell(l.share.e_excess, 4).cell(l.share.avg_current_a, 4).cell(l.share.e_loss, 4)
                .cell(l.share.e_share, 4).cell(l.share.e_save_pct, 4);
            links.end_row();
            rep.line("link %s -> %s: E_share %.2f kWh, E_loss %.2f kWh, E_save %.2f %%", l.link.from_site.c_str(),
                     l.link.to_site.c_str(), l.share.e_share, l.share.e_loss, l.share.e_save_pct);
        }
        double settled_loss = 0.0;
        for (const auto& l : year.links) settled_loss += l.share.e_loss;
        rep.line("network: line loss %.2f kWh, savings %.2f %%, ledger residual %.2e kWh", settled_loss,
                 year.savings_pct, year.ledger_residual_kwh);
    }

    CsvWriter costs(rep.file("costs.csv"), {"site", "crf", "tac_usd_per_yr", "npc_usd", "npc_dcf_usd",
                                            "salvage_pv_usd", "coe_usd_per_kwh"});
    CsvWriter emis(rep.file("emissions.csv"), {"site", "pollutant", "kg_per_yr"});
    for (std::size_t k = 0; k < sc.sites.size(); ++k) {
        const SiteConfig& cfg = sc.sites[k];
        const DispatchSummary sum = summarize(year.sites[k]);
        if (sum.served_kwh > 0.0) {
            const CostLedger ledger = npc(cfg.design(), cfg.battery, sum, sc.econ);
            costs.cell(cfg.id).cell(ledger.crf, 8).cell(ledger.tac, 4).cell(ledger.npc, 4)
                .cell(ledger.npc_discounted, 4).cell(ledger.salvage, 4).cell(ledger.coe_per_kwh, 6);
            costs.end_row();
            write_cash_flow_csv(rep.file("cash_flow_" + safe_name(cfg.id) + ".csv"), ledger);
            rep.line("site %s: NPC $%.2f, TAC $%.2f/yr, CoE $%.4f/kWh", cfg.id.c_str(), ledger.npc, ledger.tac,
                     ledger.coe_per_kwh);
        }
        if (has_biomass(cfg.kind) && cfg.bg_kw > 0.0) {
            EmissionFactors f = calibrated_factors(cfg.kind);
            f.credit_avoided_burning = sc.credit_avoided_burning;
            const double kg = sum.bg_kwh * feedstock_kg_per_kwh(sc.econ.bg_cv_kcal_kg, sc.econ.bg_efficiency);
            for (const auto& [pollutant, value] : emissions(sum.bg_kwh, kg, f)) {
                emis.cell(cfg.id).cell(pollutant).cell(value, 9);
                emis.end_row();
            }
        }
    }
}

void run_optimize(const Scenario& sc, Reporter& rep, unsigned threads) {
    const SizingSpec spec = sc.sizing.value_or(SizingSpec{});
    CsvWriter best(rep.file("optimize_best.csv"),
                   {"site", "feasible_designs", "evaluated_designs", "pv_kw", "bg_kw", "batt_units", "conv_kw",
                    "npc_usd", "coe_usd_per_kwh"});
    rep.line("== optimize ==");
    for (const SiteConfig& site : sc.sites) {
        if (!spec.sites.empty() && std::find(spec.sites.begin(), spec.sites.end(), site.id) == spec.sites.end()) {
            continue;
        }
        SearchSpace space = spec.space_for(site.kind);
        const OptimizeResult res = optimize(site, space, sc.econ, spec.rules, threads ? threads : spec.threads);
        write_ranking_csv(rep.file("optimize_" + safe_name(site.id) + ".csv"), res);
        best.cell(site.id).cell(static_cast<long long>(res.ranked.size()))
            .cell(static_cast<long long>(res.evaluated.size()));
        if (res.infeasible_space()) {
            best.cell("").cell("").cell("").cell("").cell("").cell("");
            rep.line("site %s: no feasible design among %zu candidates", site.id.c_str(), res.evaluated.size());
        } else {
            const auto& b = res.best();
            best.cell(b.design.pv_kw, 3).cell(b.design.bg_kw, 3).cell(b.design.batt_units)
                .cell(b.design.conv_kw, 3).cell(b.npc, 4).cell(b.coe_per_kwh, 6);
            rep.line("site %s: best PV %.2f kW, BG %.2f kW, %d batteries, converter %.2f kW, NPC $%.2f "
                     "(%zu of %zu feasible)",
                     site.id.c_str(), b.design.pv_kw, b.design.bg_kw, b.design.batt_units, b.design.conv_kw, b.npc,
                     res.ranked.size(), res.evaluated.size());
        }
        best.end_row();
    }
}

void run_radio(const Scenario& sc, Reporter& rep, unsigned threads) {
    if (!sc.radio) throw ScenarioError("radio", "section required for the radio command");
    const RadioSweep& sweep = *sc.radio;
    CsvWriter summary(rep.file("radio_summary.csv"),
                      {"bandwidth_mhz", "resource_blocks", "drops", "users", "mean_r_total_bps", "mean_sinr_db",
                       "p5_user_rate_bps", "p50_user_rate_bps", "p95_user_rate_bps", "mean_eta_ee_bps_per_w",
                       "clamped_links"});
    CsvWriter tiers(rep.file("radio_tiers.csv"),
                    {"bandwidth_mhz", "tier", "mean_rate_bps", "mean_power_w", "mean_eta_ee_bps_per_w"});
    std::optional<CsvWriter> drops;
    if (sweep.write_drops) {
        drops.emplace(rep.file("radio_drops.csv"),
                      std::initializer_list<std::string_view>{"bandwidth_mhz", "drop", "users", "r_total_bps",
                                                              "power_w", "eta_ee_bps_per_w"});
    }
    rep.line("== radio (%d drops, seed %llu) ==", sweep.base.drops,
             static_cast<unsigned long long>(sweep.base.seed));
    for (int bw : sweep.bandwidths_mhz) {
        RadioScenario q = sweep.base;
        q.bandwidth_hz = bw * 1e6;
        const RadioStats st = run_drops(q, threads);
        summary.cell(bw).cell(q.resource_blocks()).cell(st.drops).cell(static_cast<long long>(st.users))
            .cell(st.mean_r_total_bps, 3).cell(st.mean_sinr_db, 6).cell(st.p5_user_rate_bps, 3)
            .cell(st.p50_user_rate_bps, 3).cell(st.p95_user_rate_bps, 3).cell(st.mean_eta_ee, 6)
            .cell(static_cast<long long>(st.clamped));
        summary.end_row();
        for (const auto& [kind, t] : st.tiers) {
            tiers.cell(bw).cell(to_string(kind)).cell(t.mean_rate_bps, 3).cell(t.mean_power_w, 6)
                .cell(t.mean_eta_ee, 6);
            tiers.end_row();
        }
        if (drops) {
            const auto layout = radio_layout(q);
            for (int d = 0; d < q.drops; ++d) {
                const DropResult r = run_drop(q, layout, static_cast<std::uint64_t>(d));
                drops->cell(bw).cell(d).cell(static_cast<long long>(r.rate_bps.size())).cell(r.r_total_bps, 3)
                    .cell(r.power_w, 6).cell(r.eta_ee, 6);
                drops->end_row();
            }
        }
        rep.line("%d MHz: mean R_total %.3f Mb/s, mean SINR %.2f dB, eta_EE %.1f kb/J", bw,
                 st.mean_r_total_bps / 1e6, st.mean_sinr_db, st.mean_eta_ee / 1e3);
    }
}

void nrt_row(CsvWriter& out, double lambda, int n, const char* strategy, const SleepSimReport& r) {
    out.cell(lambda, 6).cell(n).cell(strategy).cell(r.power_saving_pct, 6).cell(r.mean_dl_latency_ms, 6)
        .cell(r.max_dl_latency_ms, 6).cell(r.t_data, 6).cell(r.t_wait, 6).cell(r.t_off, 6)
        .cell(static_cast<long long>(r.dl_packets)).cell(static_cast<long long>(r.ul_packets));
    out.end_row();
}

void run_sched(const Scenario& sc, Reporter& rep) {
    if (!sc.nrt && !sc.iot) throw ScenarioError("sched", "section with nrt or iot required for the sched command");
    if (sc.nrt) {
        const NrtSweep& s = *sc.nrt;
        CsvWriter out(rep.file("sched_nrt.csv"),
                      {"lambda_per_ms", "n_short_cycles", "strategy", "power_saving_pct", "mean_dl_latency_ms",
                       "max_dl_latency_ms", "t_data_ms", "t_wait_ms", "t_off_ms", "dl_packets", "ul_packets"});
        std::vector<int> ns = s.n_short_cycles;
        if (ns.empty()) ns.push_back(0);
        rep.line("== sched: connected-mode DRX ==");
        for (int n : ns) {
            const DrxParams p = n > 0 ? s.params.with_short_cycles(n) : s.params;
            for (double lambda : s.lambdas) {
                TrafficStream t = s.traffic;
                t.lambda = lambda;
                const auto arrivals = mg1_arrivals(t, s.horizon_ms);
                const SleepSimReport tri = simulate_nrt(p, arrivals, s.horizon_ms);
                nrt_row(out, lambda, p.n_short_cycles, p.strategy == DrxStrategy::Triangular ? "triangular"
                                                                                            : "short_then_long",
                        tri);
                std::string line = "N=" + std::to_string(p.n_short_cycles) + " lambda=" + format_number(lambda, 3) +
                                   "/ms: saving " + format_number(tri.power_saving_pct, 2) + " %";
                if (s.compare_baseline) {
                    DrxParams b = p;
                    b.strategy = DrxStrategy::ShortThenLong;
                    const SleepSimReport base = simulate_nrt(b, arrivals, s.horizon_ms);
                    nrt_row(out, lambda, p.n_short_cycles, "baseline", base);
                    line += ", baseline " + format_number(base.power_saving_pct, 2) + " %";
                }
                rep.line("%s", line.c_str());
            }
        }
    }
    if (sc.iot) {
        const IotSweep& s = *sc.iot;
        CsvWriter out(rep.file("sched_iot.csv"),
                      {"t3324_s", "lambda_per_ms", "power_saving_pct", "mean_dl_latency_ms", "t_data_ms",
                       "t_inactive_ms", "t_edrx_ms", "t_psm_ms", "battery_life_h", "tau_updates"});
        rep.line("== sched: eDRX + PSM ==");
        for (double t3324 : s.t3324_s) {
            IotParams p = s.params;
            p.t3324_s = t3324;
            for (double lambda : s.lambdas) {
                TrafficStream t = s.traffic;
                t.lambda = lambda;
                const IotReport r = simulate_iot(p, mg1_arrivals(t, s.horizon_ms), s.horizon_ms);
                out.cell(t3324, 3).cell(lambda, 6).cell(r.sleep.power_saving_pct, 6)
                    .cell(r.sleep.mean_dl_latency_ms, 6).cell(r.sleep.t_data, 6).cell(r.sleep.t_wait, 6)
                    .cell(r.sleep.t_off, 6).cell(r.sleep.t_psm, 6).cell(r.battery_life_h, 4)
                    .cell(static_cast<long long>(r.tau_updates));
                out.end_row();
                rep.line("T3324=%g s lambda=%.3f/ms: saving %.4f %%, battery %.1f h", t3324, lambda,
                         r.sleep.power_saving_pct, r.battery_life_h);
            }
        }
    }
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

Command command_from_string(std::string_view name) {
    if (name == "dispatch") return Command::Dispatch;
    if (name == "optimize") return Command::Optimize;
    if (name == "radio") return Command::Radio;
    if (name == "sched") return Command::Sched;
    if (name == "all") return Command::All;
    throw ValidationError("unknown command '" + std::string(name) + "'");
}

std::string_view to_string(Command command) {
    switch (command) {
        case Command::Dispatch: return "dispatch";
        case Command::Optimize: return "optimize";
        case Command::Radio: return "radio";
        case Command::Sched: return "sched";
        case Command::All: return "all";
    }
    return "?";
}

RunManifest run(const Scenario& sc, Command command, const std::filesystem::path& out_dir, unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_dir);
    Reporter rep(out_dir);
    rep.line("scenario %s (%s)", sc.name.c_str(), hex64(sc.source_hash).c_str());

    const std::string ctx = "scenario '" + sc.name + "'";
    const bool all = command == Command::All;
    if (command == Command::Dispatch || all) with_context(ctx + ", dispatch", [&] { run_dispatch(sc, rep); });
    if (command == Command::Optimize || (all && sc.sizing)) {
        with_context(ctx + ", optimize", [&] { run_optimize(sc, rep, threads); });
    }
    if (command == Command::Radio || (all && sc.radio)) with_context(ctx + ", radio", [&] { run_radio(sc, rep, threads); });
    if (command == Command::Sched || (all && (sc.nrt || sc.iot))) with_context(ctx + ", sched", [&] { run_sched(sc, rep); });

    RunManifest m;
    m.scenario = sc.name;
    m.scenario_hash = sc.source_hash;
    m.command = std::string(to_string(command));
    for (const char* engine : {"power_model", "renewables", "dispatch", "econ", "sizing", "radio", "sleep"}) {
        m.engine_versions[engine] = kEngineVersion;
    }
    m.summary = rep.summary();
    {
        std::ofstream out(rep.file("summary.txt"), std::ios::binary);
        out << m.summary;
    }
    m.files = rep.files();
    m.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    nlohmann::ordered_json j;
    j["scenario"] = m.scenario;
    j["scenario_hash"] = hex64(m.scenario_hash);
    j["command"] = m.command;
    j["engine_versions"] = m.engine_versions;
    if (sc.seed) j["seed"] = *sc.seed;
    j["files"] = nlohmann::json::array();
    for (const auto& f : m.files) j["files"].push_back(f.filename().string());
    j["wall_clock_s"] = m.wall_clock_s;
    const auto manifest_path = out_dir / "manifest.json";
    std::ofstream(manifest_path, std::ios::binary) << j.dump(2) << '\n';
    m.files.push_back(manifest_path);
    return m;
}

}  // namespace greennet
