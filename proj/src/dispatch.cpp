#include "greennet/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "greennet/csv.hpp"
#include "greennet/errors.hpp"

namespace greennet {

namespace {

constexpr double kSocTol = 1e-9;

void require_nonneg(double v, const char* what) {
    if (!(v >= 0.0)) throw ValidationError(std::string(what) + " must be non-negative");
}

}  // namespace

double line_resistance(double cell_radius_km, double ohm_per_km) {
    require_nonneg(cell_radius_km, "cell radius");
    require_nonneg(ohm_per_km, "line resistivity");
    return std::sqrt(3.0) * cell_radius_km * ohm_per_km;
}

ShareResult share_energy(double e_excess_kwh, double r_ohm, double bus_v, double hours,
                         double current_resolution_a) {
    if (bus_v == 0.0) throw std::domain_error("bus voltage is zero");
    if (!(hours > 0.0)) throw ValidationError("transfer duration must be positive");
    require_nonneg(e_excess_kwh, "excess energy");
    require_nonneg(r_ohm, "line resistance");
    require_nonneg(current_resolution_a, "current resolution");

    ShareResult r;
    r.e_excess = e_excess_kwh;
    double amps = 1000.0 * (e_excess_kwh / hours) / bus_v;
    if (current_resolution_a > 0.0) {
        amps = std::round(amps / current_resolution_a) * current_resolution_a;
    }
    r.avg_current_a = amps;
    r.e_loss = std::min(amps * amps * r_ohm * hours / 1000.0, e_excess_kwh);
    r.e_share = e_excess_kwh - r.e_loss;
    return r;
}

double savings_pct(std::span<const double> shared_kwh, std::span<const double> loads_kwh) {
    const double load = std::accumulate(loads_kwh.begin(), loads_kwh.end(), 0.0);
    if (!(load > 0.0)) throw std::domain_error("total load is zero");
    return 100.0 * std::accumulate(shared_kwh.begin(), shared_kwh.end(), 0.0) / load;
}

void SiteConfig::apply(const EnergySystemDesign& d) {
    pv.rated_kw = d.pv_kw;
    bg_kw = d.bg_kw;
    battery.n_batt = d.batt_units;
    conv_kw = d.conv_kw;
}

void SiteConfig::validate() const {
    if (id.empty()) throw ValidationError("site id must not be empty");
    power.validate();
    pv.validate();
    require_nonneg(ac_load_kwh_yr, "ac load");
    require_nonneg(bg_kw, "bg_kw");
    require_nonneg(bg_annual_cap_kwh, "bg annual cap");
    require_nonneg(conv_kw, "conv_kw");
    if (!(conv_eff > 0.0 && conv_eff <= 1.0)) throw ValidationError("conv_eff must be in (0, 1]");
    if (!(bus_v > 0.0)) throw ValidationError("bus voltage must be positive");
    if (bg_kw > 0.0 && !has_biomass(kind)) {
        throw ValidationError("site '" + id + "': " + std::string(to_string(kind)) +
                              " sites carry no biomass generator");
    }
    battery.validate(bus_v);
}

double ac_load_hour_kwh(double ac_load_kwh_yr, int hour) {
    const int h = hour % 24;
    if (h >= 6 && h < 18) return 0.0;
    return ac_load_kwh_yr / (units::kDaysPerYear * 12.0);
}

SiteSeries build_series(const SiteConfig& site, int hours) {
    if (hours <= 0) throw ValidationError("hours must be positive");
    SiteSeries s;
    s.pv_kwh.resize(static_cast<std::size_t>(hours));
    s.dc_load_kwh.resize(s.pv_kwh.size());
    s.ac_load_kwh.resize(s.pv_kwh.size());
    for (int h = 0; h < hours; ++h) {
        const auto i = static_cast<std::size_t>(h);
        s.pv_kwh[i] = pv_hour_kwh(site.pv, h % kHoursPerYear);
        s.dc_load_kwh[i] = bs_power(site.power, site.traffic.at(h % 24)) / 1000.0;
        s.ac_load_kwh[i] = ac_load_hour_kwh(site.ac_load_kwh_yr, h);
    }
    return s;
}

SiteState SiteState::full(const BatteryBank& bank) {
    SiteState s;
    s.e_max_kwh = bank.nominal_kwh();
    s.e_min_kwh = bank.min_kwh();
    s.soc_kwh = s.e_max_kwh;
    s.round_trip_eff = bank.round_trip_eff;
    return s;
}

HourRecord balance_local(SiteState& state, double pv_kwh, double load_kwh, double e_ref_kwh) {
    require_nonneg(pv_kwh, "pv energy");
    require_nonneg(load_kwh, "load energy");
    require_nonneg(e_ref_kwh, "reference energy");

    HourRecord rec;
    rec.pv_kwh = pv_kwh;
    rec.load_kwh = load_kwh;
    state.pv += pv_kwh;
    state.load += load_kwh;

    const double direct = std::min(pv_kwh, load_kwh);
    double surplus = pv_kwh - direct;
    double deficit = load_kwh - direct;

    if (surplus > 0.0 && state.round_trip_eff > 0.0) {
        const double room = std::max(0.0, state.e_max_kwh - state.soc_kwh);
        const double input = std::min(surplus, room / state.round_trip_eff);
        state.soc_kwh = std::min(state.e_max_kwh, state.soc_kwh + input * state.round_trip_eff);
        state.batt_loss += input * (1.0 - state.round_trip_eff);
        surplus -= input;
        rec.charge_kwh = input;
    }
    if (deficit > 0.0) {
        const double out = std::min(deficit, std::max(0.0, state.soc_kwh - state.e_min_kwh));
        state.soc_kwh -= out;
        state.batt_discharge += out;
        deficit -= out;
        rec.discharge_kwh = out;
    }
    state.served += load_kwh - deficit;

    rec.surplus_kwh = surplus;
    rec.shareable_kwh = std::max(0.0, surplus - std::max(0.0, e_ref_kwh - load_kwh));
    state.shareable += rec.shareable_kwh;
    rec.deficit_kwh = deficit;
    rec.soc_kwh = state.soc_kwh;
    return rec;
}

void finish_hour(SiteState& state, HourRecord& rec, double received_kwh, double bg_available_kwh) {
    require_nonneg(received_kwh, "received energy");
    require_nonneg(bg_available_kwh, "generator energy");
    if (received_kwh > rec.deficit_kwh + kSocTol) {
        throw ValidationError("received energy exceeds the open deficit");
    }
    received_kwh = std::min(received_kwh, rec.deficit_kwh);
    double open = rec.deficit_kwh - received_kwh;
    state.received += received_kwh;
    state.served += received_kwh;
    rec.received_kwh = received_kwh;

    const double bg = std::min(open, bg_available_kwh);
    state.bg += bg;
    if (bg > 0.0) state.bg_hours += 1.0;
    state.served += bg;
    open -= bg;
    rec.bg_kwh = bg;

    state.unmet += open;
    rec.unmet_kwh = open;
    state.curtailed += rec.surplus_kwh;
    rec.soc_kwh = state.soc_kwh;
}

HourRecord dispatch_hour(SiteState& state, double pv_kwh, double bg_available_kw, double load_kwh,
                         double e_ref_kwh) {
    require_nonneg(bg_available_kw, "generator rating");
    HourRecord rec = balance_local(state, pv_kwh, load_kwh, e_ref_kwh);
    finish_hour(state, rec, 0.0, bg_available_kw);
    return rec;
}

const SiteYearResult& YearResult::site(const std::string& id) const {
    for (const auto& s : sites) {
        if (s.id == id) return s;
    }
    throw std::out_of_range("no site '" + id + "' in result");
}

void check_topology(const std::vector<SiteConfig>& sites, const std::vector<ShareLink>& links) {
    std::unordered_map<std::string, BsKind> kinds;
    for (const auto& s : sites) {
        if (!kinds.emplace(s.id, s.kind).second) throw TopologyError("duplicate site id '" + s.id + "'");
    }
    std::unordered_map<std::string, std::string> mother;
    for (const auto& l : links) {
        const auto from = kinds.find(l.from_site);
        const auto to = kinds.find(l.to_site);
        if (from == kinds.end()) throw TopologyError("link references unknown site '" + l.from_site + "'");
        if (to == kinds.end()) throw TopologyError("link references unknown site '" + l.to_site + "'");
        if (l.from_site == l.to_site) throw TopologyError("link from '" + l.from_site + "' to itself");
        if (!(l.resistance_ohm > 0.0)) throw TopologyError("link resistance must be positive");
        if (!(l.bus_voltage_v > 0.0)) throw TopologyError("link voltage must be positive");

        const bool from_macro = from->second == BsKind::Macro;
        const bool to_macro = to->second == BsKind::Macro;
        if (!from_macro && !to_macro) {
            throw TopologyError("small cells '" + l.from_site + "' and '" + l.to_site +
                                "' cannot be linked directly");
        }
        if (from_macro && to_macro) continue;
        const std::string& child = from_macro ? l.to_site : l.from_site;
        const std::string& macro = from_macro ? l.from_site : l.to_site;
        const auto [it, fresh] = mother.emplace(child, macro);
        if (!fresh && it->second != macro) {
            throw TopologyError("site '" + child + "' is linked to two macros");
        }
    }
}

namespace {

enum class LinkClass { MotherToChild = 0, ChildToMother = 1, MacroToMacro = 2 };

struct HourlyLinkState {
    std::size_t index;
    std::size_t from;
    std::size_t to;
    LinkClass cls;
    double k;  // loss coefficient per kWh sent in one hour
};

// Sent energy g that delivers exactly `need`, or +inf when out of reach.
double sent_for(double need, double k) {
    if (k == 0.0) return need;
    const double disc = 1.0 - 4.0 * k * need;
    if (disc < 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * need / (1.0 + std::sqrt(disc));
}

}  // namespace

YearResult run_year(const std::vector<SiteConfig>& sites, const std::vector<SiteSeries>& series,
                    const std::vector<ShareLink>& links, const RunOptions& options) {
    if (sites.size() != series.size()) throw ValidationError("one series per site is required");
    if (options.hours <= 0) throw ValidationError("hours must be positive");
    for (const auto& s : sites) s.validate();
    check_topology(sites, links);
    const auto hours = static_cast<std::size_t>(options.hours);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const auto& sr = series[i];
        if (sr.pv_kwh.size() < hours || sr.dc_load_kwh.size() < hours || sr.ac_load_kwh.size() < hours) {
            throw ValidationError("series for site '" + sites[i].id + "' is shorter than the run");
        }
    }

    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < sites.size(); ++i) index[sites[i].id] = i;

    const std::size_t n = sites.size();
    std::vector<SiteState> state;
    std::vector<SiteYearResult> out(n);
    std::vector<double> bg_left(n);
    for (std::size_t i = 0; i < n; ++i) {
        state.push_back(SiteState::full(sites[i].battery));
        out[i].id = sites[i].id;
        out[i].soc_start_kwh = state[i].soc_kwh;
        out[i].soc_low_kwh = out[i].soc_high_kwh = state[i].soc_kwh;
        bg_left[i] = sites[i].bg_annual_cap_kwh;
    }

    std::vector<HourlyLinkState> hourly_links;
    std::vector<ShareResult> link_totals(links.size());
    if (options.mode == SharingMode::Hourly) {
        for (std::size_t li = 0; li < links.size(); ++li) {
            const auto& l = links[li];
            HourlyLinkState hl{li, index.at(l.from_site), index.at(l.to_site), LinkClass::MacroToMacro,
                               1000.0 * l.resistance_ohm / (l.bus_voltage_v * l.bus_voltage_v)};
            const bool from_macro = sites[hl.from].kind == BsKind::Macro;
            const bool to_macro = sites[hl.to].kind == BsKind::Macro;
            if (from_macro && !to_macro) hl.cls = LinkClass::MotherToChild;
            if (!from_macro && to_macro) hl.cls = LinkClass::ChildToMother;
            hourly_links.push_back(hl);
        }
    }

    std::vector<HourRecord> recs(n);
    std::vector<double> offer_surplus(n), offer_batt(n), open(n), received(n);
    double line_loss = 0.0;

    for (std::size_t h = 0; h < hours; ++h) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto& site = sites[i];
            const double ac = series[i].ac_load_kwh[h];
            const double ac_served = std::min(ac, site.conv_kw);
            const double conv_in = ac_served / site.conv_eff;
            out[i].conv_loss_kwh += conv_in - ac_served;
            out[i].ac_unmet_kwh += ac - ac_served;

            const double load = series[i].dc_load_kwh[h] + conv_in;
            recs[i] = balance_local(state[i], series[i].pv_kwh[h], load, options.e_ref_factor * load);
            recs[i].hour = static_cast<int>(h);
            recs[i].conv_loss_kwh = conv_in - ac_served;
            received[i] = 0.0;
        }

        if (options.mode == SharingMode::Hourly && !hourly_links.empty()) {
            for (std::size_t i = 0; i < n; ++i) {
                const auto& st = state[i];
                const double floor = st.e_min_kwh + options.donor_reserve_frac * st.e_max_kwh;
                offer_surplus[i] = recs[i].shareable_kwh;
                offer_batt[i] = std::max(0.0, std::min(options.donor_soc_fraction * st.soc_kwh,
                                                       st.soc_kwh - floor));
                open[i] = recs[i].deficit_kwh;
            }
            for (auto cls : {LinkClass::MotherToChild, LinkClass::ChildToMother, LinkClass::MacroToMacro}) {
                std::vector<const HourlyLinkState*> pass;
                for (const auto& hl : hourly_links) {
                    if (hl.cls == cls) pass.push_back(&hl);
                }
                std::stable_sort(pass.begin(), pass.end(), [&](const auto* a, const auto* b) {
                    return open[a->to] > open[b->to];
                });
                for (const auto* hl : pass) {
                    const std::size_t d = hl->from;
                    const std::size_t r = hl->to;
                    const double offer = offer_surplus[d] + offer_batt[d];
                    if (open[r] <= 0.0 || offer <= 0.0) continue;
                    double g = std::min(sent_for(open[r], hl->k), offer);
                    if (hl->k > 0.0) g = std::min(g, 0.5 / hl->k);
                    const double delivered = std::min(g - hl->k * g * g, open[r]);
                    if (!(delivered > 0.0)) continue;

                    const double from_surplus = std::min(g, offer_surplus[d]);
                    const double from_batt = g - from_surplus;
                    offer_surplus[d] -= from_surplus;
                    offer_batt[d] -= from_batt;
                    recs[d].surplus_kwh -= from_surplus;
                    recs[d].discharge_kwh += from_batt;
                    recs[d].sent_kwh += g;
                    state[d].soc_kwh -= from_batt;
                    state[d].batt_discharge += from_batt;
                    state[d].delivered_out += g;

                    open[r] -= delivered;
                    received[r] += delivered;
                    line_loss += g - delivered;
                    auto& tot = link_totals[hl->index];
                    tot.e_excess += g;
                    tot.e_share += delivered;
                    tot.e_loss += g - delivered;
                }
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            const double bg_avail = std::min(sites[i].bg_kw, bg_left[i]);
            const double bg_before = state[i].bg;
            finish_hour(state[i], recs[i], received[i], bg_avail);
            bg_left[i] = std::max(0.0, bg_left[i] - (state[i].bg - bg_before));

            const auto& st = state[i];
            out[i].soc_low_kwh = std::min(out[i].soc_low_kwh, st.soc_kwh);
            out[i].soc_high_kwh = std::max(out[i].soc_high_kwh, st.soc_kwh);
            if (st.soc_kwh < st.e_min_kwh - kSocTol || st.soc_kwh > st.e_max_kwh + kSocTol) {
                out[i].soc_bounds_ok = false;
            }
            if (options.keep_hours) out[i].hours.push_back(recs[i]);
        }
    }

    YearResult result;
    double net_in = 0.0;
    double net_out = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& st = state[i];
        auto& o = out[i];
        const double e_bs = std::accumulate(series[i].dc_load_kwh.begin(),
                                            series[i].dc_load_kwh.begin() + static_cast<long>(hours), 0.0) +
                            std::accumulate(series[i].ac_load_kwh.begin(),
                                            series[i].ac_load_kwh.begin() + static_cast<long>(hours), 0.0);
        ReliabilityReport& rel = o.reliability;
        rel.e_bs = e_bs;
        rel.e_gen = st.pv + st.bg;
        rel.e_ed = st.unmet + o.ac_unmet_kwh;
        rel.e_cs = e_bs > 0.0 ? rel.e_ed / e_bs : 0.0;
        rel.e_excess = st.curtailed;
        rel.c_loss = o.conv_loss_kwh;
        rel.b_loss = st.batt_loss;

        const double d_soc = st.soc_kwh - o.soc_start_kwh;
        o.ledger_residual_kwh = st.pv + st.bg + st.received -
                                (st.served + st.curtailed + st.batt_loss + d_soc + st.delivered_out);
        o.final_state = st;
        net_in += st.pv + st.bg;
        net_out += st.served + st.curtailed + st.batt_loss + d_soc;
    }
    result.line_loss_kwh = line_loss;
    result.ledger_residual_kwh = net_in - (net_out + line_loss);

    if (options.mode == SharingMode::Annual) {
        std::vector<int> outdeg(n, 0);
        for (const auto& l : links) ++outdeg[index.at(l.from_site)];
        for (std::size_t li = 0; li < links.size(); ++li) {
            const auto& l = links[li];
            const std::size_t d = index.at(l.from_site);
            const double offered = state[d].shareable / outdeg[d];
            link_totals[li] = share_energy(offered, l.resistance_ohm, l.bus_voltage_v,
                                           static_cast<double>(hours), options.current_resolution_a);
        }
    } else {
        for (std::size_t li = 0; li < links.size(); ++li) {
            auto& t = link_totals[li];
            t.avg_current_a = 1000.0 * t.e_excess / (links[li].bus_voltage_v * static_cast<double>(hours));
        }
    }

    std::vector<double> shared;
    std::vector<double> loads;
    std::vector<bool> counted(n, false);
    for (std::size_t li = 0; li < links.size(); ++li) {
        auto& t = link_totals[li];
        const std::size_t d = index.at(links[li].from_site);
        const std::size_t r = index.at(links[li].to_site);
        out[d].shared_out_kwh += t.e_excess;
        out[r].shared_in_kwh += t.e_share;
        const double load_r = out[r].reliability.e_bs;
        t.e_save_pct = load_r > 0.0 ? 100.0 * t.e_share / load_r : 0.0;
        shared.push_back(t.e_share);
        if (!counted[r]) {
            loads.push_back(load_r);
            counted[r] = true;
        }
        result.links.push_back({links[li], t});
    }
    const double load_sum = std::accumulate(loads.begin(), loads.end(), 0.0);
    result.savings_pct = load_sum > 0.0 ? savings_pct(shared, loads) : 0.0;
    result.sites = std::move(out);
    return result;
}

YearResult run_year(const std::vector<SiteConfig>& sites, const std::vector<ShareLink>& links,
                    const RunOptions& options) {
    std::vector<SiteSeries> series;
    series.reserve(sites.size());
    for (const auto& s : sites) series.push_back(build_series(s, options.hours));
    return run_year(sites, series, links, options);
}

void write_hour_ledger_csv(const std::filesystem::path& path, const SiteYearResult& site) {
    CsvWriter csv(path, {"hour", "pv_kwh", "bg_kwh", "load_kwh", "soc_kwh", "charge_kwh",
                         "discharge_kwh", "shared_in_kwh", "shared_out_kwh", "conv_loss_kwh",
                         "curtailed_kwh", "unmet_kwh"});
    for (const auto& r : site.hours) {
        csv.cell(r.hour)
            .cell(r.pv_kwh)
            .cell(r.bg_kwh)
            .cell(r.load_kwh)
            .cell(r.soc_kwh)
            .cell(r.charge_kwh)
            .cell(r.discharge_kwh)
            .cell(r.received_kwh)
            .cell(r.sent_kwh)
            .cell(r.conv_loss_kwh)
            .cell(r.surplus_kwh)
            .cell(r.unmet_kwh);
        csv.end_row();
    }
}

}  // namespace greennet
