#pragma once

#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "greennet/power_model.hpp"
#include "greennet/renewables.hpp"

namespace greennet {

inline constexpr double kDefaultBusVoltage = 48.0;

// ---------------------------------------------------------------------------
// Line sharing arithmetic

struct ShareResult {
    double e_excess = 0.0;  // kWh offered at the sending end
    double e_loss = 0.0;    // kWh dissipated in the line
    double e_share = 0.0;   // kWh delivered
    double e_save_pct = 0.0;
    double avg_current_a = 0.0;
};

// sqrt(3) x cell radius of conductor between neighbouring sites.
double line_resistance(double cell_radius_km, double ohm_per_km);

// Transfers e_excess_kwh at constant average power over `hours`.
// With current_resolution_a > 0 the average current is rounded to that
// resolution before the I^2 R loss is evaluated (tabulated currents are
// quoted to 0.01 A).
ShareResult share_energy(double e_excess_kwh, double r_ohm, double bus_v, double hours,
                         double current_resolution_a = 0.0);

// 100 x sum(shared) / sum(loads).
double savings_pct(std::span<const double> shared_kwh, std::span<const double> loads_kwh);

// Energy delivered when g kWh is pushed through a line in one hour.
inline double line_delivered_kwh(double sent_kwh, double r_ohm, double bus_v) {
    const double k = 1000.0 * r_ohm / (bus_v * bus_v);
    return sent_kwh - k * sent_kwh * sent_kwh;
}

// ---------------------------------------------------------------------------
// Site model

struct EnergySystemDesign {
    double pv_kw = 0.0;
    double bg_kw = 0.0;
    int batt_units = 8;
    double conv_kw = 0.0;
};

struct SiteConfig {
    std::string id;
    BsKind kind = BsKind::Macro;
    BsPowerParams power = default_power_params(BsKind::Macro);
    TrafficProfile traffic = TrafficProfile::calibrated_default();
    double ac_load_kwh_yr = 0.0;  // lamp load, spread over 18:00-06:00
    PvConfig pv;                   // rated_kw is the design PV size
    double bg_kw = 0.0;
    double bg_annual_cap_kwh = std::numeric_limits<double>::infinity();
    BatteryBank battery;
    double conv_kw = 0.0;
    double conv_eff = 0.95;
    double bus_v = kDefaultBusVoltage;

    EnergySystemDesign design() const { return {pv.rated_kw, bg_kw, battery.n_batt, conv_kw}; }
    void apply(const EnergySystemDesign& d);
    void validate() const;
};

// AC load drawn in a given hour of the year.
double ac_load_hour_kwh(double ac_load_kwh_yr, int hour);

// Hour-by-hour inputs for one site.
struct SiteSeries {
    std::vector<double> pv_kwh;
    std::vector<double> dc_load_kwh;
    std::vector<double> ac_load_kwh;
};

SiteSeries build_series(const SiteConfig& site, int hours = kHoursPerYear);

// ---------------------------------------------------------------------------
// Hourly balance

struct SiteState {
    double soc_kwh = 0.0;
    double e_min_kwh = 0.0;
    double e_max_kwh = 0.0;
    double round_trip_eff = 1.0;

    // cumulative counters (kWh)
    double pv = 0.0;
    double bg = 0.0;
    double bg_hours = 0.0;  // hours with generator output
    double load = 0.0;  // DC-bus demand including converter input
    double served = 0.0;
    double unmet = 0.0;
    double curtailed = 0.0;
    double shareable = 0.0;
    double batt_loss = 0.0;
    double batt_discharge = 0.0;
    double received = 0.0;
    double delivered_out = 0.0;

    static SiteState full(const BatteryBank& bank);
};

struct HourRecord {
    int hour = 0;
    double pv_kwh = 0.0;
    double bg_kwh = 0.0;
    double load_kwh = 0.0;
    double soc_kwh = 0.0;
    double charge_kwh = 0.0;     // drawn from the bus into the battery
    double discharge_kwh = 0.0;  // delivered by the battery, own load plus donation
    double surplus_kwh = 0.0;    // generation left after load and charging
    double shareable_kwh = 0.0;  // surplus above e_ref
    double received_kwh = 0.0;
    double sent_kwh = 0.0;
    double conv_loss_kwh = 0.0;
    double unmet_kwh = 0.0;
    double deficit_kwh = 0.0;    // open after battery, before sharing and BG
};

// PV direct, surplus charges the battery, battery covers the deficit down
// to E_min. Leaves `deficit_kwh` and `surplus_kwh` open for settlement.
HourRecord balance_local(SiteState& state, double pv_kwh, double load_kwh, double e_ref_kwh);

// Applies energy received from neighbours, then the generator, and books
// whatever remains as unmet.
void finish_hour(SiteState& state, HourRecord& rec, double received_kwh, double bg_available_kwh);

// Both stages with nothing received.
HourRecord dispatch_hour(SiteState& state, double pv_kwh, double bg_available_kw,
                         double load_kwh, double e_ref_kwh);

// ---------------------------------------------------------------------------
// Multi-site year

struct ShareLink {
    std::string from_site;
    std::string to_site;
    double resistance_ohm = 0.0;
    double bus_voltage_v = kDefaultBusVoltage;
};

enum class SharingMode {
    Annual,  // settle each donor's yearly shareable surplus at average power
    Hourly,  // move energy hour by hour over the lines
};

struct RunOptions {
    SharingMode mode = SharingMode::Annual;
    int hours = kHoursPerYear;
    double current_resolution_a = 0.0;
    double e_ref_factor = 1.1;        // shareable above this multiple of the load
    double donor_soc_fraction = 0.9;  // share of stored energy a donor may give
    double donor_reserve_frac = 0.1;  // kept above E_min, fraction of capacity
    bool keep_hours = false;
};

struct SiteYearResult {
    std::string id;
    ReliabilityReport reliability;
    SiteState final_state;
    double soc_start_kwh = 0.0;
    double conv_loss_kwh = 0.0;
    double ac_unmet_kwh = 0.0;
    double soc_low_kwh = 0.0;   // lowest SOC seen
    double soc_high_kwh = 0.0;  // highest SOC seen
    bool soc_bounds_ok = true;
    double ledger_residual_kwh = 0.0;
    double shared_out_kwh = 0.0;  // delivered to neighbours (annual settlement)
    double shared_in_kwh = 0.0;   // received from neighbours (annual settlement)
    std::vector<HourRecord> hours;
};

struct LinkYearResult {
    ShareLink link;
    ShareResult share;
};

struct YearResult {
    std::vector<SiteYearResult> sites;
    std::vector<LinkYearResult> links;
    double line_loss_kwh = 0.0;
    double ledger_residual_kwh = 0.0;  // network level
    double savings_pct = 0.0;

    const SiteYearResult& site(const std::string& id) const;
};

// Checks link endpoints and the star rule (small cells only hang off a
// single macro). Throws TopologyError.
void check_topology(const std::vector<SiteConfig>& sites, const std::vector<ShareLink>& links);

YearResult run_year(const std::vector<SiteConfig>& sites, const std::vector<SiteSeries>& series,
                    const std::vector<ShareLink>& links, const RunOptions& options = {});

YearResult run_year(const std::vector<SiteConfig>& sites, const std::vector<ShareLink>& links,
                    const RunOptions& options = {});

void write_hour_ledger_csv(const std::filesystem::path& path, const SiteYearResult& site);

}  // namespace greennet
