#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <vector>

namespace greennet {

inline constexpr int kHoursPerYear = 8760;

// One value per hour of a 365-day year.
class HourlySeries {
public:
    HourlySeries() : values_(kHoursPerYear, 0.0) {}
    explicit HourlySeries(std::vector<double> values);  // throws ValidationError unless 8760 values

    double operator[](int hour) const { return values_[static_cast<std::size_t>(hour)]; }
    double& operator[](int hour) { return values_[static_cast<std::size_t>(hour)]; }
    std::span<const double> values() const { return values_; }
    double sum() const;

private:
    std::vector<double> values_;
};

// Reads 8760 numeric rows (an optional non-numeric header line is skipped).
HourlySeries read_hourly_csv(const std::filesystem::path& path);

namespace units {
inline constexpr double kKcalPerKwh = 860.0;
inline constexpr double kKgPerTonne = 1000.0;
inline constexpr double kDaysPerYear = 365.0;
}  // namespace units

struct PvConfig {
    double rated_kw = 1.0;
    double derating = 0.9;
    double psh = 4.59;           // peak solar hours per day
    double tracking_gain = 1.0;  // dual-axis tracking adds 43.4% (gain 1.434)
    // Output per kW rated, hour by hour. Shared between sites that use the
    // same resource file.
    std::shared_ptr<const HourlySeries> hourly_profile;

    void validate() const;
};

// Annualized output: rated x PSH x derating x 365, scaled by tracking gain.
double pv_annual_kwh(const PvConfig& cfg);

// Output in one hour of the year. Without an hourly profile a flat
// PSH-wide window centred on solar noon is used every day.
double pv_hour_kwh(const PvConfig& cfg, int hour);

// Synthetic per-kW profile: each day has `psh` hours of unit output centred
// on 12:00 (partial hours at the edges).
HourlySeries flat_psh_profile(double psh);

struct BgConfig {
    double biomass_tons_yr = 0.149;
    double cv_kcal_kg = 3411.33;
    double efficiency = 0.30;
    double t_op = 0.9726;
    double capacity_factor = 0.0245;
};

// Generator output power (kW) from feedstock availability. The unit chain
// keeps the 860 kcal/kWh constant and the t/yr feedstock figure as is.
double bg_power_kw(const BgConfig& cfg);

double bg_annual_kwh(double p_bg_kw, double capacity_factor);

// Feedstock burned per kWh of electrical output.
double feedstock_kg_per_kwh(double cv_kcal_kg, double efficiency);

struct BatteryBank {
    int n_batt = 8;
    double v_nom = 6.0;
    double q_nom_ah = 360.0;
    double soc_min_pct = 30.0;
    double dod = 0.7;
    double kb = 1.0;
    double lifetime_throughput_kwh = 1075.0;  // per unit; vendor-typical default
    double float_life_yr = 10.0;
    double round_trip_eff = 0.85;

    double nominal_kwh() const { return n_batt * v_nom * q_nom_ah / 1000.0; }
    double min_kwh() const { return nominal_kwh() * soc_min_pct / 100.0; }
    double capacity_ah(double bus_v) const { return n_batt * v_nom / bus_v * q_nom_ah; }

    // The bank must be whole series strings of bus_v / v_nom units.
    void validate(double bus_v) const;
};

// Hours the bank carries the load from full down to SOC_min.
double battery_autonomy_h(const BatteryBank& bank, double daily_load_kwh);

// Required bank capacity (Ah) for a load of p_bs_kw sustained over
// backup_days x hours_per_day.
double battery_capacity_required_ah(double p_bs_kw, double backup_days, double hours_per_day,
                                    double dod, double bus_v, double kb);

// min(N x T_batt / T_a, R_batt); an idle bank lasts its float life.
double battery_lifetime_yr(const BatteryBank& bank, double annual_throughput_kwh);

struct ReliabilityReport {
    double e_gen = 0.0;
    double e_bs = 0.0;
    double e_ed = 0.0;      // unmet energy
    double e_cs = 0.0;      // shortage fraction e_ed / e_bs
    double e_excess = 0.0;
    double c_loss = 0.0;
    double b_loss = 0.0;
};

ReliabilityReport reliability(double e_bs, double e_pv, double e_bg, double conv_loss,
                              double batt_loss);

}  // namespace greennet
