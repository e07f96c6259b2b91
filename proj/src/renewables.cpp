#include "greennet/renewables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "greennet/csv.hpp"
#include "greennet/errors.hpp"

namespace greennet {

HourlySeries::HourlySeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() != static_cast<std::size_t>(kHoursPerYear)) {
        throw ValidationError("hourly series must have 8760 values, got " +
                              std::to_string(values_.size()));
    }
}

double HourlySeries::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

HourlySeries read_hourly_csv(const std::filesystem::path& path) {
    auto values = read_numeric_column(path);
    for (double v : values) {
        if (!(v >= 0.0)) throw ValidationError(path.string() + ": negative or NaN value");
    }
    try {
        return HourlySeries(std::move(values));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void PvConfig::validate() const {
    if (!(rated_kw >= 0.0)) throw ValidationError("pv rated_kw must be non-negative");
    if (!(derating > 0.0 && derating <= 1.0)) throw ValidationError("pv derating must be in (0, 1]");
    if (!(psh > 0.0 && psh < 24.0)) throw ValidationError("pv psh must be in (0, 24)");
    if (!(tracking_gain >= 1.0)) throw ValidationError("pv tracking_gain must be >= 1");
}

double pv_annual_kwh(const PvConfig& cfg) {
    return cfg.rated_kw * cfg.psh * cfg.derating * units::kDaysPerYear * cfg.tracking_gain;
}

namespace {

// Overlap of [hour, hour + 1) with a psh-wide window centred on 12:00.
double flat_window_fraction(double psh, int hour_of_day) {
    const double start = 12.0 - psh / 2.0;
    const double end = 12.0 + psh / 2.0;
    const double h = hour_of_day;
    return std::max(0.0, std::min(end, h + 1.0) - std::max(start, h));
}

}  // namespace

HourlySeries flat_psh_profile(double psh) {
    if (!(psh > 0.0 && psh < 24.0)) throw ValidationError("psh must be in (0, 24)");
    HourlySeries series;
    for (int h = 0; h < kHoursPerYear; ++h) series[h] = flat_window_fraction(psh, h % 24);
    return series;
}

double pv_hour_kwh(const PvConfig& cfg, int hour) {
    if (hour < 0 || hour >= kHoursPerYear) throw std::out_of_range("hour outside [0, 8760)");
    double per_kw = 0.0;
    if (cfg.hourly_profile) {
        per_kw = (*cfg.hourly_profile)[hour];
    } else {
        per_kw = flat_window_fraction(cfg.psh, hour % 24);
    }
    return cfg.rated_kw * per_kw * cfg.derating * cfg.tracking_gain;
}

double bg_power_kw(const BgConfig& cfg) {
    if (cfg.t_op == 0.0) throw std::domain_error("bg t_op must be non-zero");
    return cfg.biomass_tons_yr * cfg.cv_kcal_kg * cfg.efficiency * units::kKgPerTonne /
           (units::kDaysPerYear * units::kKcalPerKwh * cfg.t_op);
}

double bg_annual_kwh(double p_bg_kw, double capacity_factor) {
    if (!(capacity_factor >= 0.0 && capacity_factor <= 1.0)) {
        throw ValidationError("capacity factor must be in [0, 1]");
    }
    return p_bg_kw * units::kDaysPerYear * 24.0 * capacity_factor;
}

double feedstock_kg_per_kwh(double cv_kcal_kg, double efficiency) {
    if (!(cv_kcal_kg > 0.0) || !(efficiency > 0.0)) {
        throw std::domain_error("calorific value and efficiency must be positive");
    }
    return units::kKcalPerKwh / (cv_kcal_kg * efficiency);
}

void BatteryBank::validate(double bus_v) const {
    if (n_batt <= 0) throw ValidationError("battery count must be positive");
    if (!(v_nom > 0.0) || !(q_nom_ah > 0.0)) throw ValidationError("battery v_nom/q_nom must be positive");
    const double per_string = bus_v / v_nom;
    const long string_len = std::lround(per_string);
    if (std::abs(per_string - static_cast<double>(string_len)) > 1e-9 || string_len <= 0) {
        throw ValidationError("bus voltage is not a whole multiple of the unit voltage");
    }
    if (n_batt % string_len != 0) {
        throw ValidationError("battery count " + std::to_string(n_batt) + " is not a multiple of " +
                              std::to_string(string_len) + " (units per series string)");
    }
    if (!(soc_min_pct >= 0.0 && soc_min_pct < 100.0)) throw ValidationError("soc_min_pct must be in [0, 100)");
    if (!(dod > 0.0 && dod <= 1.0)) throw ValidationError("dod must be in (0, 1]");
    if (!(kb > 0.0 && kb <= 1.0)) throw ValidationError("kb must be in (0, 1]");
    if (!(round_trip_eff > 0.0 && round_trip_eff <= 1.0)) {
        throw ValidationError("round_trip_eff must be in (0, 1]");
    }
    if (!(lifetime_throughput_kwh > 0.0) || !(float_life_yr > 0.0)) {
        throw ValidationError("battery lifetime parameters must be positive");
    }
}

double battery_autonomy_h(const BatteryBank& bank, double daily_load_kwh) {
    if (!(daily_load_kwh > 0.0)) throw std::domain_error("daily load must be positive");
    const double usable_wh =
        bank.n_batt * bank.v_nom * bank.q_nom_ah * (1.0 - bank.soc_min_pct / 100.0);
    return usable_wh * 24.0 / (1000.0 * daily_load_kwh);
}

double battery_capacity_required_ah(double p_bs_kw, double backup_days, double hours_per_day,
                                    double dod, double bus_v, double kb) {
    const double denom = dod * bus_v * kb;
    if (!(denom > 0.0)) throw std::domain_error("battery sizing denominator is zero");
    return p_bs_kw * 1000.0 * backup_days * hours_per_day / denom;
}

double battery_lifetime_yr(const BatteryBank& bank, double annual_throughput_kwh) {
    if (annual_throughput_kwh < 0.0) throw ValidationError("annual throughput must be non-negative");
    if (annual_throughput_kwh == 0.0) return bank.float_life_yr;
    return std::min(bank.n_batt * bank.lifetime_throughput_kwh / annual_throughput_kwh,
                    bank.float_life_yr);
}

ReliabilityReport reliability(double e_bs, double e_pv, double e_bg, double conv_loss,
                              double batt_loss) {
    for (double e : {e_bs, e_pv, e_bg, conv_loss, batt_loss}) {
        if (e < 0.0) throw ValidationError("energies must be non-negative");
    }
    ReliabilityReport r;
    r.e_bs = e_bs;
    r.e_gen = e_pv + e_bg;
    r.c_loss = conv_loss;
    r.b_loss = batt_loss;
    r.e_ed = std::max(e_bs - r.e_gen, 0.0);
    r.e_cs = e_bs > 0.0 ? r.e_ed / e_bs : 0.0;
    r.e_excess = std::max(r.e_gen - e_bs - conv_loss - batt_loss, 0.0);
    return r;
}

}  // namespace greennet
