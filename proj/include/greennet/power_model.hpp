#pragma once

#include <array>
#include <string>
#include <string_view>

namespace greennet {

enum class BsKind { Macro, Micro, Pico, Femto };

std::string_view to_string(BsKind kind);
BsKind bs_kind_from_string(std::string_view name);  // throws ValidationError

inline bool has_biomass(BsKind kind) { return kind == BsKind::Macro || kind == BsKind::Micro; }

// Load-dependent power model coefficients for one base station.
struct BsPowerParams {
    int n_trx = 1;
    double p_max_w = 0.0;    // maximum RF transmit power per TRX
    double p0_w = 0.0;       // idle consumption per TRX
    double delta_p = 0.0;    // load dependency gradient
    double p_sleep_w = 0.0;  // sleep consumption per TRX

    void validate() const;
};

// Component-level consumption at maximum load, used to cross-check the
// aggregate coefficients.
struct BsComponentBreakdown {
    double p_bb_w = 0.0;
    double p_rf_w = 0.0;
    double p_pa_w = 0.0;
    double sigma_dc = 0.0;
    double sigma_ms = 0.0;
    double sigma_cool = 0.0;
    int sectors = 1;
    int antennas = 1;
};

// Normalized traffic demand for each hour of the day.
class TrafficProfile {
public:
    explicit TrafficProfile(const std::array<double, 24>& hourly);

    static TrafficProfile constant(double chi);

    // Diurnal shape scaled so the 10 MHz macro parameter set draws about
    // 4989 kWh/yr of DC energy. See README ("Calibrated defaults").
    static TrafficProfile calibrated_default();

    double at(int hour_of_day) const { return hourly_[static_cast<std::size_t>(hour_of_day % 24)]; }
    const std::array<double, 24>& values() const { return hourly_; }

private:
    std::array<double, 24> hourly_;
};

// Per-TRX power at full load from the component breakdown, including the
// DC-DC, mains-supply and cooling losses. Throws std::domain_error on a
// degenerate loss chain (any fraction >= 1).
double p1_static(const BsComponentBreakdown& breakdown);

// p1_static scaled by sectors and antennas.
double site_static_total(const BsComponentBreakdown& breakdown);

// Instantaneous consumption (W) at load fraction chi. chi == 0 is the sleep
// state. Throws std::range_error when chi is outside [0, 1].
double bs_power(const BsPowerParams& params, double chi);

// Hourly integration of bs_power over a 365-day year plus a flat AC load.
double annual_energy_kwh(const BsPowerParams& params, const TrafficProfile& profile,
                         double ac_load_kwh_yr);

// Default coefficient sets. The 10 MHz sets are the published EARTH-style
// values; 5/15/20 MHz sets scale the load-dependent terms to the annual
// consumption reported for those bandwidths.
BsPowerParams default_power_params(BsKind kind, int bandwidth_mhz = 10);
BsComponentBreakdown default_breakdown(BsKind kind);

// Supported system bandwidths for the built-in parameter sets.
inline constexpr std::array<int, 4> kBandwidthsMhz{5, 10, 15, 20};

}  // namespace greennet
