#include "greennet/power_model.hpp"

#include <cmath>
#include <stdexcept>

#include "greennet/errors.hpp"

namespace greennet {

std::string_view to_string(BsKind kind) {
    switch (kind) {
        case BsKind::Macro: return "macro";
        case BsKind::Micro: return "micro";
        case BsKind::Pico: return "pico";
        case BsKind::Femto: return "femto";
    }
    return "unknown";
}

BsKind bs_kind_from_string(std::string_view name) {
    if (name == "macro") return BsKind::Macro;
    if (name == "micro") return BsKind::Micro;
    if (name == "pico") return BsKind::Pico;
    if (name == "femto") return BsKind::Femto;
    throw ValidationError("unknown base-station kind '" + std::string(name) +
                          "' (expected macro, micro, pico or femto)");
}

void BsPowerParams::validate() const {
    if (n_trx <= 0) throw ValidationError("n_trx must be positive");
    if (!(p_max_w > 0.0) || !(p0_w > 0.0) || !(delta_p >= 0.0) || !(p_sleep_w > 0.0)) {
        throw ValidationError("power parameters must be positive");
    }
    if (!(p_sleep_w < p0_w)) throw ValidationError("p_sleep_w must be below p0_w");
}

TrafficProfile::TrafficProfile(const std::array<double, 24>& hourly) : hourly_(hourly) {
    for (double chi : hourly_) {
        if (!(chi >= 0.0 && chi <= 1.0)) {
            throw ValidationError("traffic profile values must lie in [0, 1]");
        }
    }
}

TrafficProfile TrafficProfile::constant(double chi) {
    std::array<double, 24> v{};
    v.fill(chi);
    return TrafficProfile(v);
}

TrafficProfile TrafficProfile::calibrated_default() {
    // Night trough around 04:00, busy hour at 20:00. Sum of values is 4.68.
    return TrafficProfile({0.1001, 0.0734, 0.0534, 0.0434, 0.0401, 0.0467, 0.0734, 0.1202,
                           0.1736, 0.2203, 0.2470, 0.2604, 0.2670, 0.2637, 0.2570, 0.2537,
                           0.2604, 0.2771, 0.3004, 0.3205, 0.3338, 0.3071, 0.2337, 0.1536});
}

double p1_static(const BsComponentBreakdown& b) {
    for (double s : {b.sigma_dc, b.sigma_ms, b.sigma_cool}) {
        if (!(s < 1.0) || s < 0.0) throw std::domain_error("degenerate loss chain");
    }
    const double chain = (1.0 - b.sigma_dc) * (1.0 - b.sigma_ms) * (1.0 - b.sigma_cool);
    return (b.p_bb_w + b.p_rf_w + b.p_pa_w) / chain;
}

double site_static_total(const BsComponentBreakdown& b) {
    return p1_static(b) * b.sectors * b.antennas;
}

double bs_power(const BsPowerParams& p, double chi) {
    if (!(chi >= 0.0 && chi <= 1.0)) throw std::range_error("load fraction outside [0, 1]");
    if (chi == 0.0) return p.n_trx * p.p_sleep_w;
    const double p1 = p.p0_w + p.delta_p * p.p_max_w;
    return p.n_trx * (p1 + p.delta_p * p.p_max_w * (chi - 1.0));
}

double annual_energy_kwh(const BsPowerParams& params, const TrafficProfile& profile,
                         double ac_load_kwh_yr) {
    double wh = 0.0;
    for (int h = 0; h < 8760; ++h) wh += bs_power(params, profile.at(h % 24));
    return wh / 1000.0 + ac_load_kwh_yr;
}

namespace {

// Annual DC demand at 5/15/20 MHz relative to 10 MHz, from the macro
// consumption reported for each bandwidth (total demand minus 130 kWh AC).
double bandwidth_load_scale(int bandwidth_mhz) {
    switch (bandwidth_mhz) {
        case 5: return 3766.0 / 4989.0;
        case 10: return 1.0;
        case 15: return 6304.0 / 4989.0;
        case 20: return 7811.0 / 4989.0;
        default:
            throw ValidationError("no built-in power parameters for " +
                                  std::to_string(bandwidth_mhz) + " MHz");
    }
}

}  // namespace

BsPowerParams default_power_params(BsKind kind, int bandwidth_mhz) {
    BsPowerParams p;
    switch (kind) {
        case BsKind::Macro: p = {6, 20.0, 84.0, 2.8, 56.0}; break;
        case BsKind::Micro: p = {2, 6.3, 56.0, 2.6, 39.0}; break;
        case BsKind::Pico: p = {2, 0.13, 6.8, 4.0, 4.3}; break;
        case BsKind::Femto: p = {2, 0.05, 4.8, 8.0, 2.9}; break;
    }
    const double k = bandwidth_load_scale(bandwidth_mhz);
    // Radiated power is bandwidth independent; every consumption term scales.
    p.p0_w *= k;
    p.p_sleep_w *= k;
    p.delta_p *= k;
    return p;
}

BsComponentBreakdown default_breakdown(BsKind kind) {
    switch (kind) {
        case BsKind::Macro: return {29.6, 12.9, 64.4, 0.075, 0.09, 0.0, 3, 2};
        case BsKind::Micro: return {27.3, 6.5, 27.7, 0.075, 0.09, 0.0, 1, 2};
        case BsKind::Pico: return {3.0, 1.0, 1.9, 0.09, 0.11, 0.0, 1, 2};
        case BsKind::Femto: return {2.5, 0.6, 1.1, 0.09, 0.11, 0.0, 1, 2};
    }
    throw ValidationError("unknown base-station kind");
}

}  // namespace greennet
