#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "greennet/power_model.hpp"

namespace greennet {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(Point a, Point b);

struct RadioSite {
    Point pos;
    BsKind kind = BsKind::Macro;
    double tx_w = 20.0;
    double radius_m = 1000.0;
    int users = 0;             // users dropped uniformly in this site's disc
    bool interferer_only = false;
    BsPowerParams power;       // consumption model for energy efficiency
};

struct RadioScenario {
    double bandwidth_hz = 10e6;
    double carrier_hz = 2e9;
    double rb_hz = 180e3;
    double alpha = 3.574;
    double shadow_sigma_db = 8.0;
    double noise_density_dbm_hz = -174.0;
    double d0_m = 1.0;  // path-loss reference and minimum distance

    // Default two-tier layout, used when `sites` is empty.
    double macro_radius_m = 1000.0;
    double pico_radius_m = 200.0;
    double macro_tx_w = 20.0;
    double pico_tx_w = 0.13;
    int n_picos = 4;
    double pico_offset_frac = 0.5;  // pico distance from the macro, fraction of macro radius
    bool interferer_ring = true;    // six co-channel macros at sqrt(3) R
    int users_macro = 20;
    int users_per_pico = 10;

    std::vector<RadioSite> sites;
    std::vector<Point> fixed_ues;  // replaces random placement when non-empty

    int drops = 1000;
    std::uint64_t seed = 1;

    int resource_blocks() const;  // usable RBs in the system bandwidth
    void validate() const;
};

// LTE RB count for 5/10/15/20 MHz; otherwise floor(0.9 BW / RB).
int lte_resource_blocks(double bandwidth_hz, double rb_hz);

// Sites used by a drop: the explicit list or the default layout.
std::vector<RadioSite> radio_layout(const RadioScenario& sc);

double noise_power_dbm(double bw_hz);

// Log-distance loss with a free-space intercept at d0.
// Distances below d0 are clamped; `clamped` is set when that happens.
double path_loss_db(double d_m, double carrier_hz, double alpha, double d0_m, bool* clamped = nullptr);

// Serving power over interference plus noise, all in mW.
double sinr(double serving_mw, std::span<const double> interferers_mw, double noise_mw);

double shannon_rate(double bw_hz, double sinr_linear);

// Throws std::domain_error when p_bs_w <= 0.
double energy_efficiency(double r_total_bps, double p_bs_w);

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double w_to_dbm(double w) { return 10.0 * std::log10(w * 1000.0); }

struct DropResult {
    std::vector<double> sinr_db;
    std::vector<double> rate_bps;
    std::vector<int> serving;  // index into the layout
    double r_total_bps = 0.0;
    double power_w = 0.0;      // consumption of all non-interferer sites
    double eta_ee = 0.0;
    std::map<BsKind, double> tier_rate_bps;
    std::map<BsKind, double> tier_power_w;
    int clamped = 0;
};

DropResult run_drop(const RadioScenario& sc, const std::vector<RadioSite>& layout, std::uint64_t drop);

struct TierStats {
    double mean_rate_bps = 0.0;
    double mean_power_w = 0.0;
    double mean_eta_ee = 0.0;
};

struct RadioStats {
    int drops = 0;
    long users = 0;
    double mean_r_total_bps = 0.0;
    double mean_sinr_db = 0.0;
    double p5_user_rate_bps = 0.0;
    double p50_user_rate_bps = 0.0;
    double p95_user_rate_bps = 0.0;
    double mean_eta_ee = 0.0;
    std::map<BsKind, TierStats> tiers;
    long clamped = 0;
    bool empty() const { return users == 0; }
};

// Deterministic in the seed; drops may run on several threads.
RadioStats run_drops(const RadioScenario& sc, unsigned threads = 0);

}  // namespace greennet
