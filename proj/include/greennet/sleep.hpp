#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

namespace greennet {

// ---------------------------------------------------------------------------
// Weighted proportional fair metric

// A x Q x T_inac x PF.
double wpf_metric(double pf_metric, double app_priority, double queue_bytes, double inactivity_weight);

// Midpoint of a buffer-status range. Throws ValidationError if min > max.
double queue_estimate(double bsr_min_bytes, double bsr_max_bytes);

// Byte range of an LTE buffer status report index (0..63). The open top
// index is reported as [150000, 150000].
std::pair<double, double> bsr_bounds(int index);

// Index of the user with the largest metric; ties go to the lower index.
std::size_t wpf_select(const std::vector<double>& metrics);

// ---------------------------------------------------------------------------
// Traffic

enum class ServiceDist { Deterministic, Exponential, LogNormal };

struct TrafficStream {
    double lambda = 0.1;        // packets per ms
    double mu = 100.0;          // packets per ms
    double ul_fraction = 0.5;   // share of packets that are uplink
    ServiceDist service = ServiceDist::Deterministic;
    double lognormal_sigma = 0.5;
    std::uint64_t seed = 1;

    void validate() const;  // requires 0 <= lambda < mu
};

struct Arrival {
    double time_ms = 0.0;
    double service_ms = 0.0;
    bool downlink = true;
};

// Poisson arrivals over [0, horizon). Interarrival gaps are unit
// exponentials scaled by 1/lambda, so runs that differ only in lambda share
// their random numbers.
std::vector<Arrival> mg1_arrivals(const TrafficStream& stream, double horizon_ms);

// ---------------------------------------------------------------------------
// Connected-mode DRX

enum class DrxStrategy {
    Triangular,     // rise from tau_s to tau_l by tau_st, fall back, repeat
    ShortThenLong,  // n_short_cycles of tau_s, then tau_l
};

struct DrxParams {
    double tau_s = 20.0;
    double tau_l = 320.0;
    double tau_st = 20.0;
    double tau_i = 10.0;
    int n_short_cycles = 16;
    double drx_total = 0.0;    // ms of DRX before cycles pin at tau_l; 0 = never
    double on_duration = 1.0;  // ms awake after each sleep interval
    double p_data_mw = 500.0;
    double p_wait_mw = 255.0;
    double p_off_mw = 11.0;
    DrxStrategy strategy = DrxStrategy::Triangular;

    void validate() const;

    // N short cycles: the triangle climbs from tau_s to tau_l in N steps.
    DrxParams with_short_cycles(int n) const;
};

// First `count` sleep intervals of an uninterrupted DRX period.
std::vector<double> drx_sleep_sequence(const DrxParams& params, std::size_t count);

// Sleep interval k (0-based) of an uninterrupted DRX period.
double drx_cycle(const DrxParams& params, std::size_t k);

struct SleepSimReport {
    double power_saving_pct = 0.0;
    double mean_dl_latency_ms = 0.0;
    double max_dl_latency_ms = 0.0;
    long dl_packets = 0;
    long ul_packets = 0;
    double horizon_ms = 0.0;
    double t_data = 0.0;
    double t_wait = 0.0;  // inactivity timer (and DRX on-durations)
    double t_off = 0.0;   // DRX or eDRX sleep
    double t_psm = 0.0;
    double mean_power_mw = 0.0;
};

SleepSimReport simulate_nrt(const DrxParams& params, const TrafficStream& traffic, double horizon_ms);
SleepSimReport simulate_nrt(const DrxParams& params, const std::vector<Arrival>& arrivals,
                            double horizon_ms);

// ---------------------------------------------------------------------------
// NB-IoT eDRX + PSM

struct IotParams {
    double t3324_s = 5.0;         // eDRX long cycle
    double edrx_window_s = 60.0;  // eDRX period before PSM
    double t3412_s = 3.0 * 3600.0;
    double tau_i = 10.0;          // ms
    double tau_s = 20.0;          // ms, short eDRX cycle
    int n_short_cycles = 4;
    double paging_ms = 1.0;        // paging occasion at the end of each eDRX cycle
    double tau_update_ms = 100.0;  // periodic tracking-area update burst
    double p_data_mw = 500.0;
    double p_inactive_mw = 255.0;
    double p_edrx_mw = 11.0;
    double p_psm_mw = 0.0108e-3;
    double battery_wh = 5.0;

    void validate() const;
};

struct IotReport {
    SleepSimReport sleep;  // t_wait holds inactivity, t_off holds eDRX
    double battery_life_h = 0.0;
    long tau_updates = 0;
};

IotReport simulate_iot(const IotParams& params, const TrafficStream& traffic, double horizon_ms);
IotReport simulate_iot(const IotParams& params, const std::vector<Arrival>& arrivals, double horizon_ms);

// Saving formula over state residencies (times in any common unit).
double power_saving_pct(double t_total, double t_data, double p_data, double t_wait, double p_wait,
                        double t_off, double p_off, double t_psm = 0.0, double p_psm = 0.0);

}  // namespace greennet
