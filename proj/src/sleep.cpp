#include "greennet/sleep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>

#include "greennet/errors.hpp"

namespace greennet {

double wpf_metric(double pf_metric, double app_priority, double queue_bytes, double inactivity_weight) {
    for (double v : {pf_metric, app_priority, queue_bytes, inactivity_weight}) {
        if (!(v >= 0.0)) throw ValidationError("wpf inputs must be non-negative");
    }
    return app_priority * queue_bytes * inactivity_weight * pf_metric;
}

double queue_estimate(double bsr_min_bytes, double bsr_max_bytes) {
    if (bsr_min_bytes > bsr_max_bytes) throw ValidationError("bsr minimum exceeds maximum");
    return 0.5 * (bsr_min_bytes + bsr_max_bytes);
}

std::pair<double, double> bsr_bounds(int index) {
    // Upper bound (bytes) of each buffer size level, index 0..62.
    static constexpr std::array<double, 63> kUpper{
        0,     10,    12,    14,    17,    19,    22,    26,    31,    36,    42,    49,    57,
        67,    78,    91,    107,   125,   146,   171,   200,   234,   274,   321,   376,   440,
        515,   603,   706,   826,   967,   1132,  1326,  1552,  1817,  2127,  2490,  2915,  3413,
        3995,  4677,  5476,  6411,  7505,  8787,  10287, 12043, 14099, 16507, 19325, 22624, 26487,
        31009, 36304, 42502, 49759, 58255, 68201, 79846, 93479, 109439, 128125, 150000};
    if (index < 0 || index > 63) throw ValidationError("bsr index must be in [0, 63]");
    if (index == 0) return {0.0, 0.0};
    if (index == 63) return {kUpper[62], kUpper[62]};
    const auto k = static_cast<std::size_t>(index);
    return {kUpper[k - 1], kUpper[k]};
}

std::size_t wpf_select(const std::vector<double>& metrics) {
    if (metrics.empty()) throw ValidationError("no users to select from");
    return static_cast<std::size_t>(std::max_element(metrics.begin(), metrics.end()) - metrics.begin());
}

void TrafficStream::validate() const {
    if (!(mu > 0.0)) throw ValidationError("service rate must be positive");
    if (!(lambda >= 0.0)) throw ValidationError("arrival rate must be non-negative");
    if (!(lambda < mu)) throw ValidationError("unstable traffic: lambda must be below mu");
    if (!(ul_fraction >= 0.0 && ul_fraction <= 1.0)) throw ValidationError("ul_fraction must be in [0, 1]");
    if (service == ServiceDist::LogNormal && !(lognormal_sigma > 0.0)) {
        throw ValidationError("lognormal sigma must be positive");
    }
}

std::vector<Arrival> mg1_arrivals(const TrafficStream& stream, double horizon_ms) {
    stream.validate();
    std::vector<Arrival> out;
    if (stream.lambda == 0.0 || !(horizon_ms > 0.0)) return out;

    auto make_rng = [&](std::uint32_t tag) {
        std::seed_seq seq{static_cast<std::uint32_t>(stream.seed),
                          static_cast<std::uint32_t>(stream.seed >> 32), tag};
        return std::mt19937_64(seq);
    };
    auto gap_rng = make_rng(1);
    auto svc_rng = make_rng(2);
    auto dir_rng = make_rng(3);
    std::exponential_distribution<double> unit_exp(1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double mean_svc = 1.0 / stream.mu;
    const double s = stream.lognormal_sigma;
    std::lognormal_distribution<double> logn(std::log(mean_svc) - 0.5 * s * s, s);

    out.reserve(static_cast<std::size_t>(stream.lambda * horizon_ms * 1.1) + 16);
    double t = 0.0;
    while (true) {
        t += unit_exp(gap_rng) / stream.lambda;
        if (t >= horizon_ms) break;
        Arrival a;
        a.time_ms = t;
        switch (stream.service) {
            case ServiceDist::Deterministic: a.service_ms = mean_svc; break;
            case ServiceDist::Exponential: a.service_ms = unit_exp(svc_rng) * mean_svc; break;
            case ServiceDist::LogNormal: a.service_ms = logn(svc_rng); break;
        }
        a.downlink = unit(dir_rng) >= stream.ul_fraction;
        out.push_back(a);
    }
    return out;
}

void DrxParams::validate() const {
    if (!(tau_s > 0.0) || !(tau_l >= tau_s)) throw ValidationError("drx cycles need 0 < tau_s <= tau_l");
    if (!(tau_st > 0.0)) throw ValidationError("drx step must be positive");
    const double steps = (tau_l - tau_s) / tau_st;
    if (std::abs(steps - std::round(steps)) > 1e-9) {
        throw ValidationError("tau_l - tau_s must be a whole number of steps");
    }
    if (!(tau_i >= 0.0) || !(on_duration >= 0.0) || !(drx_total >= 0.0)) {
        throw ValidationError("drx timers must be non-negative");
    }
    if (n_short_cycles < 0) throw ValidationError("short cycle count must be non-negative");
    if (!(p_data_mw > 0.0) || !(p_wait_mw >= 0.0) || !(p_off_mw >= 0.0)) {
        throw ValidationError("state powers must be non-negative and p_data positive");
    }
}

DrxParams DrxParams::with_short_cycles(int n) const {
    if (n < 1) throw ValidationError("short cycle count must be at least 1");
    DrxParams p = *this;
    p.n_short_cycles = n;
    if (tau_l > tau_s) p.tau_st = (tau_l - tau_s) / n;
    return p;
}

double drx_cycle(const DrxParams& p, std::size_t k) {
    if (p.strategy == DrxStrategy::ShortThenLong) {
        return k < static_cast<std::size_t>(p.n_short_cycles) ? p.tau_s : p.tau_l;
    }
    const auto n = static_cast<std::size_t>(std::llround((p.tau_l - p.tau_s) / p.tau_st));
    if (n == 0) return p.tau_s;
    const std::size_t pos = k % (2 * n);
    const std::size_t up = pos <= n ? pos : 2 * n - pos;
    return p.tau_s + p.tau_st * static_cast<double>(up);
}

std::vector<double> drx_sleep_sequence(const DrxParams& params, std::size_t count) {
    params.validate();
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = drx_cycle(params, k);
    return out;
}

double power_saving_pct(double t_total, double t_data, double p_data, double t_wait, double p_wait,
                        double t_off, double p_off, double t_psm, double p_psm) {
    if (!(t_total > 0.0) || !(p_data > 0.0)) throw std::domain_error("empty horizon or zero data power");
    const double used = t_data + (p_wait * t_wait + p_off * t_off + p_psm * t_psm) / p_data;
    return 100.0 * (1.0 - used / t_total);
}

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

// Walks one device through the arrival list. Residency is clipped at the
// horizon so the state times always add up to it.
class Device {
public:
    Device(const std::vector<Arrival>& arrivals, double horizon) : a_(arrivals), horizon_(horizon) {}

    double now() const { return t_; }
    bool done() const { return t_ >= horizon_; }
    double next_time() const { return next_ < a_.size() ? a_[next_].time_ms : kNever; }
    bool next_is_ul() const { return next_ < a_.size() && !a_[next_].downlink; }
    bool pending() const { return !queue_.empty(); }

    void admit() { queue_.push_back(next_++); }

    void spend(double& bucket, double until) {
        bucket += std::min(until, horizon_) - std::min(t_, horizon_);
        t_ = until;
    }

    // Serves everything queued plus whatever arrives meanwhile.
    void serve(SleepSimReport& r) {
        while (!queue_.empty()) {
            const Arrival& p = a_[queue_.front()];
            queue_.pop_front();
            spend(r.t_data, t_ + p.service_ms);
            if (t_ <= horizon_) {
                if (p.downlink) {
                    const double lat = t_ - p.time_ms;
                    ++r.dl_packets;
                    latency_sum_ += lat;
                    r.max_dl_latency_ms = std::max(r.max_dl_latency_ms, lat);
                } else {
                    ++r.ul_packets;
                }
            }
            while (next_time() <= t_) admit();
        }
    }

    // Sleeps until `until`. Downlink arrivals are held; an uplink arrival
    // wakes the device at once. Returns true when woken early.
    bool sleep(double& bucket, double until) {
        while (next_time() < until) {
            spend(bucket, next_time());
            const bool ul = next_is_ul();
            admit();
            if (ul) return true;
        }
        spend(bucket, until);
        return false;
    }

    // Awake and listening until `until`; any arrival ends the wait.
    bool listen(double& bucket, double until) {
        if (next_time() < until) {
            spend(bucket, next_time());
            admit();
            return true;
        }
        spend(bucket, until);
        return false;
    }

    void finish(SleepSimReport& r) const {
        r.horizon_ms = horizon_;
        r.mean_dl_latency_ms = r.dl_packets > 0 ? latency_sum_ / static_cast<double>(r.dl_packets) : 0.0;
    }

private:
    const std::vector<Arrival>& a_;
    double horizon_;
    double t_ = 0.0;
    std::size_t next_ = 0;
    std::deque<std::size_t> queue_;
    double latency_sum_ = 0.0;
};

void check_sorted(const std::vector<Arrival>& arrivals) {
    for (std::size_t k = 0; k < arrivals.size(); ++k) {
        if (!(arrivals[k].time_ms >= 0.0) || !(arrivals[k].service_ms >= 0.0) ||
            (k > 0 && arrivals[k].time_ms < arrivals[k - 1].time_ms)) {
            throw ValidationError("arrivals must be non-negative and time ordered");
        }
    }
}

}  // namespace

SleepSimReport simulate_nrt(const DrxParams& params, const std::vector<Arrival>& arrivals,
                            double horizon_ms) {
    params.validate();
    check_sorted(arrivals);
    if (!(horizon_ms > 0.0)) throw ValidationError("horizon must be positive");

    SleepSimReport r;
    Device dev(arrivals, horizon_ms);
    while (!dev.done()) {
        dev.serve(r);
        if (dev.listen(r.t_wait, dev.now() + params.tau_i)) continue;

        const double drx_start = dev.now();
        for (std::size_t k = 0; !dev.done(); ++k) {
            const bool pinned = params.drx_total > 0.0 && dev.now() - drx_start >= params.drx_total;
            const double cycle = pinned ? params.tau_l : drx_cycle(params, k);
            if (dev.sleep(r.t_off, dev.now() + cycle)) break;
            if (dev.pending()) break;  // paging delivers held downlink data
            if (dev.listen(r.t_wait, dev.now() + params.on_duration)) break;
        }
    }
    dev.finish(r);
    r.power_saving_pct = power_saving_pct(horizon_ms, r.t_data, params.p_data_mw, r.t_wait,
                                          params.p_wait_mw, r.t_off, params.p_off_mw);
    r.mean_power_mw = (params.p_data_mw * r.t_data + params.p_wait_mw * r.t_wait +
                       params.p_off_mw * r.t_off) / horizon_ms;
    return r;
}

SleepSimReport simulate_nrt(const DrxParams& params, const TrafficStream& traffic, double horizon_ms) {
    return simulate_nrt(params, mg1_arrivals(traffic, horizon_ms), horizon_ms);
}

void IotParams::validate() const {
    if (!(t3324_s > 0.0) || !(edrx_window_s > 0.0) || !(t3412_s > 0.0)) {
        throw ValidationError("eDRX and PSM timers must be positive");
    }
    if (!(tau_i >= 0.0) || !(tau_s > 0.0) || !(tau_update_ms >= 0.0) || !(paging_ms >= 0.0)) {
        throw ValidationError("idle timers must be non-negative");
    }
    if (n_short_cycles < 0) throw ValidationError("short cycle count must be non-negative");
    if (!(p_data_mw > p_inactive_mw && p_inactive_mw > p_edrx_mw && p_edrx_mw > p_psm_mw && p_psm_mw >= 0.0)) {
        throw ValidationError("state powers must satisfy data > inactive > edrx > psm >= 0");
    }
    if (!(battery_wh > 0.0)) throw ValidationError("battery capacity must be positive");
}

IotReport simulate_iot(const IotParams& params, const std::vector<Arrival>& arrivals, double horizon_ms) {
    params.validate();
    check_sorted(arrivals);
    if (!(horizon_ms > 0.0)) throw ValidationError("horizon must be positive");

    enum class Phase { Data, Inactive, Edrx, Psm };
    IotReport out;
    SleepSimReport& r = out.sleep;
    Device dev(arrivals, horizon_ms);
    const double long_cycle = params.t3324_s * 1000.0;
    const double window = params.edrx_window_s * 1000.0;
    const double tau_period = params.t3412_s * 1000.0;

    Phase phase = Phase::Psm;
    double tau_due = tau_period;
    while (!dev.done()) {
        switch (phase) {
            case Phase::Data:
                dev.serve(r);
                phase = Phase::Inactive;
                break;
            case Phase::Inactive:
                phase = dev.listen(r.t_wait, dev.now() + params.tau_i) ? Phase::Data : Phase::Edrx;
                break;
            case Phase::Edrx: {
                const double end = dev.now() + window;
                phase = Phase::Psm;
                // Each cycle ends in a paging occasion; held downlink data or
                // a page received there ends the eDRX period.
                auto cycle = [&](double until) {
                    if (dev.sleep(r.t_off, until) || dev.pending() ||
                        dev.listen(r.t_wait, dev.now() + params.paging_ms)) {
                        phase = Phase::Data;
                    }
                };
                for (int j = 0; j < params.n_short_cycles && phase == Phase::Psm && !dev.done(); ++j) {
                    cycle(dev.now() + params.tau_s);
                }
                while (phase == Phase::Psm && dev.now() < end && !dev.done()) {
                    cycle(std::min(dev.now() + long_cycle, end));
                }
                if (phase == Phase::Psm) tau_due = dev.now() + tau_period;
                break;
            }
            case Phase::Psm:
                if (dev.sleep(r.t_psm, tau_due)) {
                    phase = Phase::Data;
                    break;
                }
                if (dev.done()) break;
                // Periodic tracking-area update: a short active burst.
                ++out.tau_updates;
                dev.spend(r.t_data, dev.now() + params.tau_update_ms);
                while (dev.next_time() <= dev.now()) dev.admit();
                if (dev.pending()) {
                    phase = Phase::Data;
                } else {
                    tau_due = dev.now() + tau_period;
                }
                break;
        }
    }
    dev.finish(r);
    r.power_saving_pct = power_saving_pct(horizon_ms, r.t_data, params.p_data_mw, r.t_wait,
                                          params.p_inactive_mw, r.t_off, params.p_edrx_mw, r.t_psm,
                                          params.p_psm_mw);
    r.mean_power_mw = (params.p_data_mw * r.t_data + params.p_inactive_mw * r.t_wait +
                       params.p_edrx_mw * r.t_off + params.p_psm_mw * r.t_psm) / horizon_ms;
    out.battery_life_h = r.mean_power_mw > 0.0 ? params.battery_wh / (r.mean_power_mw / 1000.0)
                                               : std::numeric_limits<double>::infinity();
    return out;
}

IotReport simulate_iot(const IotParams& params, const TrafficStream& traffic, double horizon_ms) {
    return simulate_iot(params, mg1_arrivals(traffic, horizon_ms), horizon_ms);
}

}  // namespace greennet
