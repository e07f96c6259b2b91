#include "greennet/radio.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "greennet/errors.hpp"

namespace greennet {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

int bandwidth_mhz_key(double bandwidth_hz) {
    const double mhz = bandwidth_hz / 1e6;
    for (int bw : kBandwidthsMhz) {
        if (std::abs(mhz - bw) < 1e-9) return bw;
    }
    return 10;
}

Point uniform_in_disc(Point centre, double radius, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = radius * std::sqrt(u(rng));
    const double theta = 2.0 * std::numbers::pi * u(rng);
    return {centre.x + r * std::cos(theta), centre.y + r * std::sin(theta)};
}

double percentile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

int lte_resource_blocks(double bandwidth_hz, double rb_hz) {
    if (!(bandwidth_hz > 0.0) || !(rb_hz > 0.0)) throw ValidationError("bandwidths must be positive");
    const double mhz = bandwidth_hz / 1e6;
    if (rb_hz == 180e3) {
        if (std::abs(mhz - 5.0) < 1e-9) return 25;
        if (std::abs(mhz - 10.0) < 1e-9) return 50;
        if (std::abs(mhz - 15.0) < 1e-9) return 75;
        if (std::abs(mhz - 20.0) < 1e-9) return 100;
    }
    return static_cast<int>(std::floor(0.9 * bandwidth_hz / rb_hz));
}

int RadioScenario::resource_blocks() const { return lte_resource_blocks(bandwidth_hz, rb_hz); }

void RadioScenario::validate() const {
    if (!(bandwidth_hz > 0.0) || !(carrier_hz > 0.0) || !(rb_hz > 0.0)) {
        throw ValidationError("radio bandwidths and carrier must be positive");
    }
    if (resource_blocks() < 1) throw ValidationError("bandwidth holds no resource block");
    if (!(alpha > 2.0)) throw ValidationError("path-loss exponent must exceed 2");
    if (!(shadow_sigma_db >= 0.0)) throw ValidationError("shadowing sigma must be non-negative");
    if (!(d0_m > 0.0)) throw ValidationError("reference distance must be positive");
    if (drops < 0) throw ValidationError("drop count must be non-negative");
    if (users_macro < 0 || users_per_pico < 0 || n_picos < 0) {
        throw ValidationError("user and cell counts must be non-negative");
    }
    if (!(macro_radius_m > 0.0) || !(pico_radius_m > 0.0)) throw ValidationError("cell radii must be positive");
    for (const auto& s : sites) {
        if (!(s.tx_w >= 0.0) || !(s.radius_m > 0.0) || s.users < 0) {
            throw ValidationError("radio site has invalid power, radius or user count");
        }
    }
}

std::vector<RadioSite> radio_layout(const RadioScenario& sc) {
    if (!sc.sites.empty()) return sc.sites;
    const int bw = bandwidth_mhz_key(sc.bandwidth_hz);
    std::vector<RadioSite> out;
    out.push_back({{0.0, 0.0}, BsKind::Macro, sc.macro_tx_w, sc.macro_radius_m, sc.users_macro, false,
                   default_power_params(BsKind::Macro, bw)});
    for (int k = 0; k < sc.n_picos; ++k) {
        const double a = 2.0 * std::numbers::pi * (k + 0.5) / sc.n_picos;
        const double r = sc.pico_offset_frac * sc.macro_radius_m;
        out.push_back({{r * std::cos(a), r * std::sin(a)}, BsKind::Pico, sc.pico_tx_w, sc.pico_radius_m,
                       sc.users_per_pico, false, default_power_params(BsKind::Pico, bw)});
    }
    if (sc.interferer_ring) {
        const double r = std::sqrt(3.0) * sc.macro_radius_m;
        for (int k = 0; k < 6; ++k) {
            const double a = std::numbers::pi / 6.0 + k * std::numbers::pi / 3.0;
            out.push_back({{r * std::cos(a), r * std::sin(a)}, BsKind::Macro, sc.macro_tx_w,
                           sc.macro_radius_m, 0, true, default_power_params(BsKind::Macro, bw)});
        }
    }
    return out;
}

double noise_power_dbm(double bw_hz) {
    if (!(bw_hz > 0.0)) throw ValidationError("noise bandwidth must be positive");
    return -174.0 + 10.0 * std::log10(bw_hz);
}

double path_loss_db(double d_m, double carrier_hz, double alpha, double d0_m, bool* clamped) {
    if (clamped) *clamped = d_m < d0_m;
    const double d = std::max(d_m, d0_m);
    const double intercept = 20.0 * std::log10(4.0 * std::numbers::pi * d0_m * carrier_hz / kSpeedOfLight);
    return intercept + 10.0 * alpha * std::log10(d / d0_m);
}

double sinr(double serving_mw, std::span<const double> interferers_mw, double noise_mw) {
    double denom = noise_mw;
    for (double p : interferers_mw) denom += p;
    if (serving_mw <= 0.0) return 0.0;
    if (!(denom > 0.0)) throw std::domain_error("zero interference and noise");
    return serving_mw / denom;
}

double shannon_rate(double bw_hz, double sinr_linear) {
    if (bw_hz < 0.0 || sinr_linear < 0.0) throw ValidationError("bandwidth and sinr must be non-negative");
    return bw_hz * std::log2(1.0 + sinr_linear);
}

double energy_efficiency(double r_total_bps, double p_bs_w) {
    if (!(p_bs_w > 0.0)) throw std::domain_error("base-station power must be positive");
    return r_total_bps / p_bs_w;
}

DropResult run_drop(const RadioScenario& sc, const std::vector<RadioSite>& layout, std::uint64_t drop) {
    std::seed_seq seq{static_cast<std::uint32_t>(sc.seed), static_cast<std::uint32_t>(sc.seed >> 32),
                      static_cast<std::uint32_t>(drop), static_cast<std::uint32_t>(drop >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> shadow(0.0, sc.shadow_sigma_db);

    std::vector<Point> ues = sc.fixed_ues;
    if (ues.empty()) {
        for (const auto& s : layout) {
            for (int u = 0; u < s.users; ++u) ues.push_back(uniform_in_disc(s.pos, s.radius_m, rng));
        }
    }

    DropResult out;
    const double noise_mw = dbm_to_mw(noise_power_dbm(sc.bandwidth_hz));
    const std::size_t nb = layout.size();
    std::vector<double> rx(nb);
    std::vector<int> load(nb, 0);
    for (const Point& ue : ues) {
        int best = -1;
        for (std::size_t b = 0; b < nb; ++b) {
            bool clamped = false;
            const double pl = path_loss_db(distance(ue, layout[b].pos), sc.carrier_hz, sc.alpha, sc.d0_m, &clamped);
            out.clamped += clamped ? 1 : 0;
            const double x = sc.shadow_sigma_db > 0.0 ? shadow(rng) : 0.0;
            rx[b] = layout[b].tx_w > 0.0 ? dbm_to_mw(w_to_dbm(layout[b].tx_w) - pl + x) : 0.0;
            if (layout[b].interferer_only) continue;
            if (best < 0 || rx[b] > rx[static_cast<std::size_t>(best)]) best = static_cast<int>(b);
        }
        if (best < 0) throw ValidationError("layout has no serving site");
        double interference = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            if (static_cast<int>(b) != best) interference += rx[b];
        }
        const double s = sinr(rx[static_cast<std::size_t>(best)], std::span<const double>(&interference, 1), noise_mw);
        out.sinr_db.push_back(s > 0.0 ? 10.0 * std::log10(s) : -std::numeric_limits<double>::infinity());
        out.serving.push_back(best);
        ++load[static_cast<std::size_t>(best)];
    }

    const double bw = sc.resource_blocks() * sc.rb_hz;
    for (std::size_t u = 0; u < ues.size(); ++u) {
        const auto b = static_cast<std::size_t>(out.serving[u]);
        const double share = bw / load[b];
        const double lin = std::pow(10.0, out.sinr_db[u] / 10.0);
        const double r = shannon_rate(share, lin);
        out.rate_bps.push_back(r);
        out.r_total_bps += r;
        out.tier_rate_bps[layout[b].kind] += r;
    }
    for (std::size_t b = 0; b < nb; ++b) {
        if (layout[b].interferer_only) continue;
        const double p = bs_power(layout[b].power, load[b] > 0 ? 1.0 : 0.0);
        out.power_w += p;
        out.tier_power_w[layout[b].kind] += p;
        out.tier_rate_bps.try_emplace(layout[b].kind, 0.0);
    }
    out.eta_ee = energy_efficiency(out.r_total_bps, out.power_w);
    return out;
}

RadioStats run_drops(const RadioScenario& sc, unsigned threads) {
    sc.validate();
    const auto layout = radio_layout(sc);
    RadioStats stats;
    stats.drops = sc.drops;
    if (sc.drops == 0) return stats;

    std::vector<DropResult> results(static_cast<std::size_t>(sc.drops));
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(sc.drops));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t k = next++; k < results.size() && !failed; k = next++) {
            try {
                results[k] = run_drop(sc, layout, k);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);

    // Reduce in drop order so the sums do not depend on scheduling.
    std::vector<double> rates;
    double sinr_sum = 0.0;
    for (const auto& r : results) {
        stats.users += static_cast<long>(r.rate_bps.size());
        stats.clamped += r.clamped;
        stats.mean_r_total_bps += r.r_total_bps;
        stats.mean_eta_ee += r.eta_ee;
        for (double s : r.sinr_db) sinr_sum += s;
        rates.insert(rates.end(), r.rate_bps.begin(), r.rate_bps.end());
        for (const auto& [kind, rate] : r.tier_rate_bps) {
            auto& t = stats.tiers[kind];
            const double p = r.tier_power_w.at(kind);
            t.mean_rate_bps += rate;
            t.mean_power_w += p;
            t.mean_eta_ee += energy_efficiency(rate, p);
        }
    }
    if (stats.users == 0) return RadioStats{sc.drops, 0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, {}, stats.clamped};

    const double n = sc.drops;
    stats.mean_r_total_bps /= n;
    stats.mean_eta_ee /= n;
    stats.mean_sinr_db = sinr_sum / static_cast<double>(stats.users);
    for (auto& [kind, t] : stats.tiers) {
        t.mean_rate_bps /= n;
        t.mean_power_w /= n;
        t.mean_eta_ee /= n;
    }
    stats.p5_user_rate_bps = percentile(rates, 0.05);
    stats.p50_user_rate_bps = percentile(rates, 0.50);
    stats.p95_user_rate_bps = percentile(rates, 0.95);
    return stats;
}

}  // namespace greennet
