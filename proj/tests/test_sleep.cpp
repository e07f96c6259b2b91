#include <doctest.h>

#include <cmath>

#include "greennet/errors.hpp"
#include "greennet/sleep.hpp"

using namespace greennet;

TEST_CASE("weighted PF metric") {
    CHECK(wpf_metric(2.0, 3.0, 100.0, 0.5) == doctest::Approx(300.0));
    CHECK(wpf_metric(2.0, 3.0, 0.0, 0.5) == 0.0);
    CHECK_THROWS_AS(wpf_metric(-1.0, 1.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("buffer status ranges") {
    CHECK(bsr_bounds(0) == std::pair<double, double>{0.0, 0.0});
    CHECK(bsr_bounds(1) == std::pair<double, double>{0.0, 10.0});
    CHECK(bsr_bounds(2) == std::pair<double, double>{10.0, 12.0});
    CHECK(bsr_bounds(62) == std::pair<double, double>{128125.0, 150000.0});
    CHECK(bsr_bounds(63) == std::pair<double, double>{150000.0, 150000.0});
    CHECK_THROWS_AS(bsr_bounds(64), ValidationError);
    for (int k = 1; k < 63; ++k) CHECK(bsr_bounds(k).first < bsr_bounds(k).second);
    CHECK(queue_estimate(10.0, 12.0) == 11.0);
    CHECK_THROWS_AS(queue_estimate(12.0, 10.0), ValidationError);
}

TEST_CASE("selection takes the first maximum") {
    CHECK(wpf_select({1.0, 5.0, 5.0, 2.0}) == 1u);
    CHECK(wpf_select({7.0}) == 0u);
    CHECK_THROWS_AS(wpf_select({}), ValidationError);
}

TEST_CASE("poisson arrivals share their random numbers across rates") {
    TrafficStream a;
    a.lambda = 0.1;
    a.seed = 17;
    TrafficStream b = a;
    b.lambda = 0.4;
    const auto slow = mg1_arrivals(a, 1e6);
    const auto fast = mg1_arrivals(b, 1e6);
    CHECK(std::abs(static_cast<double>(slow.size()) - 1e5) < 5 * std::sqrt(1e5));
    REQUIRE(fast.size() > 1000u);
    for (std::size_t k = 0; k < 1000; ++k) {
        CHECK(fast[k].time_ms == doctest::Approx(slow[k].time_ms / 4.0));
        CHECK(fast[k].downlink == slow[k].downlink);
    }
    for (std::size_t k = 1; k < fast.size(); ++k) CHECK(fast[k].time_ms >= fast[k - 1].time_ms);
}

TEST_CASE("service distributions keep the mean") {
    for (ServiceDist d : {ServiceDist::Deterministic, ServiceDist::Exponential, ServiceDist::LogNormal}) {
        TrafficStream t;
        t.lambda = 0.5;
        t.service = d;
        t.seed = 4;
        const auto a = mg1_arrivals(t, 2e5);
        double sum = 0.0;
        for (const auto& x : a) sum += x.service_ms;
        CHECK(sum / static_cast<double>(a.size()) == doctest::Approx(0.01).epsilon(0.03));
    }
}

TEST_CASE("traffic validation") {
    TrafficStream t;
    t.lambda = 100.0;
    CHECK_THROWS_AS(t.validate(), ValidationError);
    t.lambda = 0.0;
    CHECK(mg1_arrivals(t, 1e6).empty());
}

TEST_CASE("triangular DRX cycles rise and fall") {
    DrxParams p;
    p = p.with_short_cycles(3);  // step 100 ms
    CHECK(p.tau_st == doctest::Approx(100.0));
    const auto seq = drx_sleep_sequence(p, 8);
    const std::vector<double> want{20, 120, 220, 320, 220, 120, 20, 120};
    for (std::size_t k = 0; k < want.size(); ++k) CHECK(seq[k] == doctest::Approx(want[k]));

    DrxParams base = p;
    base.strategy = DrxStrategy::ShortThenLong;
    const auto flat = drx_sleep_sequence(base, 5);
    CHECK(flat == std::vector<double>{20, 20, 20, 320, 320});
    CHECK_THROWS_AS(p.with_short_cycles(0), ValidationError);
}

TEST_CASE("DRX parameter validation") {
    DrxParams p;
    p.tau_st = 7.0;  // 300 is not a multiple of 7
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = DrxParams{};
    p.tau_l = 10.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("saving formula") {
    CHECK(power_saving_pct(100.0, 100.0, 500.0, 0.0, 255.0, 0.0, 11.0) == doctest::Approx(0.0));
    CHECK(power_saving_pct(100.0, 0.0, 500.0, 0.0, 255.0, 100.0, 11.0) == doctest::Approx(97.8));
    CHECK(power_saving_pct(100.0, 0.0, 500.0, 0.0, 255.0, 0.0, 11.0, 100.0, 1e-5) > 99.99);
    CHECK_THROWS_AS(power_saving_pct(0.0, 0.0, 500.0, 0.0, 0.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("state residencies add up to the horizon") {
    TrafficStream t;
    t.lambda = 0.2;
    t.seed = 8;
    const auto r = simulate_nrt(DrxParams{}, t, 2e5);
    CHECK(r.t_data + r.t_wait + r.t_off == doctest::Approx(2e5));
    const double mean_p = (500.0 * r.t_data + 255.0 * r.t_wait + 11.0 * r.t_off) / 2e5;
    CHECK(r.power_saving_pct == doctest::Approx(100.0 * (1.0 - mean_p / 500.0)));
    CHECK(r.dl_packets + r.ul_packets > 0);
}

TEST_CASE("connected-mode saving falls as traffic rises") {
    TrafficStream t;
    t.seed = 12;
    double prev = 101.0;
    for (double lambda : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
        t.lambda = lambda;
        const auto r = simulate_nrt(DrxParams{}, t, 1e6);
        CHECK(r.power_saving_pct < prev);
        prev = r.power_saving_pct;
    }
}

TEST_CASE("idle device saving approaches one minus the sleep to data power ratio") {
    const auto r = simulate_nrt(DrxParams{}, std::vector<Arrival>{}, 1e7);
    CHECK(std::abs(r.power_saving_pct - 97.8) < 0.5);
}

TEST_CASE("downlink waits for the end of a sleep interval") {
    // DL packet at 50 ms: awake until 10 ms, then sleep 20 ms, listen 1 ms,
    // sleep 40 ms (ends at 71 ms), serve 0.01 ms.
    DrxParams p = DrxParams{}.with_short_cycles(15);
    std::vector<Arrival> a{{50.0, 0.01, true}};
    const auto r = simulate_nrt(p, a, 1000.0);
    CHECK(r.dl_packets == 1);
    CHECK(r.mean_dl_latency_ms == doctest::Approx(71.01 - 50.0));
}

TEST_CASE("a device without traffic stays in PSM") {
    TrafficStream t;
    t.lambda = 0.0;
    const auto r = simulate_iot(IotParams{}, t, 3.6e7);
    CHECK(r.sleep.power_saving_pct > 99.99);
    CHECK(r.tau_updates == 3);
}

TEST_CASE("longer eDRX cycles save more after a single uplink report") {
    // The eDRX window is fixed, so saving only moves when the number of
    // cycles (and paging occasions) in it changes.
    const std::vector<Arrival> one{{1000.0, 0.01, false}};
    auto saving = [&](double t3324) {
        IotParams p;
        p.t3324_s = t3324;
        return simulate_iot(p, one, 1e7).sleep.power_saving_pct;
    };
    double prev = 0.0;
    for (double t3324 = 5; t3324 <= 35; t3324 += 2) {
        const double s = saving(t3324);
        CHECK(s >= prev);
        prev = s;
    }
    CHECK(saving(5) < saving(15));   // 12 cycles, then 4
    CHECK(saving(15) < saving(35));  // then 2
    CHECK(saving(31) == saving(35));
}

TEST_CASE("IoT parameter validation") {
    IotParams p;
    p.p_edrx_mw = 300.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = IotParams{};
    p.t3324_s = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}
