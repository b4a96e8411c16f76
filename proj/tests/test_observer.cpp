#include <algorithm>

#include "doctest.h"
#include "lteumon/observer.hpp"

using namespace lteumon;

namespace {

using K = SimEventKind;

const CycleWindow kWin{0, 160 * kMilli};

std::vector<SimEvent> lone_rx_frame(TimeNs start, TimeNs len) {
    return {{start, K::MediumBusyStart},
            {start, K::ObserverRxPreambleDetected, start + len},
            {start + len, K::ObserverRxEnd},
            {start + len, K::MediumIdleStart}};
}

}  // namespace

TEST_CASE("a received frame becomes one RX-labeled period") {
    const auto r = observe(lone_rx_frame(10 * kMilli, 1 * kMilli), kWin);
    REQUIRE(r.busy_periods.size() == 1);
    const auto& p = r.busy_periods[0];
    CHECK(p.t == 10 * kMilli);
    CHECK(p.label == BusyLabel::BRx);
    CHECK(p.d == 1 * kMilli);
    CHECK(p.d_prime() == 1 * kMilli);
    CHECK(p.dwell == Interval{10 * kMilli, 11 * kMilli});
}

TEST_CASE("a busy stretch with no decodable activity stays unlabeled") {
    const std::vector<SimEvent> ev{{0, K::MediumBusyStart}, {20 * kMilli, K::MediumIdleStart}};
    const auto r = observe(ev, kWin);
    REQUIRE(r.busy_periods.size() == 1);
    CHECK(r.busy_periods[0].label == BusyLabel::B);
    CHECK(r.busy_periods[0].d == 20 * kMilli);
    CHECK(r.busy_periods[0].d_prime() == 0);
}

TEST_CASE("an own transmission merged into a longer stretch keeps its dwell") {
    const std::vector<SimEvent> ev{{0, K::MediumBusyStart},
                                   {0, K::ObserverTxStart},
                                   {1 * kMilli, K::ObserverTxEnd},
                                   {20 * kMilli, K::MediumIdleStart}};
    const auto r = observe(ev, kWin);
    REQUIRE(r.busy_periods.size() == 1);
    const auto& p = r.busy_periods[0];
    CHECK(p.label == BusyLabel::BTx);
    CHECK(p.t == 0);
    CHECK(p.d == 20 * kMilli);
    CHECK(p.dwell == Interval{0, 1 * kMilli});
}

TEST_CASE("a transmission may begin from an idle medium") {
    const std::vector<SimEvent> ev{{5 * kMicro, K::ObserverTxStart},
                                   {10 * kMicro, K::ObserverTxEnd},
                                   {15 * kMicro, K::MediumIdleStart}};
    const auto r = observe(ev, kWin);
    REQUIRE(r.busy_periods.size() == 1);
    CHECK(r.busy_periods[0].t == 5 * kMicro);
    CHECK(r.busy_periods[0].d == 10 * kMicro);
    CHECK(r.busy_periods[0].label == BusyLabel::BTx);
}

TEST_CASE("impossible transitions are rejected") {
    auto feed = [&](std::vector<SimEvent> ev) { return observe(ev, kWin); };

    CHECK_THROWS_AS(feed({{5, K::ObserverRxPreambleDetected, 9}}), StateMachineError);
    CHECK_THROWS_AS(feed({{5, K::MediumIdleStart}}), StateMachineError);
    CHECK_THROWS_AS(feed({{0, K::MediumBusyStart}, {1, K::MediumBusyStart}}), StateMachineError);
    CHECK_THROWS_AS(feed({{0, K::MediumBusyStart},
                          {1, K::ObserverRxPreambleDetected, 4},
                          {2, K::ObserverTxStart}}),
                    StateMachineError);
    CHECK_THROWS_AS(feed({{0, K::MediumBusyStart},
                          {1, K::ObserverTxStart},
                          {2, K::ObserverRxPreambleDetected, 4}}),
                    StateMachineError);
    // the machine allows one decode per busy stretch
    CHECK_THROWS_AS(feed({{0, K::MediumBusyStart},
                          {1, K::ObserverRxPreambleDetected, 2},
                          {2, K::ObserverRxEnd},
                          {3, K::ObserverRxPreambleDetected, 4}}),
                    StateMachineError);
    // idle edge while still transmitting
    CHECK_THROWS_AS(feed({{0, K::MediumBusyStart}, {0, K::ObserverTxStart}, {5, K::MediumIdleStart}}),
                    StateMachineError);
    CHECK_THROWS_AS(feed({{10, K::MediumBusyStart}, {5, K::MediumIdleStart}}), StateMachineError);
    CHECK_THROWS_AS(feed({{0, K::MediumBusyStart}}), StateMachineError);
    CHECK_THROWS_WITH_AS(feed({{5, K::ObserverRxPreambleDetected, 9}}),
                         doctest::Contains("IDLE"), StateMachineError);
}

TEST_CASE("straddling periods are clipped to the cycle window") {
    const std::vector<SimEvent> ev{{150 * kMilli, K::MediumBusyStart},
                                   {170 * kMilli, K::MediumIdleStart}};
    const auto r = observe(ev, kWin);
    REQUIRE(r.busy_periods.size() == 1);
    CHECK(r.busy_periods[0].t == 150 * kMilli);
    CHECK(r.busy_periods[0].d == 10 * kMilli);
}

TEST_CASE("simulated cycles replay into consistent reports") {
    const LteuPattern pat{160 * kMilli, 20 * kMilli, 6 * kMilli, 2 * kMilli};
    const auto sched = generate_schedule(0.4, pat, 0);

    WifiParams wifi;
    wifi.n_nodes = 3;
    wifi.l_max = 1100 * kMicro;

    int checked_labels = 0;
    for (std::uint64_t seed : {2u, 4u, 8u, 16u, 32u}) {
        const auto run = run_cycle(wifi, sched, seed);
        const auto r = observe(run.events, kWin);
        REQUIRE(r.busy_periods.size() > 50);

        // the report covers exactly the merged busy time inside the window
        std::vector<Interval> expect;
        for (const auto& iv : busy_union(run.timeline)) {
            const Interval c = intersect(iv, kWin.interval());
            if (!c.empty()) expect.push_back(c);
        }
        REQUIRE(r.busy_periods.size() == expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i)
            CHECK(r.busy_periods[i].span() == expect[i]);

        for (const auto& p : r.busy_periods) {
            const bool interior = p.t > kWin.start && p.t + p.d < kWin.end();
            if (!interior) continue;

            // ground-truth label from the transmission log
            const WifiTx* own = nullptr;
            for (const auto& w : run.timeline.wifi_tx)
                if (w.src == 0 && overlaps(w.span, p.span())) own = &w;
            bool preamble = false;
            Interval rx_dwell{};
            for (const auto& e : run.events)
                if (e.kind == K::ObserverRxPreambleDetected && p.span().contains(e.time)) {
                    preamble = true;
                    rx_dwell = {e.time, e.aux};
                }
            if (own) {
                CHECK(p.label == BusyLabel::BTx);
                CHECK(p.dwell == own->span);
            } else if (preamble) {
                CHECK(p.label == BusyLabel::BRx);
                CHECK(p.dwell == rx_dwell);
            } else {
                CHECK(p.label == BusyLabel::B);
            }
            ++checked_labels;

            // only periods that swallow an ON chunk can outlast a frame
            if (p.d > wifi.l_max) {
                bool has_full_on = false;
                for (const auto& on : sched.on_intervals)
                    has_full_on |= p.t <= on.start && on.end <= p.t + p.d;
                CHECK(has_full_on);
            }
        }
    }
    CHECK(checked_labels > 200);
}

TEST_CASE("report serialization") {
    const auto r = observe(lone_rx_frame(10 * kMilli, 1 * kMilli), kWin);
    CHECK(report_to_csv(r) ==
          "t_ns,label,d_ns,d_prime_ns\n"
          "10000000,B_RX,1000000,1000000\n");
    CHECK(report_sidecar_json(r) == "{\"window_start_ns\": 0, \"period_T_ns\": 160000000}\n");
}
