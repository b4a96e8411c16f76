#include "lteumon/dcf_sim.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lteumon {

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

constexpr TimeNs kFar = std::numeric_limits<TimeNs>::max();

TimeNs draw_len(const WifiParams& p, SplitMix64& rng) {
    if (std::holds_alternative<ConstantLen>(p.len_mode)) return p.l_max;
    const auto& u = std::get<UniformLen>(p.len_mode);
    return rng.uniform(u.lo, u.hi);
}

}  // namespace

void validate(const WifiParams& p) {
    if (p.n_nodes < 0)
        throw std::invalid_argument("WifiParams: n_nodes must be >= 0");
    if (!(p.difs > 0 && p.sifs > 0 && p.slot > 0))
        throw std::invalid_argument("WifiParams: difs/sifs/slot must be > 0");
    if (!(p.sifs < p.difs))
        throw std::invalid_argument("WifiParams: need sifs < difs");
    if (!is_pow2(p.cw_min) || !is_pow2(p.cw_max) || p.cw_min < 2 || p.cw_max < p.cw_min)
        throw std::invalid_argument("WifiParams: cw_min/cw_max must be powers of two with cw_max >= cw_min >= 2");
    if (!(p.l_max > 0))
        throw std::invalid_argument("WifiParams: l_max must be > 0");
    if (!(p.l_ph > 0 && p.l_ph < p.l_max))
        throw std::invalid_argument("WifiParams: need 0 < l_ph < l_max");
    if (!(p.ack >= p.l_ph))
        throw std::invalid_argument("WifiParams: ack must cover at least the preamble (l_ph)");
    if (const auto* u = std::get_if<UniformLen>(&p.len_mode)) {
        if (!(u->lo > p.l_ph && u->lo <= u->hi && u->hi <= p.l_max))
            throw std::invalid_argument("WifiParams: uniform lengths need l_ph < lo <= hi <= l_max");
    }
}

CycleRun run_cycle(const WifiParams& wifi, const OnSchedule& schedule, std::uint64_t seed) {
    validate(wifi);
    validate(schedule);

    CycleRun run;
    run.timeline.lteu_on = schedule;

    const auto& ons = schedule.on_intervals;
    const TimeNs W1 = schedule.cycle.end();

    std::vector<SplitMix64> rng;
    std::vector<detail::DcfNode> node(std::size_t(wifi.n_nodes));
    std::vector<int> contender;
    for (int i = 0; i < wifi.n_nodes; ++i) {
        rng.push_back(SplitMix64(mix64(seed, std::uint64_t(i))));
        if (i > 0 || wifi.observer_has_traffic) contender.push_back(i);
    }
    for (int i : contender) node[std::size_t(i)].reset(wifi, rng[std::size_t(i)]);

    auto& tx = run.timeline.wifi_tx;
    auto& ev = run.events;

    auto covered_by_on = [&](TimeNs t) {
        auto it = std::upper_bound(ons.begin(), ons.end(), t,
                                   [](TimeNs v, const Interval& iv) { return v < iv.start; });
        return it != ons.begin() && std::prev(it)->contains(t);
    };

    auto emit_data_events = [&](int src, TimeNs start, TimeNs end, bool lone) {
        if (src == 0) {
            ev.push_back({start, SimEventKind::ObserverTxStart});
            ev.push_back({end, SimEventKind::ObserverTxEnd});
        } else if (lone && wifi.n_nodes > 0 && src != 0) {
            // single frame on air and the observer is idle: preamble decoded
            ev.push_back({start, SimEventKind::ObserverRxPreambleDetected, end});
            ev.push_back({end, SimEventKind::ObserverRxEnd});
        }
    };

    std::size_t on_i = 0;
    TimeNs t = schedule.cycle.start;
    while (true) {
        while (on_i < ons.size() && ons[on_i].end <= t) ++on_i;
        if (on_i < ons.size() && ons[on_i].start <= t) {
            // LTE-U holds the medium
            t = ons[on_i].end;
            ++on_i;
            continue;
        }
        if (contender.empty()) {
            if (on_i >= ons.size()) break;
            t = ons[on_i].end;
            ++on_i;
            continue;
        }

        const TimeNs s = on_i < ons.size() ? ons[on_i].start : kFar;
        const TimeNs t_difs = t + wifi.difs;

        int b_min = std::numeric_limits<int>::max();
        for (int i : contender) b_min = std::min(b_min, node[std::size_t(i)].backoff);
        const TimeNs t_tx = t_difs + TimeNs(b_min) * wifi.slot;

        if (s <= t_tx) {
            // ON interrupts DIFS or the countdown; only whole idle slots count
            TimeNs k = s > t_difs ? std::min<TimeNs>(b_min, (s - t_difs) / wifi.slot) : 0;
            for (int i : contender) node[std::size_t(i)].backoff -= int(k);
            t = ons[on_i].end;
            ++on_i;
            continue;
        }
        if (t_tx >= W1) break;  // no new transmission starts past the window

        for (int i : contender) node[std::size_t(i)].backoff -= b_min;
        std::vector<int> winners;
        for (int i : contender)
            if (node[std::size_t(i)].backoff == 0) winners.push_back(i);

        if (winners.size() == 1) {
            int w = winners[0];
            auto& wrng = rng[std::size_t(w)];
            TimeNs len = draw_len(wifi, wrng);
            TimeNs end = t_tx + len;
            tx.push_back({{t_tx, end}, TxKind::Data, w});
            emit_data_events(w, t_tx, end, true);

            int recv = -1;
            if (wifi.n_nodes >= 2)
                recv = w == 0 ? int(1 + wrng.below(std::uint64_t(wifi.n_nodes - 1))) : 0;
            node[std::size_t(w)].on_success(wifi, wrng);

            t = end;
            if (recv >= 0) {
                TimeNs a0 = end + wifi.sifs;
                if (!covered_by_on(a0)) {
                    TimeNs a1 = a0 + wifi.ack;
                    tx.push_back({{a0, a1}, TxKind::Ack, recv});
                    if (recv == 0) {
                        ev.push_back({a0, SimEventKind::ObserverTxStart});
                        ev.push_back({a1, SimEventKind::ObserverTxEnd});
                    } else {
                        ev.push_back({a0, SimEventKind::ObserverRxPreambleDetected, a1});
                        ev.push_back({a1, SimEventKind::ObserverRxEnd});
                    }
                    t = a1;
                }
                // else: the ACK slot is inside ON, the exchange is suppressed
            }
        } else {
            TimeNs max_end = t_tx;
            for (int w : winners) {
                auto& wrng = rng[std::size_t(w)];
                TimeNs len = draw_len(wifi, wrng);
                TimeNs end = t_tx + len;
                max_end = std::max(max_end, end);
                tx.push_back({{t_tx, end}, TxKind::Collision, w});
                emit_data_events(w, t_tx, end, false);
                node[std::size_t(w)].on_collision(wifi, wrng);
            }
            t = max_end;
        }
    }

    // medium busy/idle edges from the merged timeline
    for (const auto& iv : busy_union(run.timeline)) {
        ev.push_back({iv.start, SimEventKind::MediumBusyStart});
        ev.push_back({iv.end, SimEventKind::MediumIdleStart});
    }
    std::stable_sort(ev.begin(), ev.end(), [](const SimEvent& a, const SimEvent& b) {
        if (a.time != b.time) return a.time < b.time;
        return int(a.kind) < int(b.kind);
    });
    std::sort(tx.begin(), tx.end(), [](const WifiTx& a, const WifiTx& b) {
        if (a.span.start != b.span.start) return a.span.start < b.span.start;
        return a.src < b.src;
    });
    return run;
}

std::vector<Interval> busy_union(const MediumTimeline& t) {
    std::vector<Interval> all;
    for (const auto& w : t.wifi_tx) all.push_back(w.span);
    for (const auto& iv : t.lteu_on.on_intervals) all.push_back(iv);
    std::sort(all.begin(), all.end(),
              [](const Interval& a, const Interval& b) { return a.start < b.start; });
    std::vector<Interval> merged;
    for (const auto& iv : all) {
        if (iv.empty()) continue;
        if (!merged.empty() && iv.start <= merged.back().end)
            merged.back().end = std::max(merged.back().end, iv.end);
        else
            merged.push_back(iv);
    }
    return merged;
}

std::string to_string(SimEventKind k) {
    switch (k) {
        case SimEventKind::MediumBusyStart: return "medium_busy_start";
        case SimEventKind::ObserverTxStart: return "observer_tx_start";
        case SimEventKind::ObserverRxPreambleDetected: return "observer_rx_preamble";
        case SimEventKind::ObserverTxEnd: return "observer_tx_end";
        case SimEventKind::ObserverRxEnd: return "observer_rx_end";
        case SimEventKind::MediumIdleStart: return "medium_idle_start";
    }
    throw std::logic_error("bad SimEventKind");
}

std::string timeline_to_csv(const MediumTimeline& t) {
    struct Row {
        Interval iv;
        int src;
        const char* kind;
    };
    std::vector<Row> rows;
    for (const auto& w : t.wifi_tx) {
        const char* k = w.kind == TxKind::Data ? "data" : w.kind == TxKind::Ack ? "ack" : "collision";
        rows.push_back({w.span, w.src, k});
    }
    for (const auto& iv : t.lteu_on.on_intervals) rows.push_back({iv, -1, "lteu_on"});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.iv.start != b.iv.start) return a.iv.start < b.iv.start;
        return a.src < b.src;
    });
    std::ostringstream os;
    os << "start_ns,end_ns,source,kind\n";
    for (const auto& r : rows)
        os << r.iv.start << ',' << r.iv.end << ',' << r.src << ',' << r.kind << '\n';
    return os.str();
}

std::string events_to_csv(const std::vector<SimEvent>& ev) {
    std::ostringstream os;
    os << "time_ns,kind,aux_ns\n";
    for (const auto& e : ev)
        os << e.time << ',' << to_string(e.kind) << ',' << e.aux << '\n';
    return os.str();
}

}  // namespace lteumon
