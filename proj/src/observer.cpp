#include "lteumon/observer.hpp"

#include <limits>
#include <sstream>

namespace lteumon {

namespace {

[[noreturn]] void bad_event(const SimEvent& e, PhyState st) {
    const char* state = st == PhyState::Idle     ? "IDLE"
                        : st == PhyState::CcaBusy ? "CCA_BUSY"
                        : st == PhyState::TxBusy  ? "TX_BUSY"
                                                  : "RX_BUSY";
    throw StateMachineError("observe: illegal event " + to_string(e.kind) + " at " +
                            std::to_string(e.time) + " ns in state " + state);
}

}  // namespace

ObserverReport observe(const std::vector<SimEvent>& events, const CycleWindow& window) {
    validate(window);

    PhyState st = PhyState::Idle;
    TimeNs open_t = 0;
    bool seen_tx = false, seen_rx = false;
    Interval dwell{};
    TimeNs prev_time = std::numeric_limits<TimeNs>::min();

    std::vector<BusyPeriod> raw;
    auto close_period = [&](TimeNs end) {
        BusyPeriod p;
        p.t = open_t;
        p.d = end - open_t;
        if (seen_tx) {
            p.label = BusyLabel::BTx;
            p.dwell = dwell;
        } else if (seen_rx) {
            p.label = BusyLabel::BRx;
            p.dwell = dwell;
        }
        validate(p);
        raw.push_back(p);
        seen_tx = seen_rx = false;
    };

    for (const auto& e : events) {
        if (e.time < prev_time)
            throw StateMachineError("observe: events not sorted at " + std::to_string(e.time) + " ns");
        prev_time = e.time;
        switch (e.kind) {
            case SimEventKind::MediumBusyStart:
                if (st != PhyState::Idle) bad_event(e, st);
                st = PhyState::CcaBusy;
                open_t = e.time;
                break;
            case SimEventKind::ObserverTxStart:
                if (st == PhyState::Idle) open_t = e.time;  // direct IDLE -> TX
                else if (st != PhyState::CcaBusy) bad_event(e, st);
                if (seen_tx || seen_rx) bad_event(e, st);
                st = PhyState::TxBusy;
                seen_tx = true;
                dwell.start = e.time;
                break;
            case SimEventKind::ObserverRxPreambleDetected:
                if (st != PhyState::CcaBusy || seen_tx || seen_rx) bad_event(e, st);
                st = PhyState::RxBusy;
                seen_rx = true;
                dwell.start = e.time;
                break;
            case SimEventKind::ObserverTxEnd:
                if (st != PhyState::TxBusy) bad_event(e, st);
                st = PhyState::CcaBusy;
                dwell.end = e.time;
                break;
            case SimEventKind::ObserverRxEnd:
                if (st != PhyState::RxBusy) bad_event(e, st);
                st = PhyState::CcaBusy;
                dwell.end = e.time;
                break;
            case SimEventKind::MediumIdleStart:
                if (st != PhyState::CcaBusy) bad_event(e, st);
                st = PhyState::Idle;
                close_period(e.time);
                break;
        }
    }
    if (st != PhyState::Idle)
        throw StateMachineError("observe: event feed ended while the medium was busy");

    ObserverReport r;
    r.window = window;
    r.busy_periods = clip_to_cycle(raw, window);
    return r;
}

std::string report_to_csv(const ObserverReport& r) { return busy_periods_to_csv(r.busy_periods); }

std::string report_sidecar_json(const ObserverReport& r) {
    std::ostringstream os;
    os << "{\"window_start_ns\": " << r.window.start
       << ", \"period_T_ns\": " << r.window.period << "}\n";
    return os.str();
}

}  // namespace lteumon
