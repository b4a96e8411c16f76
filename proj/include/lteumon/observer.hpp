#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lteumon/dcf_sim.hpp"
#include "lteumon/trace.hpp"

namespace lteumon {

struct StateMachineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PhyState { Idle, CcaBusy, TxBusy, RxBusy };

struct ObserverReport {
    std::vector<BusyPeriod> busy_periods;  // clipped to the window
    CycleWindow window;
};

// Replay a PHY event feed through the IDLE/CCA_BUSY/TX_BUSY/RX_BUSY machine
// and collect labeled busy periods for one cycle window.  An out-of-order or
// impossible transition raises StateMachineError naming the offending event.
ObserverReport observe(const std::vector<SimEvent>& events, const CycleWindow& window);

std::string report_to_csv(const ObserverReport& r);
std::string report_sidecar_json(const ObserverReport& r);

}  // namespace lteumon
