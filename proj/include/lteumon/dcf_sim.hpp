#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "lteumon/rng.hpp"
#include "lteumon/scheduler.hpp"
#include "lteumon/trace.hpp"

namespace lteumon {

struct ConstantLen {};  // every data frame lasts exactly l_max
struct UniformLen {
    TimeNs lo = 0;
    TimeNs hi = 0;  // inclusive
};
using DataLenMode = std::variant<ConstantLen, UniformLen>;

struct WifiParams {
    int n_nodes = 0;  // AP (node 0, the observer) + clients; 0 disables Wi-Fi
    TimeNs difs = 34 * kMicro;
    TimeNs sifs = 16 * kMicro;
    TimeNs slot = 9 * kMicro;
    int cw_min = 16;
    int cw_max = 1024;
    TimeNs l_max = 0;           // max data frame duration (air time)
    TimeNs l_ph = 40 * kMicro;  // preamble + PHY header
    TimeNs ack = 44 * kMicro;
    DataLenMode len_mode = ConstantLen{};
    bool observer_has_traffic = true;  // does the AP contend with its own queue
};

void validate(const WifiParams& p);

enum class TxKind { Data, Ack, Collision };

struct WifiTx {
    Interval span;
    TxKind kind;
    int src;
};

struct MediumTimeline {
    std::vector<WifiTx> wifi_tx;  // sorted by start; overlaps only within a collision
    OnSchedule lteu_on;
};

// Enumerator order doubles as the tie-break for events sharing a timestamp.
enum class SimEventKind {
    MediumBusyStart,
    ObserverTxStart,
    ObserverRxPreambleDetected,  // aux = predicted payload end
    ObserverTxEnd,
    ObserverRxEnd,
    MediumIdleStart,
};

std::string to_string(SimEventKind k);

struct SimEvent {
    TimeNs time;
    SimEventKind kind;
    TimeNs aux = 0;
};

struct CycleRun {
    MediumTimeline timeline;
    std::vector<SimEvent> events;
};

// Simulate one CSAT cycle of saturated DCF nodes around the given ON
// schedule.  Everything is derived from `seed`; per-node streams are
// independent.  Frames may overhang the cycle end; the observer clips.
CycleRun run_cycle(const WifiParams& wifi, const OnSchedule& schedule, std::uint64_t seed);

// Merged busy intervals of wifi transmissions plus LTE-U ON time.
std::vector<Interval> busy_union(const MediumTimeline& t);

// Columns: start_ns,end_ns,source,kind (source -1 and kind lteu_on for ON time).
std::string timeline_to_csv(const MediumTimeline& t);
// Columns: time_ns,kind,aux_ns.
std::string events_to_csv(const std::vector<SimEvent>& ev);

namespace detail {

struct DcfNode {
    int cw = 0;
    int backoff = 0;

    void reset(const WifiParams& p, SplitMix64& rng) {
        cw = p.cw_min;
        backoff = int(rng.below(std::uint64_t(cw)));
    }
    void on_success(const WifiParams& p, SplitMix64& rng) { reset(p, rng); }
    void on_collision(const WifiParams& p, SplitMix64& rng) {
        cw = std::min(cw * 2, p.cw_max);
        backoff = int(rng.below(std::uint64_t(cw)));
    }
};

}  // namespace detail

}  // namespace lteumon
