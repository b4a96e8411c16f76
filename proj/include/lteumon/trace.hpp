#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lteumon {

// All times are integer nanoseconds; intervals are half-open [start, end).
using TimeNs = std::int64_t;

constexpr TimeNs kMicro = 1'000;
constexpr TimeNs kMilli = 1'000'000;

struct Interval {
    TimeNs start = 0;
    TimeNs end = 0;

    TimeNs length() const { return end - start; }
    bool empty() const { return end <= start; }
    bool contains(TimeNs t) const { return t >= start && t < end; }
    bool operator==(const Interval&) const = default;
};

Interval intersect(const Interval& a, const Interval& b);
bool overlaps(const Interval& a, const Interval& b);

enum class BusyLabel { B, BTx, BRx };

std::string to_string(BusyLabel label);
BusyLabel busy_label_from_string(const std::string& s);

// One maximal busy stretch seen by the observer PHY.  The TX/RX dwell is kept
// as an absolute sub-interval so that boundary splits can apportion d'.
struct BusyPeriod {
    TimeNs t = 0;
    BusyLabel label = BusyLabel::B;
    TimeNs d = 0;
    std::optional<Interval> dwell;  // TX or RX dwell; absent for label B

    TimeNs d_prime() const { return dwell ? dwell->length() : 0; }
    Interval span() const { return {t, t + d}; }
};

// Throws std::invalid_argument on a malformed period.  A labeled period that
// came out of a boundary split may carry a zero-length dwell; unsplit periods
// from the observer always have d' > 0.
void validate(const BusyPeriod& p);

struct CycleWindow {
    TimeNs start = 0;
    TimeNs period = 0;

    TimeNs end() const { return start + period; }
    Interval interval() const { return {start, start + period}; }
};

void validate(const CycleWindow& w);

// Restrict a sorted, non-overlapping busy-period list to one cycle window.
// Straddling periods are split at the window edges; fragments keep the parent
// label and whatever part of the parent dwell falls inside them.
std::vector<BusyPeriod> clip_to_cycle(const std::vector<BusyPeriod>& periods,
                                      const CycleWindow& window);

// CSV uses columns t_ns,label,d_ns,d_prime_ns with labels B|B_TX|B_RX.
// The absolute dwell position is not serialized; parsing re-anchors the dwell
// at the period start, which is where the model places it.
std::string busy_periods_to_csv(const std::vector<BusyPeriod>& periods);
std::vector<BusyPeriod> busy_periods_from_csv(std::istream& in);

}  // namespace lteumon
