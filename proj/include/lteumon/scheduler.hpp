#pragma once

#include <stdexcept>
#include <vector>

#include "lteumon/trace.hpp"

namespace lteumon {

struct InfeasibleScheduleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSAT duty-cycle pattern limits.
struct LteuPattern {
    TimeNs period = 0;  // cycle length T
    TimeNs on_max = 0;  // longest continuous ON
    TimeNs on_min = 0;  // shortest continuous ON
    TimeNs gap = 0;     // idle time between consecutive ON chunks
};

void validate(const LteuPattern& p);

struct OnSchedule {
    CycleWindow cycle;
    std::vector<Interval> on_intervals;  // sorted, disjoint, inside the cycle
};

void validate(const OnSchedule& s);
// Additionally checks chunk lengths in [on_min, on_max] and gaps >= gap.
// Not applied to cyclically shifted schedules, whose wrapped chunks may be
// split at the cycle boundary.
void validate_against(const OnSchedule& s, const LteuPattern& p);

double true_duty_cycle(const OnSchedule& s);

// Front-loaded CSAT chunking: round(alpha*T) of ON time as ON_max chunks
// separated by gap; a residual shorter than ON_min is absorbed by splitting
// the last two chunks evenly.  Throws InfeasibleScheduleError naming the
// violated constraint.
OnSchedule generate_schedule(double alpha, const LteuPattern& pattern, TimeNs cycle_start);

// Rotate the schedule by offset within its cycle; a chunk wrapping past the
// cycle end is split in two.
OnSchedule cyclic_shift(const OnSchedule& s, TimeNs offset);

}  // namespace lteumon
