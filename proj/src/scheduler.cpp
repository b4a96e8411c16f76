#include "lteumon/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lteumon {

void validate(const LteuPattern& p) {
    if (!(p.on_min > 0 && p.on_min <= p.on_max))
        throw std::invalid_argument("LteuPattern: need 0 < on_min <= on_max");
    if (!(p.on_max < p.period))
        throw std::invalid_argument("LteuPattern: need on_max < period");
    if (!(p.gap > 0))
        throw std::invalid_argument("LteuPattern: need gap > 0");
}

void validate(const OnSchedule& s) {
    validate(s.cycle);
    TimeNs prev_end = s.cycle.start;
    for (const auto& iv : s.on_intervals) {
        if (iv.empty())
            throw std::invalid_argument("OnSchedule: empty ON interval");
        if (iv.start < prev_end)
            throw std::invalid_argument("OnSchedule: ON intervals must be sorted and disjoint");
        if (iv.end > s.cycle.end())
            throw std::invalid_argument("OnSchedule: ON interval leaves the cycle window");
        prev_end = iv.end;
    }
}

void validate_against(const OnSchedule& s, const LteuPattern& p) {
    validate(s);
    validate(p);
    if (s.cycle.period != p.period)
        throw std::invalid_argument("OnSchedule: cycle period does not match the pattern");
    const Interval* prev = nullptr;
    for (const auto& iv : s.on_intervals) {
        if (iv.length() < p.on_min || iv.length() > p.on_max)
            throw std::invalid_argument("OnSchedule: chunk length outside [on_min, on_max]");
        if (prev && iv.start - prev->end < p.gap)
            throw std::invalid_argument("OnSchedule: chunks closer than gap");
        prev = &iv;
    }
}

double true_duty_cycle(const OnSchedule& s) {
    TimeNs total = 0;
    for (const auto& iv : s.on_intervals) total += iv.length();
    return double(total) / double(s.cycle.period);
}

OnSchedule generate_schedule(double alpha, const LteuPattern& pattern, TimeNs cycle_start) {
    validate(pattern);
    if (!(alpha >= 0 && alpha < 1))
        throw std::invalid_argument("generate_schedule: alpha must be in [0, 1)");

    OnSchedule s;
    s.cycle = {cycle_start, pattern.period};

    TimeNs total = llround(alpha * double(pattern.period));
    if (total == 0) return s;

    TimeNs k_full = total / pattern.on_max;
    TimeNs r = total % pattern.on_max;

    std::vector<TimeNs> chunks;
    if (r == 0) {
        chunks.assign(k_full, pattern.on_max);
    } else if (r >= pattern.on_min) {
        chunks.assign(k_full, pattern.on_max);
        chunks.push_back(r);
    } else {
        // residual too short to stand alone: split the last chunk's worth
        // plus the residual into two equal pieces
        if (k_full == 0)
            throw InfeasibleScheduleError(
                "generate_schedule: total ON " + std::to_string(total) +
                " ns is shorter than on_min " + std::to_string(pattern.on_min) + " ns");
        TimeNs pair = pattern.on_max + r;
        TimeNs c1 = pair / 2;
        TimeNs c2 = pair - c1;
        if (c1 < pattern.on_min)
            throw InfeasibleScheduleError(
                "generate_schedule: rebalanced chunk " + std::to_string(c1) +
                " ns falls below on_min " + std::to_string(pattern.on_min) + " ns");
        chunks.assign(k_full - 1, pattern.on_max);
        chunks.push_back(c1);
        chunks.push_back(c2);
    }

    TimeNs span = total + TimeNs(chunks.size() - 1) * pattern.gap;
    if (span > pattern.period)
        throw InfeasibleScheduleError(
            "generate_schedule: ON chunks plus gaps (" + std::to_string(span) +
            " ns) do not fit in period " + std::to_string(pattern.period) + " ns");

    TimeNs at = cycle_start;
    for (TimeNs len : chunks) {
        s.on_intervals.push_back({at, at + len});
        at += len + pattern.gap;
    }
    validate_against(s, pattern);
    return s;
}

OnSchedule cyclic_shift(const OnSchedule& s, TimeNs offset) {
    validate(s);
    const TimeNs T = s.cycle.period;
    offset %= T;
    if (offset < 0) offset += T;

    OnSchedule out;
    out.cycle = s.cycle;
    for (const auto& iv : s.on_intervals) {
        TimeNs start = s.cycle.start + (iv.start - s.cycle.start + offset) % T;
        TimeNs end = start + iv.length();
        if (end <= s.cycle.end()) {
            out.on_intervals.push_back({start, end});
        } else {
            out.on_intervals.push_back({start, s.cycle.end()});
            out.on_intervals.push_back({s.cycle.start, s.cycle.start + (end - s.cycle.end())});
        }
    }
    std::sort(out.on_intervals.begin(), out.on_intervals.end(),
              [](const Interval& a, const Interval& b) { return a.start < b.start; });
    validate(out);
    return out;
}

}  // namespace lteumon
