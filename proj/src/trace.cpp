#include "lteumon/trace.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace lteumon {

Interval intersect(const Interval& a, const Interval& b) {
    Interval r{std::max(a.start, b.start), std::min(a.end, b.end)};
    if (r.end < r.start) r.end = r.start;
    return r;
}

bool overlaps(const Interval& a, const Interval& b) {
    return std::max(a.start, b.start) < std::min(a.end, b.end);
}

std::string to_string(BusyLabel label) {
    switch (label) {
        case BusyLabel::B: return "B";
        case BusyLabel::BTx: return "B_TX";
        case BusyLabel::BRx: return "B_RX";
    }
    throw std::logic_error("bad BusyLabel");
}

BusyLabel busy_label_from_string(const std::string& s) {
    if (s == "B") return BusyLabel::B;
    if (s == "B_TX") return BusyLabel::BTx;
    if (s == "B_RX") return BusyLabel::BRx;
    throw std::invalid_argument("unknown busy label: " + s);
}

void validate(const BusyPeriod& p) {
    if (p.d <= 0)
        throw std::invalid_argument("BusyPeriod: d must be > 0");
    if (p.label == BusyLabel::B) {
        if (p.dwell)
            throw std::invalid_argument("BusyPeriod: label B cannot carry a dwell");
        return;
    }
    if (!p.dwell)
        throw std::invalid_argument("BusyPeriod: labeled period is missing its dwell");
    if (p.dwell->end < p.dwell->start || p.dwell->start < p.t || p.dwell->end > p.t + p.d)
        throw std::invalid_argument("BusyPeriod: dwell must lie inside the period span");
}

void validate(const CycleWindow& w) {
    if (w.period <= 0)
        throw std::invalid_argument("CycleWindow: period must be > 0");
}

std::vector<BusyPeriod> clip_to_cycle(const std::vector<BusyPeriod>& periods,
                                      const CycleWindow& window) {
    validate(window);
    TimeNs prev_end = 0;
    bool first = true;
    for (const auto& p : periods) {
        validate(p);
        if (!first && p.t < prev_end)
            throw std::invalid_argument("clip_to_cycle: input periods must be sorted and non-overlapping");
        prev_end = p.t + p.d;
        first = false;
    }

    const Interval win = window.interval();
    std::vector<BusyPeriod> out;
    for (const auto& p : periods) {
        Interval frag = intersect(p.span(), win);
        if (frag.empty()) continue;
        BusyPeriod q;
        q.t = frag.start;
        q.d = frag.length();
        q.label = p.label;
        if (p.dwell) q.dwell = intersect(*p.dwell, frag);
        out.push_back(q);
    }
    return out;
}

std::string busy_periods_to_csv(const std::vector<BusyPeriod>& periods) {
    std::ostringstream os;
    os << "t_ns,label,d_ns,d_prime_ns\n";
    for (const auto& p : periods)
        os << p.t << ',' << to_string(p.label) << ',' << p.d << ',' << p.d_prime() << '\n';
    return os.str();
}

std::vector<BusyPeriod> busy_periods_from_csv(std::istream& in) {
    std::vector<BusyPeriod> out;
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("busy period CSV: missing header");
    if (line != "t_ns,label,d_ns,d_prime_ns")
        throw std::invalid_argument("busy period CSV: unexpected header: " + line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string t_s, label_s, d_s, dp_s;
        if (!std::getline(ls, t_s, ',') || !std::getline(ls, label_s, ',') ||
            !std::getline(ls, d_s, ',') || !std::getline(ls, dp_s))
            throw std::invalid_argument("busy period CSV: malformed row: " + line);
        BusyPeriod p;
        p.t = std::stoll(t_s);
        p.label = busy_label_from_string(label_s);
        p.d = std::stoll(d_s);
        TimeNs dp = std::stoll(dp_s);
        if (p.label != BusyLabel::B) p.dwell = Interval{p.t, p.t + dp};
        validate(p);
        out.push_back(p);
    }
    return out;
}

}  // namespace lteumon
