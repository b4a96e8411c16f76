#include "lteumon/estimator.hpp"

#include <sstream>

#include "fmt_util.hpp"

namespace lteumon {

void validate(const EstimatorParams& p) {
    if (p.l_max <= 0) throw std::invalid_argument("estimator: l_max must be positive");
    if (p.l_ph <= 0) throw std::invalid_argument("estimator: l_ph must be positive");
    if (p.l_ph >= p.l_max) throw std::invalid_argument("estimator: l_ph must be below l_max");
}

std::vector<BusyPeriod> select_abnormal(const std::vector<BusyPeriod>& periods,
                                        const EstimatorParams& params) {
    validate(params);
    std::vector<BusyPeriod> out;
    for (const auto& p : periods) {
        if (p.d > params.l_max) out.push_back(p);
    }
    return out;
}

namespace {

// Rounds x/2 to the nearest integer, halves away from zero; x is in doubled
// nanoseconds and non-negative by the time this runs.
TimeNs half_round(TimeNs x) { return (x + 1) / 2; }

}  // namespace

TimeNs estimate_on(const BusyPeriod& p, const EstimatorParams& params) {
    validate(params);
    validate(p);
    TimeNs doubled = 0;
    switch (p.label) {
        case BusyLabel::B:
            doubled = 2 * p.d;
            break;
        case BusyLabel::BTx:
            doubled = 2 * p.d - p.d_prime();
            break;
        case BusyLabel::BRx:
            if (p.d_prime() < params.l_ph) {
                throw DataInconsistencyError(
                    "estimate_on: RX dwell shorter than the preamble at t=" +
                    std::to_string(p.t));
            }
            doubled = 2 * p.d - p.d_prime() - params.l_ph;
            break;
    }
    if (doubled < 0) {
        throw DataInconsistencyError("estimate_on: dwell exceeds busy period at t=" +
                                     std::to_string(p.t));
    }
    return half_round(doubled);
}

DutyCycleEstimate estimate_duty_cycle(const ObserverReport& report,
                                      const EstimatorParams& params) {
    validate(params);
    if (report.window.period <= 0) {
        throw std::invalid_argument("estimate_duty_cycle: window period must be positive");
    }
    DutyCycleEstimate e;
    for (const auto& p : select_abnormal(report.busy_periods, params)) {
        e.per_period.emplace_back(p, estimate_on(p, params));
    }
    e.m = static_cast<int>(e.per_period.size());
    TimeNs total = 0;
    for (const auto& [p, on] : e.per_period) total += on;
    e.alpha_hat = static_cast<double>(total) / static_cast<double>(report.window.period);
    return e;
}

std::string estimate_to_csv(const DutyCycleEstimate& e, TimeNs period) {
    std::ostringstream os;
    os << "alpha_hat,m,T_ns\n";
    os << detail::fmt_g(e.alpha_hat) << ',' << e.m << ',' << period << '\n';
    return os.str();
}

std::string estimate_detail_to_csv(const DutyCycleEstimate& e) {
    std::ostringstream os;
    os << "t_ns,label,d_ns,d_prime_ns,on_hat_ns\n";
    for (const auto& [p, on] : e.per_period)
        os << p.t << ',' << to_string(p.label) << ',' << p.d << ',' << p.d_prime() << ','
           << on << '\n';
    return os.str();
}

}  // namespace lteumon
