#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lteumon/observer.hpp"
#include "lteumon/trace.hpp"

namespace lteumon {

struct DataInconsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EstimatorParams {
    TimeNs l_max = 0;          // abnormality threshold: busy periods with d > l_max
    TimeNs l_ph = 40 * kMicro; // preamble + PHY header length
};

void validate(const EstimatorParams& p);

// Busy periods longer than any single Wi-Fi frame can be, order preserved.
std::vector<BusyPeriod> select_abnormal(const std::vector<BusyPeriod>& periods,
                                        const EstimatorParams& params);

// ON time hidden inside one abnormal busy period.  The leading Wi-Fi overlap
// is unknown, so its conditional mean is subtracted per label:
//   B     -> d
//   B_TX  -> d - d'/2
//   B_RX  -> d - (d' + l_ph)/2
// rounded to the nearest nanosecond.  A negative value means the period data
// is corrupt and raises DataInconsistencyError.
TimeNs estimate_on(const BusyPeriod& p, const EstimatorParams& params);

struct DutyCycleEstimate {
    double alpha_hat = 0;
    int m = 0;  // number of abnormal periods used
    std::vector<std::pair<BusyPeriod, TimeNs>> per_period;
};

DutyCycleEstimate estimate_duty_cycle(const ObserverReport& report, const EstimatorParams& params);

// Columns: alpha_hat,m,T_ns.
std::string estimate_to_csv(const DutyCycleEstimate& e, TimeNs period);

// Columns: t_ns,label,d_ns,d_prime_ns,on_hat_ns.
std::string estimate_detail_to_csv(const DutyCycleEstimate& e);

}  // namespace lteumon
