#pragma once

#include <string>
#include <vector>

#include "lteumon/trace.hpp"

namespace lteumon {

// CDF of the sum of m iid U(0,1) variables, m in [1, 64].
// Throws std::domain_error outside that range.
double irwin_hall_cdf(int m, double y);

// Normal approximation N(m/2, m/12); cross-check helper only.
double irwin_hall_cdf_gaussian(int m, double y);

struct AnalyticalModelParams {
    double alpha = 0;      // true duty cycle
    double gamma = 0;      // detection margin
    double alpha_max = 0;  // permitted duty cycle
    TimeNs t_ns = 0;       // cycle period T
    TimeNs l_max_ns = 0;   // max Wi-Fi frame duration
    TimeNs on_max_ns = 0;  // max continuous ON
};

void validate(const AnalyticalModelParams& p);

// Number of abnormal busy periods the worst-case model predicts:
// m = ceil(alpha * T / ON_max).
int abnormal_period_count(const AnalyticalModelParams& p);

// Probability that the duty-cycle estimate exceeds (1+gamma)*alpha_max.
double exceedance_probability(const AnalyticalModelParams& p);

struct CurvePoint {
    double alpha;
    double probability;
    bool is_pd;  // alpha > alpha_max, otherwise this is a false-alarm point
};

std::vector<CurvePoint> pd_pfa_curve(const std::vector<double>& alphas,
                                     const AnalyticalModelParams& fixed);

// Columns: alpha,probability,role with role Pd|Pfa.
std::string curve_to_csv(const std::vector<CurvePoint>& curve);

}  // namespace lteumon
