#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lteumon {

struct DetectionConfig {
    double alpha_max = 0.5;
    double gamma = 0;
};

void validate(const DetectionConfig& cfg);

double violation_threshold(const DetectionConfig& cfg);

enum class Verdict { NotViolated, Violated };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

// Strict comparison: alpha_hat exactly at the threshold is not a violation.
Verdict decide(double alpha_hat, const DetectionConfig& cfg);

struct TrialRow {
    double alpha_true = 0;
    std::uint64_t seed = 0;
    double alpha_hat = 0;
    Verdict verdict = Verdict::NotViolated;
};

struct RateRow {
    double alpha_true = 0;
    bool is_pd = false;  // Pd when alpha_true exceeds alpha_max, else Pfa
    double rate = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    int n = 0;
};

struct WilsonInterval {
    double lo = 0;
    double hi = 0;
};

// 95% Wilson score interval for a binomial proportion.
WilsonInterval wilson_interval(int successes, int n);

// Groups rows by exact alpha_true value (rows must arrive grouped), recomputes
// verdicts from the stored alpha_hat under cfg, and reports the violation rate
// per group with its confidence interval.
std::vector<RateRow> empirical_pd_pfa(const std::vector<TrialRow>& table,
                                      const DetectionConfig& cfg);

std::string trials_to_csv(const std::vector<TrialRow>& table);
std::vector<TrialRow> trials_from_csv(std::istream& in);
std::string rates_to_csv(const std::vector<RateRow>& rows);

}  // namespace lteumon
