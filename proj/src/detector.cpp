#include "lteumon/detector.hpp"

#include <cmath>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fmt_util.hpp"

namespace lteumon {

void validate(const DetectionConfig& cfg) {
    if (!(cfg.alpha_max > 0 && cfg.alpha_max < 1))
        throw std::invalid_argument("DetectionConfig: alpha_max must lie in (0,1)");
    if (!(cfg.gamma >= 0))
        throw std::invalid_argument("DetectionConfig: gamma must be non-negative");
    if (!((1 + cfg.gamma) * cfg.alpha_max < 1))
        throw std::invalid_argument("DetectionConfig: (1+gamma)*alpha_max must stay below 1");
}

double violation_threshold(const DetectionConfig& cfg) {
    return (1 + cfg.gamma) * cfg.alpha_max;
}

std::string to_string(Verdict v) {
    return v == Verdict::Violated ? "Violated" : "NotViolated";
}

Verdict verdict_from_string(const std::string& s) {
    if (s == "Violated") return Verdict::Violated;
    if (s == "NotViolated") return Verdict::NotViolated;
    throw std::invalid_argument("unknown verdict: " + s);
}

Verdict decide(double alpha_hat, const DetectionConfig& cfg) {
    validate(cfg);
    if (!(alpha_hat >= 0))
        throw std::invalid_argument("decide: alpha_hat must be non-negative");
    return alpha_hat > violation_threshold(cfg) ? Verdict::Violated : Verdict::NotViolated;
}

WilsonInterval wilson_interval(int successes, int n) {
    if (n <= 0) throw std::invalid_argument("wilson_interval: n must be positive");
    if (successes < 0 || successes > n)
        throw std::invalid_argument("wilson_interval: successes out of range");
    const double z = 1.959963984540054;  // 97.5th normal percentile
    const double nn = n;
    const double p = successes / nn;
    const double z2 = z * z;
    const double denom = 1 + z2 / nn;
    const double center = (p + z2 / (2 * nn)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
    WilsonInterval w{center - half, center + half};
    // rounding can leave dust at the exact endpoints, e.g. lo = 1e-18 for p = 0
    if (successes == 0 || w.lo < 0) w.lo = 0;
    if (successes == n || w.hi > 1) w.hi = 1;
    return w;
}

std::vector<RateRow> empirical_pd_pfa(const std::vector<TrialRow>& table,
                                      const DetectionConfig& cfg) {
    validate(cfg);
    if (table.empty()) throw std::invalid_argument("empirical_pd_pfa: empty trial table");
    std::vector<RateRow> out;
    std::set<double> done;
    std::size_t i = 0;
    while (i < table.size()) {
        const double a = table[i].alpha_true;
        if (!done.insert(a).second)
            throw std::invalid_argument("empirical_pd_pfa: rows not grouped by alpha_true");
        std::set<std::uint64_t> seeds;
        int n = 0, violated = 0;
        for (; i < table.size() && table[i].alpha_true == a; ++i) {
            if (!seeds.insert(table[i].seed).second)
                throw std::invalid_argument("empirical_pd_pfa: duplicate seed within group");
            ++n;
            if (decide(table[i].alpha_hat, cfg) == Verdict::Violated) ++violated;
        }
        RateRow r;
        r.alpha_true = a;
        r.is_pd = a > cfg.alpha_max;
        r.rate = static_cast<double>(violated) / n;
        const WilsonInterval w = wilson_interval(violated, n);
        r.ci_lo = w.lo;
        r.ci_hi = w.hi;
        r.n = n;
        out.push_back(r);
    }
    return out;
}

std::string trials_to_csv(const std::vector<TrialRow>& table) {
    std::ostringstream os;
    os << "alpha_true,seed,alpha_hat,verdict\n";
    for (const auto& r : table) {
        os << detail::fmt_g(r.alpha_true) << ',' << r.seed << ','
           << detail::fmt_g(r.alpha_hat) << ',' << to_string(r.verdict) << '\n';
    }
    return os.str();
}

std::vector<TrialRow> trials_from_csv(std::istream& in) {
    std::vector<TrialRow> out;
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("trial CSV: missing header");
    if (line != "alpha_true,seed,alpha_hat,verdict")
        throw std::invalid_argument("trial CSV: unexpected header: " + line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a_s, seed_s, hat_s, v_s;
        if (!std::getline(ls, a_s, ',') || !std::getline(ls, seed_s, ',') ||
            !std::getline(ls, hat_s, ',') || !std::getline(ls, v_s))
            throw std::invalid_argument("trial CSV: malformed row: " + line);
        TrialRow r;
        r.alpha_true = std::stod(a_s);
        r.seed = std::stoull(seed_s);
        r.alpha_hat = std::stod(hat_s);
        r.verdict = verdict_from_string(v_s);
        out.push_back(r);
    }
    return out;
}

std::string rates_to_csv(const std::vector<RateRow>& rows) {
    std::ostringstream os;
    os << "alpha_true,role,rate,ci_lo,ci_hi,n\n";
    for (const auto& r : rows) {
        os << detail::fmt_g(r.alpha_true) << ',' << (r.is_pd ? "Pd" : "Pfa") << ','
           << detail::fmt_g(r.rate) << ',' << detail::fmt_g(r.ci_lo) << ','
           << detail::fmt_g(r.ci_hi) << ',' << r.n << '\n';
    }
    return os.str();
}

}  // namespace lteumon
