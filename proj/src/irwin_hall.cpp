#include "lteumon/irwin_hall.hpp"

#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fmt_util.hpp"

namespace lteumon {

namespace {

// Double-double arithmetic.  The alternating sum in the Irwin-Hall CDF
// cancels catastrophically for large m (terms up to ~1e25 against a result
// in [0,1]), so plain long double is not enough across the full m <= 64
// domain.  Two doubles give ~32 significant digits, which is.
struct DD {
    double hi = 0, lo = 0;
};

DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD quick_two_sum(double a, double b) {  // |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}

DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

DD dd_add(DD x, DD y) {
    DD s = two_sum(x.hi, y.hi);
    double lo = x.lo + y.lo + s.lo;
    return quick_two_sum(s.hi, lo);
}

DD dd_mul(DD x, DD y) {
    DD p = two_prod(x.hi, y.hi);
    double lo = p.lo + x.hi * y.lo + x.lo * y.hi;
    return quick_two_sum(p.hi, lo);
}

DD dd_div(DD x, DD y) {
    double q1 = x.hi / y.hi;
    DD r = dd_add(x, dd_mul({-q1, 0}, y));
    double q2 = r.hi / y.hi;
    r = dd_add(r, dd_mul({-q2, 0}, y));
    double q3 = r.hi / y.hi;
    DD q = quick_two_sum(q1, q2);
    return dd_add(q, {q3, 0});
}

DD dd_pow_int(DD base, int n) {
    DD r{1, 0};
    while (n > 0) {
        if (n & 1) r = dd_mul(r, base);
        base = dd_mul(base, base);
        n >>= 1;
    }
    return r;
}

const DD* factorials() {
    static DD f[65];
    static bool init = [] {
        f[0] = {1, 0};
        for (int i = 1; i <= 64; ++i) f[i] = dd_mul(f[i - 1], {double(i), 0});
        return true;
    }();
    (void)init;
    return f;
}

// Direct evaluation of (1/m!) * sum_k (-1)^k C(m,k) (y-k)^m for y <= m/2.
double cdf_lower_half(int m, double y) {
    const DD* fact = factorials();
    DD sum{0, 0};
    int kmax = int(std::floor(y));
    for (int k = 0; k <= kmax; ++k) {
        DD base = two_sum(y, double(-k));  // exact y-k
        if (base.hi <= 0) continue;
        DD term = dd_pow_int(base, m);
        term = dd_div(term, dd_mul(fact[k], fact[m - k]));
        if (k & 1) {
            term.hi = -term.hi;
            term.lo = -term.lo;
        }
        sum = dd_add(sum, term);
    }
    double r = sum.hi + sum.lo;
    if (r < 0) {
        assert(r > -1e-9);
        r = 0;
    }
    if (r > 1) {
        assert(r - 1 < 1e-9);
        r = 1;
    }
    return r;
}

}  // namespace

double irwin_hall_cdf(int m, double y) {
    if (m < 1 || m > 64)
        throw std::domain_error("irwin_hall_cdf: m must be in [1, 64], got " + std::to_string(m));
    if (std::isnan(y))
        throw std::invalid_argument("irwin_hall_cdf: y is NaN");
    if (y <= 0) return 0;
    if (y >= m) return 1;
    if (2 * y > m) return 1.0 - cdf_lower_half(m, double(m) - y);
    return cdf_lower_half(m, y);
}

double irwin_hall_cdf_gaussian(int m, double y) {
    double sd = std::sqrt(m / 12.0);
    return 0.5 * std::erfc((m / 2.0 - y) / (sd * std::sqrt(2.0)));
}

void validate(const AnalyticalModelParams& p) {
    if (!(p.alpha > 0 && p.alpha < 1))
        throw std::invalid_argument("AnalyticalModelParams: alpha must be in (0,1)");
    if (!(p.gamma >= 0))
        throw std::invalid_argument("AnalyticalModelParams: gamma must be >= 0");
    if (!(p.alpha_max > 0 && p.alpha_max < 1))
        throw std::invalid_argument("AnalyticalModelParams: alpha_max must be in (0,1)");
    if (!(p.l_max_ns > 0 && p.l_max_ns < p.on_max_ns && p.on_max_ns <= p.t_ns))
        throw std::invalid_argument(
            "AnalyticalModelParams: need 0 < l_max_ns < on_max_ns <= t_ns");
}

int abnormal_period_count(const AnalyticalModelParams& p) {
    validate(p);
    long double q = (long double)p.alpha * (long double)p.t_ns / (long double)p.on_max_ns;
    long double qr = std::round(q);
    long long m;
    if (std::fabs(q - qr) < 1e-9L * std::max<long double>(1, q))
        m = (long long)qr;  // treat near-integers as exact so ceil() stays stable
    else
        m = (long long)std::ceil(q);
    if (m < 1) m = 1;
    return int(m);
}

double exceedance_probability(const AnalyticalModelParams& p) {
    int m = abnormal_period_count(p);
    double shift = ((1 + p.gamma) * p.alpha_max - p.alpha) *
                   ((double)p.t_ns / (double)p.l_max_ns);
    double y = m / 2.0 + shift;
    return 1.0 - irwin_hall_cdf(m, y);
}

std::vector<CurvePoint> pd_pfa_curve(const std::vector<double>& alphas,
                                     const AnalyticalModelParams& fixed) {
    std::vector<CurvePoint> out;
    out.reserve(alphas.size());
    for (double a : alphas) {
        AnalyticalModelParams p = fixed;
        p.alpha = a;
        out.push_back({a, exceedance_probability(p), a > fixed.alpha_max});
    }
    return out;
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
    std::ostringstream os;
    os << "alpha,probability,role\n";
    for (const auto& pt : curve)
        os << detail::fmt_g(pt.alpha) << ',' << detail::fmt_g(pt.probability, 12) << ','
           << (pt.is_pd ? "Pd" : "Pfa") << '\n';
    return os.str();
}

}  // namespace lteumon
