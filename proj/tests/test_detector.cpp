#include <cmath>
#include <sstream>

#include "doctest.h"
#include "lteumon/detector.hpp"
#include "lteumon/rng.hpp"

using namespace lteumon;

TEST_CASE("verdicts use a strict threshold") {
    const DetectionConfig plain{0.5, 0.0};
    CHECK(decide(0.51, plain) == Verdict::Violated);
    CHECK(decide(0.5, plain) == Verdict::NotViolated);
    CHECK(decide(0.0, plain) == Verdict::NotViolated);

    const DetectionConfig margin{0.5, 0.014};
    CHECK(violation_threshold(margin) == 0.507);  // halving is exact in binary
    CHECK(decide(0.507, margin) == Verdict::NotViolated);
    CHECK(decide(0.5071, margin) == Verdict::Violated);

    CHECK_THROWS_AS(decide(-0.1, plain), std::invalid_argument);
}

TEST_CASE("detection config validation") {
    CHECK_NOTHROW(validate(DetectionConfig{0.5, 0.014}));
    CHECK_THROWS_AS(validate(DetectionConfig{0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(DetectionConfig{1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(DetectionConfig{0.5, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(validate(DetectionConfig{0.6, 0.7}), std::invalid_argument);
}

TEST_CASE("verdict strings round trip") {
    CHECK(to_string(Verdict::Violated) == "Violated");
    CHECK(to_string(Verdict::NotViolated) == "NotViolated");
    CHECK(verdict_from_string("Violated") == Verdict::Violated);
    CHECK(verdict_from_string("NotViolated") == Verdict::NotViolated);
    CHECK_THROWS_AS(verdict_from_string("maybe"), std::invalid_argument);
}

TEST_CASE("wilson interval reference values") {
    const auto w = wilson_interval(90, 200);
    CHECK(w.lo == doctest::Approx(0.3826406840224836).epsilon(1e-12));
    CHECK(w.hi == doctest::Approx(0.5192438486152431).epsilon(1e-12));

    const auto none = wilson_interval(0, 200);
    CHECK(none.lo == 0.0);
    CHECK(none.hi > 0.018);
    CHECK(none.hi < 0.02);

    const auto all = wilson_interval(200, 200);
    CHECK(all.hi == 1.0);
    CHECK(all.lo > 0.98);
}

TEST_CASE("wilson interval properties") {
    double prev_lo = -1, prev_hi = -1;
    for (int s = 0; s <= 50; ++s) {
        const auto w = wilson_interval(s, 50);
        CHECK(w.lo >= prev_lo);
        CHECK(w.hi >= prev_hi);
        CHECK(w.lo <= double(s) / 50);
        CHECK(w.hi >= double(s) / 50);
        prev_lo = w.lo;
        prev_hi = w.hi;
    }
    CHECK_THROWS_AS(wilson_interval(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(-1, 10), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(11, 10), std::invalid_argument);
}

TEST_CASE("empirical rates per sweep point") {
    std::vector<TrialRow> t{
        {0.49, 1, 0.49, Verdict::NotViolated},
        {0.49, 2, 0.40, Verdict::NotViolated},
        {0.49, 3, 0.51, Verdict::NotViolated},
        {0.49, 4, 0.60, Verdict::NotViolated},
        {0.52, 1, 0.55, Verdict::NotViolated},
        {0.52, 2, 0.30, Verdict::NotViolated},
        {0.50, 9, 0.52, Verdict::NotViolated},
    };

    const DetectionConfig cfg{0.5, 0.0};
    const auto rates = empirical_pd_pfa(t, cfg);
    REQUIRE(rates.size() == 3);

    CHECK(rates[0].alpha_true == 0.49);
    CHECK_FALSE(rates[0].is_pd);
    CHECK(rates[0].rate == 0.5);
    CHECK(rates[0].n == 4);
    const auto w = wilson_interval(2, 4);
    CHECK(rates[0].ci_lo == w.lo);
    CHECK(rates[0].ci_hi == w.hi);

    CHECK(rates[1].alpha_true == 0.52);
    CHECK(rates[1].is_pd);
    CHECK(rates[1].rate == 0.5);

    // exactly at the cap counts as a false-alarm row
    CHECK(rates[2].alpha_true == 0.50);
    CHECK_FALSE(rates[2].is_pd);
    CHECK(rates[2].rate == 1.0);

    // stored verdicts are ignored; the config in force decides
    const auto loose = empirical_pd_pfa(t, DetectionConfig{0.5, 0.3});
    CHECK(loose[0].rate == 0.0);
    CHECK(loose[1].rate == 0.0);
    CHECK(loose[2].rate == 0.0);
}

TEST_CASE("rate computation rejects malformed tables") {
    const DetectionConfig cfg{0.5, 0.0};
    CHECK_THROWS_AS(empirical_pd_pfa({}, cfg), std::invalid_argument);

    std::vector<TrialRow> dup{{0.5, 7, 0.4, Verdict::NotViolated},
                              {0.5, 7, 0.6, Verdict::NotViolated}};
    CHECK_THROWS_AS(empirical_pd_pfa(dup, cfg), std::invalid_argument);

    std::vector<TrialRow> split{{0.4, 1, 0.4, Verdict::NotViolated},
                                {0.5, 2, 0.5, Verdict::NotViolated},
                                {0.4, 3, 0.4, Verdict::NotViolated}};
    CHECK_THROWS_AS(empirical_pd_pfa(split, cfg), std::invalid_argument);
}

TEST_CASE("a wider margin never raises a rate") {
    SplitMix64 rng(31337);
    std::vector<TrialRow> t;
    for (double alpha : {0.45, 0.5, 0.52, 0.6}) {
        for (int k = 0; k < 50; ++k) {
            TrialRow r;
            r.alpha_true = alpha;
            r.seed = std::uint64_t(k);
            r.alpha_hat = alpha + (rng.unit() - 0.5) * 0.1;
            if (r.alpha_hat < 0) r.alpha_hat = 0;
            t.push_back(r);
        }
    }
    const auto tight = empirical_pd_pfa(t, DetectionConfig{0.5, 0.0});
    const auto loose = empirical_pd_pfa(t, DetectionConfig{0.5, 0.05});
    REQUIRE(tight.size() == loose.size());
    for (std::size_t i = 0; i < tight.size(); ++i) {
        CHECK(loose[i].rate <= tight[i].rate);
        CHECK(tight[i].n == 50);
    }
}

TEST_CASE("trial tables round trip through CSV") {
    std::vector<TrialRow> t{
        {0.498, 18446744073709551615ull, 0.4943125, Verdict::NotViolated},
        {0.502, 12, 1.0 / 3.0, Verdict::NotViolated},
        {0.502, 13, 0.5071, Verdict::Violated},
    };
    const std::string csv = trials_to_csv(t);
    std::istringstream in(csv);
    const auto back = trials_from_csv(in);
    REQUIRE(back.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(back[i].alpha_true == t[i].alpha_true);
        CHECK(back[i].seed == t[i].seed);
        CHECK(back[i].alpha_hat == t[i].alpha_hat);
        CHECK(back[i].verdict == t[i].verdict);
    }
    std::istringstream again(csv);
    CHECK(trials_to_csv(trials_from_csv(again)) == csv);
}

TEST_CASE("trial CSV rejects malformed input") {
    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return trials_from_csv(in);
    };
    CHECK_THROWS_AS(parse(""), std::invalid_argument);
    CHECK_THROWS_AS(parse("alpha,seed\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("alpha_true,seed,alpha_hat,verdict\n0.5,1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("alpha_true,seed,alpha_hat,verdict\n0.5,1,0.5,Sometimes\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse("alpha_true,seed,alpha_hat,verdict\nx,1,0.5,Violated\n"),
                    std::invalid_argument);
    CHECK(parse("alpha_true,seed,alpha_hat,verdict\n").empty());
}

TEST_CASE("rate rows serialize with role names") {
    std::vector<RateRow> rows{{0.5, false, 0.45, 0.25, 0.65, 20},
                              {0.52, true, 1.0, 0.87, 1.0, 20}};
    CHECK(rates_to_csv(rows) ==
          "alpha_true,role,rate,ci_lo,ci_hi,n\n"
          "0.5,Pfa,0.45,0.25,0.65,20\n"
          "0.52,Pd,1,0.87,1,20\n");
}
