#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lteumon/detector.hpp"
#include "lteumon/experiment.hpp"
#include "lteumon/irwin_hall.hpp"
#include "lteumon/scheduler.hpp"

namespace py = pybind11;
using namespace lteumon;

namespace {

AnalyticalModelParams make_params(double alpha, double gamma, double alpha_max, TimeNs t_ns,
                                  TimeNs l_max_ns, TimeNs on_max_ns) {
    AnalyticalModelParams p;
    p.alpha = alpha;
    p.gamma = gamma;
    p.alpha_max = alpha_max;
    p.t_ns = t_ns;
    p.l_max_ns = l_max_ns;
    p.on_max_ns = on_max_ns;
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Duty-cycle estimation and violation detection for LTE-U/Wi-Fi coexistence";

    m.def("irwin_hall_cdf", &irwin_hall_cdf, py::arg("m"), py::arg("y"),
          "CDF of the sum of m iid U(0,1) variables");

    m.def(
        "exceedance_probability",
        [](double alpha, double gamma, double alpha_max, TimeNs t_ns, TimeNs l_max_ns,
           TimeNs on_max_ns) {
            return exceedance_probability(
                make_params(alpha, gamma, alpha_max, t_ns, l_max_ns, on_max_ns));
        },
        py::arg("alpha"), py::arg("gamma"), py::arg("alpha_max"), py::arg("t_ns"),
        py::arg("l_max_ns"), py::arg("on_max_ns"),
        "Probability that the duty-cycle estimate exceeds (1+gamma)*alpha_max");

    m.def(
        "pd_pfa_curve",
        [](const std::vector<double>& alphas, double gamma, double alpha_max, TimeNs t_ns,
           TimeNs l_max_ns, TimeNs on_max_ns) {
            std::vector<std::tuple<double, double, bool>> out;
            for (const CurvePoint& p :
                 pd_pfa_curve(alphas, make_params(0, gamma, alpha_max, t_ns, l_max_ns,
                                                  on_max_ns))) {
                out.emplace_back(p.alpha, p.probability, p.is_pd);
            }
            return out;
        },
        py::arg("alphas"), py::arg("gamma"), py::arg("alpha_max"), py::arg("t_ns"),
        py::arg("l_max_ns"), py::arg("on_max_ns"),
        "Per-alpha (alpha, probability, is_pd) tuples of the analytical model");

    m.def(
        "generate_schedule",
        [](double alpha, TimeNs period_ns, TimeNs on_max_ns, TimeNs on_min_ns, TimeNs gap_ns) {
            const OnSchedule s =
                generate_schedule(alpha, LteuPattern{period_ns, on_max_ns, on_min_ns, gap_ns}, 0);
            std::vector<std::pair<TimeNs, TimeNs>> out;
            for (const Interval& iv : s.on_intervals) out.emplace_back(iv.start, iv.end);
            return out;
        },
        py::arg("alpha"), py::arg("period_ns"), py::arg("on_max_ns") = 20 * kMilli,
        py::arg("on_min_ns") = 6 * kMilli, py::arg("gap_ns") = 2 * kMilli,
        "ON intervals of one CSAT cycle as (start_ns, end_ns) pairs");

    m.def(
        "simulate_estimate",
        [](double alpha, std::uint64_t seed, TimeNs t_ns, TimeNs l_max_ns, int n_nodes,
           bool observer_has_traffic, TimeNs uniform_lo_ns) {
            ExperimentConfig cfg;
            cfg.base_seed = seed;
            cfg.repeats = 1;
            cfg.sweep = {alpha};
            cfg.t_ns = t_ns;
            cfg.l_max_ns = l_max_ns;
            cfg.wifi.n_nodes = n_nodes;
            cfg.wifi.observer_has_traffic = observer_has_traffic;
            if (uniform_lo_ns > 0) cfg.data_len = DataLenSpec{true, uniform_lo_ns, 0};
            validate(cfg);
            const TrialOutcome out = run_trial(cfg, SimSetting{t_ns, l_max_ns}, alpha, seed);
            if (!out.ok) throw std::runtime_error(out.error);
            py::dict d;
            d["alpha_hat"] = out.alpha_hat;
            d["m"] = out.m;
            d["multi_on_periods"] = out.multi_on_periods;
            return d;
        },
        py::arg("alpha"), py::arg("seed"), py::arg("t_ns") = 160 * kMilli,
        py::arg("l_max_ns") = 1100 * kMicro, py::arg("n_nodes") = 2,
        py::arg("observer_has_traffic") = false, py::arg("uniform_lo_ns") = 100 * kMicro,
        "Run one simulated cycle and estimate the duty cycle");

    m.def(
        "decide",
        [](double alpha_hat, double alpha_max, double gamma) {
            return to_string(decide(alpha_hat, DetectionConfig{alpha_max, gamma}));
        },
        py::arg("alpha_hat"), py::arg("alpha_max") = 0.5, py::arg("gamma") = 0.0,
        "Violation verdict for an estimate");

    m.def(
        "wilson_interval",
        [](int successes, int n) {
            const WilsonInterval w = wilson_interval(successes, n);
            return std::make_pair(w.lo, w.hi);
        },
        py::arg("successes"), py::arg("n"), "95% Wilson score interval");
}
