#include "lteumon/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "fmt_util.hpp"
#include "lteumon/irwin_hall.hpp"
#include "lteumon/observer.hpp"
#include "lteumon/rng.hpp"

namespace lteumon {
namespace {

using nlohmann::json;

std::string join_key(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
}

const json* find_key(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::none_of(allowed.begin(), allowed.end(),
                         [&](const char* k) { return it.key() == k; }))
            throw ConfigError("config: unknown key \"" + join_key(where, it.key()) + "\"");
    }
}

[[noreturn]] void missing(const std::string& where, const char* key) {
    throw ConfigError("config: missing required key \"" + join_key(where, key) + "\"");
}

TimeNs as_duration(const json& v, const std::string& name) {
    if (!v.is_number_integer())
        throw ConfigError("config: \"" + name + "\" must be an integer nanosecond count");
    if (v.is_number_unsigned() &&
        v.get<std::uint64_t>() > std::uint64_t(std::numeric_limits<TimeNs>::max()))
        throw ConfigError("config: \"" + name + "\" is out of range");
    const TimeNs x = v.get<TimeNs>();
    if (x < 0) throw ConfigError("config: \"" + name + "\" must be non-negative");
    return x;
}

TimeNs get_duration(const json& obj, const std::string& where, const char* key,
                    std::optional<TimeNs> def = std::nullopt) {
    const json* v = find_key(obj, key);
    if (!v) {
        if (def) return *def;
        missing(where, key);
    }
    return as_duration(*v, join_key(where, key));
}

int get_count(const json& obj, const std::string& where, const char* key,
              std::optional<int> def = std::nullopt) {
    const json* v = find_key(obj, key);
    if (!v) {
        if (def) return *def;
        missing(where, key);
    }
    const std::string name = join_key(where, key);
    if (!v->is_number_integer())
        throw ConfigError("config: \"" + name + "\" must be an integer");
    const auto x = v->get<std::int64_t>();
    if (x < 0 || x > std::numeric_limits<int>::max())
        throw ConfigError("config: \"" + name + "\" is out of range");
    return static_cast<int>(x);
}

std::uint64_t get_seed(const json& obj, const std::string& where, const char* key) {
    const json* v = find_key(obj, key);
    if (!v) missing(where, key);
    if (!v->is_number_unsigned())
        throw ConfigError("config: \"" + join_key(where, key) +
                          "\" must be a non-negative integer");
    return v->get<std::uint64_t>();
}

double get_real(const json& obj, const std::string& where, const char* key,
                std::optional<double> def = std::nullopt) {
    const json* v = find_key(obj, key);
    if (!v) {
        if (def) return *def;
        missing(where, key);
    }
    if (!v->is_number())
        throw ConfigError("config: \"" + join_key(where, key) + "\" must be a number");
    return v->get<double>();
}

bool get_flag(const json& obj, const std::string& where, const char* key, bool def) {
    const json* v = find_key(obj, key);
    if (!v) return def;
    if (!v->is_boolean())
        throw ConfigError("config: \"" + join_key(where, key) + "\" must be a boolean");
    return v->get<bool>();
}

std::vector<double> get_real_array(const json& obj, const std::string& where, const char* key,
                                   bool required) {
    const json* v = find_key(obj, key);
    if (!v) {
        if (required) missing(where, key);
        return {};
    }
    const std::string name = join_key(where, key);
    if (!v->is_array())
        throw ConfigError("config: \"" + name + "\" must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : *v) {
        if (!e.is_number())
            throw ConfigError("config: \"" + name + "\" must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<TimeNs> get_duration_array(const json& obj, const std::string& where,
                                       const char* key) {
    const json* v = find_key(obj, key);
    if (!v) return {};
    const std::string name = join_key(where, key);
    if (!v->is_array())
        throw ConfigError("config: \"" + name + "\" must be an array of integers");
    std::vector<TimeNs> out;
    for (const auto& e : *v) out.push_back(as_duration(e, name));
    if (out.empty()) throw ConfigError("config: \"" + name + "\" must not be empty");
    return out;
}

const json& get_object(const json& obj, const std::string& where, const char* key,
                       const json& empty) {
    const json* v = find_key(obj, key);
    if (!v) return empty;
    if (!v->is_object())
        throw ConfigError("config: \"" + join_key(where, key) + "\" must be an object");
    return *v;
}

DataLenSpec parse_data_len(const json& obj) {
    reject_unknown(obj, "wifi.data_len", {"mode", "lo_ns", "hi_ns"});
    DataLenSpec spec;
    const json* mode = find_key(obj, "mode");
    if (!mode) missing("wifi.data_len", "mode");
    if (!mode->is_string())
        throw ConfigError("config: \"wifi.data_len.mode\" must be \"constant\" or \"uniform\"");
    const std::string m = mode->get<std::string>();
    if (m == "constant") {
        if (find_key(obj, "lo_ns") || find_key(obj, "hi_ns"))
            throw ConfigError(
                "config: \"wifi.data_len.lo_ns\"/\"hi_ns\" only apply to uniform mode");
        return spec;
    }
    if (m != "uniform")
        throw ConfigError("config: \"wifi.data_len.mode\" must be \"constant\" or \"uniform\"");
    spec.uniform = true;
    spec.lo = get_duration(obj, "wifi.data_len", "lo_ns");
    spec.hi = get_duration(obj, "wifi.data_len", "hi_ns", 0);
    return spec;
}

std::string dur_tag(TimeNs v) {
    if (v % kMilli == 0) return std::to_string(v / kMilli) + "ms";
    if (v % kMicro == 0) return std::to_string(v / kMicro) + "us";
    return std::to_string(v) + "ns";
}

std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name,
                                 const std::string& content) {
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + path.string());
    return path;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

struct TrialPlan {
    std::size_t setting_idx;
    std::size_t alpha_idx;
    std::size_t trial_idx;
    std::uint64_t seed;
};

std::vector<TrialPlan> plan_trials(const ExperimentConfig& cfg, std::size_t n_settings) {
    std::vector<TrialPlan> plan;
    plan.reserve(n_settings * cfg.sweep.size() * static_cast<std::size_t>(cfg.repeats));
    for (std::size_t si = 0; si < n_settings; ++si)
        for (std::size_t ai = 0; ai < cfg.sweep.size(); ++ai)
            for (std::size_t ti = 0; ti < static_cast<std::size_t>(cfg.repeats); ++ti)
                plan.push_back({si, ai, ti, trial_seed(cfg.base_seed, si, ai, ti)});
    return plan;
}

}  // namespace

std::vector<SimSetting> ExperimentConfig::settings() const {
    const std::vector<TimeNs> ts = t_sweep.empty() ? std::vector<TimeNs>{t_ns} : t_sweep;
    const std::vector<TimeNs> ls =
        l_max_sweep.empty() ? std::vector<TimeNs>{l_max_ns} : l_max_sweep;
    std::vector<SimSetting> out;
    out.reserve(ts.size() * ls.size());
    for (TimeNs t : ts)
        for (TimeNs l : ls) out.push_back({t, l});
    return out;
}

WifiParams ExperimentConfig::wifi_for(const SimSetting& s) const {
    WifiParams w = wifi;
    w.l_max = s.l_max;
    if (data_len.uniform)
        w.len_mode = UniformLen{data_len.lo, data_len.hi ? data_len.hi : s.l_max};
    else
        w.len_mode = ConstantLen{};
    return w;
}

LteuPattern ExperimentConfig::pattern_for(const SimSetting& s) const {
    return LteuPattern{s.t, pattern.on_max, pattern.on_min, pattern.gap};
}

EstimatorParams ExperimentConfig::estimator_for(const SimSetting& s) const {
    return EstimatorParams{s.l_max, wifi.l_ph};
}

ExperimentConfig parse_config(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(j, "",
                   {"base_seed", "repeats", "sweep", "t_ns", "l_max_ns", "t_sweep_ns",
                    "l_max_sweep_ns", "gammas", "wifi", "pattern", "detection"});

    ExperimentConfig cfg;
    cfg.base_seed = get_seed(j, "", "base_seed");
    cfg.repeats = get_count(j, "", "repeats");
    cfg.sweep = get_real_array(j, "", "sweep", true);
    cfg.t_ns = get_duration(j, "", "t_ns");
    cfg.l_max_ns = get_duration(j, "", "l_max_ns");
    cfg.t_sweep = get_duration_array(j, "", "t_sweep_ns");
    cfg.l_max_sweep = get_duration_array(j, "", "l_max_sweep_ns");
    cfg.gammas = get_real_array(j, "", "gammas", false);

    const json empty = json::object();
    const json& w = get_object(j, "", "wifi", empty);
    reject_unknown(w, "wifi",
                   {"n_nodes", "difs_ns", "sifs_ns", "slot_ns", "cw_min", "cw_max", "l_ph_ns",
                    "ack_ns", "observer_has_traffic", "data_len"});
    const WifiParams defaults;
    cfg.wifi.n_nodes = get_count(w, "wifi", "n_nodes", defaults.n_nodes);
    cfg.wifi.difs = get_duration(w, "wifi", "difs_ns", defaults.difs);
    cfg.wifi.sifs = get_duration(w, "wifi", "sifs_ns", defaults.sifs);
    cfg.wifi.slot = get_duration(w, "wifi", "slot_ns", defaults.slot);
    cfg.wifi.cw_min = get_count(w, "wifi", "cw_min", defaults.cw_min);
    cfg.wifi.cw_max = get_count(w, "wifi", "cw_max", defaults.cw_max);
    cfg.wifi.l_ph = get_duration(w, "wifi", "l_ph_ns", defaults.l_ph);
    cfg.wifi.ack = get_duration(w, "wifi", "ack_ns", defaults.ack);
    cfg.wifi.observer_has_traffic =
        get_flag(w, "wifi", "observer_has_traffic", defaults.observer_has_traffic);
    if (const json* dl = find_key(w, "data_len")) {
        if (!dl->is_object())
            throw ConfigError("config: \"wifi.data_len\" must be an object");
        cfg.data_len = parse_data_len(*dl);
    }

    const json& p = get_object(j, "", "pattern", empty);
    reject_unknown(p, "pattern", {"on_max_ns", "on_min_ns", "gap_ns"});
    const PatternSpec pat_defaults;
    cfg.pattern.on_max = get_duration(p, "pattern", "on_max_ns", pat_defaults.on_max);
    cfg.pattern.on_min = get_duration(p, "pattern", "on_min_ns", pat_defaults.on_min);
    cfg.pattern.gap = get_duration(p, "pattern", "gap_ns", pat_defaults.gap);

    const json& d = get_object(j, "", "detection", empty);
    reject_unknown(d, "detection", {"alpha_max", "gamma"});
    const DetectionConfig det_defaults;
    cfg.detection.alpha_max = get_real(d, "detection", "alpha_max", det_defaults.alpha_max);
    cfg.detection.gamma = get_real(d, "detection", "gamma", det_defaults.gamma);

    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("config: cannot open " + file.string());
    ExperimentConfig cfg = parse_config(in);
    validate(cfg);
    return cfg;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.repeats < 1) throw ConfigError("config: \"repeats\" must be at least 1");
    for (double a : cfg.sweep)
        if (!(a >= 0 && a <= 1))
            throw ConfigError("config: \"sweep\" values must lie in [0,1]");
    for (double g : cfg.gammas)
        if (!(g >= 0)) throw ConfigError("config: \"gammas\" values must be non-negative");
    try {
        lteumon::validate(cfg.detection);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: \"detection\": ") + e.what());
    }
    for (const SimSetting& s : cfg.settings()) {
        const std::string at =
            " (setting T=" + dur_tag(s.t) + ", L_max=" + dur_tag(s.l_max) + ")";
        try {
            lteumon::validate(cfg.wifi_for(s));
            lteumon::validate(cfg.pattern_for(s));
            lteumon::validate(cfg.estimator_for(s));
        } catch (const std::exception& e) {
            throw ConfigError("config: " + std::string(e.what()) + at);
        }
        if (cfg.pattern.on_min <= s.l_max)
            throw ConfigError(
                "config: \"pattern.on_min_ns\" must exceed the frame-length cap" + at);
    }
}

std::vector<std::string> config_warnings(const ExperimentConfig& cfg) {
    std::vector<std::string> out;
    for (const SimSetting& s : cfg.settings()) {
        if (cfg.pattern.gap <= s.l_max + cfg.wifi.difs)
            out.push_back("gap " + dur_tag(cfg.pattern.gap) +
                          " is within one frame plus DIFS of the cap " + dur_tag(s.l_max) +
                          "; adjacent ON intervals may merge into one busy period");
    }
    return out;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t setting_idx,
                         std::size_t alpha_idx, std::size_t trial_idx) {
    std::uint64_t s = mix64(base_seed, setting_idx);
    s = mix64(s, alpha_idx);
    return mix64(s, trial_idx);
}

TrialOutcome run_trial(const ExperimentConfig& cfg, const SimSetting& s, double alpha,
                       std::uint64_t seed) {
    TrialOutcome out;
    OnSchedule sched;
    try {
        sched = generate_schedule(alpha, cfg.pattern_for(s), 0);
    } catch (const InfeasibleScheduleError& e) {
        out.error = e.what();
        return out;
    }
    const CycleRun run = run_cycle(cfg.wifi_for(s), sched, seed);
    const ObserverReport report = observe(run.events, sched.cycle);
    const EstimatorParams est = cfg.estimator_for(s);
    const DutyCycleEstimate est_result = estimate_duty_cycle(report, est);
    out.ok = true;
    out.alpha_hat = est_result.alpha_hat;
    out.m = est_result.m;
    for (const BusyPeriod& p : select_abnormal(report.busy_periods, est)) {
        const Interval span{p.t, p.t + p.d};
        int touched = 0;
        for (const Interval& on : sched.on_intervals)
            if (overlaps(span, on)) ++touched;
        if (touched > 1) ++out.multi_on_periods;
    }
    return out;
}

int resolve_jobs(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LTEUMON_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0 && v <= std::numeric_limits<int>::max())
            return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

CommandResult cmd_analyze(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    validate(cfg);
    CommandResult res;
    const std::vector<double> gammas =
        cfg.gammas.empty() ? std::vector<double>{cfg.detection.gamma} : cfg.gammas;
    for (double gamma : gammas) {
        for (const SimSetting& s : cfg.settings()) {
            AnalyticalModelParams params;
            params.gamma = gamma;
            params.alpha_max = cfg.detection.alpha_max;
            params.t_ns = s.t;
            params.l_max_ns = s.l_max;
            params.on_max_ns = cfg.pattern.on_max;
            const auto curve = pd_pfa_curve(cfg.sweep, params);
            const std::string name = "curve_g" + detail::fmt_g(gamma) + "_T" + dur_tag(s.t) +
                                     "_L" + dur_tag(s.l_max) + ".csv";
            res.files.push_back(write_file(out_dir, name, curve_to_csv(curve)));
        }
    }
    return res;
}

CommandResult cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                           int jobs) {
    validate(cfg);
    const auto settings = cfg.settings();
    const auto plan = plan_trials(cfg, settings.size());
    std::vector<TrialOutcome> outcomes(plan.size());
    parallel_for(plan.size(), resolve_jobs(jobs), [&](std::size_t i) {
        const TrialPlan& t = plan[i];
        outcomes[i] = run_trial(cfg, settings[t.setting_idx], cfg.sweep[t.alpha_idx], t.seed);
    });

    CommandResult res;
    std::ostringstream os;
    os << "t_ns,l_max_ns,alpha_true,seed,alpha_hat,m,status\n";
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const TrialPlan& t = plan[i];
        const SimSetting& s = settings[t.setting_idx];
        const TrialOutcome& o = outcomes[i];
        os << s.t << ',' << s.l_max << ',' << detail::fmt_g(cfg.sweep[t.alpha_idx]) << ','
           << t.seed << ',';
        if (o.ok)
            os << detail::fmt_g(o.alpha_hat) << ',' << o.m << ",ok\n";
        else
            os << "nan,0,infeasible\n";
        res.trials += 1;
        res.infeasible += o.ok ? 0 : 1;
        res.multi_on_periods += o.multi_on_periods;
    }
    res.files.push_back(write_file(out_dir, "estimates.csv", os.str()));
    return res;
}

CommandResult cmd_detect(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                         int jobs) {
    validate(cfg);
    const auto settings = cfg.settings();
    if (settings.size() != 1)
        throw ConfigError("config: detect requires a single (t_ns, l_max_ns) setting; got " +
                          std::to_string(settings.size()));
    const auto plan = plan_trials(cfg, 1);
    std::vector<TrialOutcome> outcomes(plan.size());
    parallel_for(plan.size(), resolve_jobs(jobs), [&](std::size_t i) {
        outcomes[i] = run_trial(cfg, settings[0], cfg.sweep[plan[i].alpha_idx], plan[i].seed);
    });

    CommandResult res;
    std::vector<TrialRow> table;
    std::ostringstream errors;
    errors << "alpha_true,seed,error\n";
    bool any_error = false;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const TrialPlan& t = plan[i];
        const TrialOutcome& o = outcomes[i];
        res.trials += 1;
        res.multi_on_periods += o.multi_on_periods;
        if (!o.ok) {
            res.infeasible += 1;
            any_error = true;
            std::string msg = o.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            errors << detail::fmt_g(cfg.sweep[t.alpha_idx]) << ',' << t.seed << ',' << msg
                   << '\n';
            continue;
        }
        TrialRow row;
        row.alpha_true = cfg.sweep[t.alpha_idx];
        row.seed = t.seed;
        row.alpha_hat = o.alpha_hat;
        row.verdict = decide(o.alpha_hat, cfg.detection);
        table.push_back(row);
    }
    res.files.push_back(write_file(out_dir, "trials.csv", trials_to_csv(table)));
    const std::string rates = table.empty()
                                  ? std::string("alpha_true,role,rate,ci_lo,ci_hi,n\n")
                                  : rates_to_csv(empirical_pd_pfa(table, cfg.detection));
    res.files.push_back(write_file(out_dir, "rates.csv", rates));
    if (any_error) res.files.push_back(write_file(out_dir, "errors.csv", errors.str()));
    return res;
}

}  // namespace lteumon
