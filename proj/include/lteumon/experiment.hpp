#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "lteumon/dcf_sim.hpp"
#include "lteumon/detector.hpp"
#include "lteumon/estimator.hpp"
#include "lteumon/scheduler.hpp"
#include "lteumon/trace.hpp"

namespace lteumon {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One point of the sweep grid: cycle period and frame-length cap.
struct SimSetting {
    TimeNs t = 0;
    TimeNs l_max = 0;
};

struct DataLenSpec {
    bool uniform = false;
    TimeNs lo = 0;   // uniform only
    TimeNs hi = 0;   // uniform only; 0 means "use the setting's l_max"
};

struct PatternSpec {
    TimeNs on_max = 20 * kMilli;
    TimeNs on_min = 6 * kMilli;
    TimeNs gap = 2 * kMilli;
};

struct ExperimentConfig {
    std::uint64_t base_seed = 0;
    int repeats = 1;
    std::vector<double> sweep;        // alpha_true values
    TimeNs t_ns = 0;                  // baseline cycle period
    TimeNs l_max_ns = 0;              // baseline frame-length cap
    std::vector<TimeNs> t_sweep;      // optional; empty means {t_ns}
    std::vector<TimeNs> l_max_sweep;  // optional; empty means {l_max_ns}
    std::vector<double> gammas;       // analyze only; empty means {detection.gamma}

    WifiParams wifi;  // l_max/len_mode placeholders, filled per setting
    DataLenSpec data_len;
    PatternSpec pattern;
    DetectionConfig detection;

    std::vector<SimSetting> settings() const;
    WifiParams wifi_for(const SimSetting& s) const;
    LteuPattern pattern_for(const SimSetting& s) const;
    EstimatorParams estimator_for(const SimSetting& s) const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& file);

// Structural checks beyond parsing: per-setting component validation and the
// ON_min > L_max assumption the abnormal-period argument rests on.
void validate(const ExperimentConfig& cfg);

// Non-fatal observations (e.g. a gap short enough to risk bridging two ON
// intervals into one busy period).
std::vector<std::string> config_warnings(const ExperimentConfig& cfg);

// Per-trial seed; mixing keeps existing trials stable when settings, sweep
// points, or repeats are appended.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t setting_idx,
                         std::size_t alpha_idx, std::size_t trial_idx);

struct TrialOutcome {
    bool ok = false;
    double alpha_hat = 0;
    int m = 0;
    int multi_on_periods = 0;  // abnormal periods spanning more than one ON interval
    std::string error;
};

TrialOutcome run_trial(const ExperimentConfig& cfg, const SimSetting& s, double alpha,
                       std::uint64_t seed);

// Number of workers to use: explicit request, else LTEUMON_JOBS, else the
// hardware count.
int resolve_jobs(int requested);

struct CommandResult {
    std::vector<std::filesystem::path> files;
    int trials = 0;
    int infeasible = 0;
    int multi_on_periods = 0;
};

CommandResult cmd_analyze(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
CommandResult cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                           int jobs);
CommandResult cmd_detect(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                         int jobs);

}  // namespace lteumon
