#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "lteumon/experiment.hpp"

namespace {

struct Args {
    std::string config;
    std::string out;
    int jobs = 0;
};

void add_common(CLI::App* cmd, Args& a) {
    cmd->add_option("--config", a.config, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", a.out, "output directory")->required();
    cmd->add_option("--jobs", a.jobs, "worker threads (default: LTEUMON_JOBS or hardware)")
        ->check(CLI::PositiveNumber);
}

int run(const std::string& name, const Args& a) {
    const lteumon::ExperimentConfig cfg = lteumon::load_config(a.config);
    for (const std::string& w : lteumon::config_warnings(cfg))
        std::cerr << "warning: " << w << '\n';
    lteumon::CommandResult res;
    if (name == "analyze")
        res = lteumon::cmd_analyze(cfg, a.out);
    else if (name == "simulate")
        res = lteumon::cmd_simulate(cfg, a.out, a.jobs);
    else
        res = lteumon::cmd_detect(cfg, a.out, a.jobs);
    for (const auto& f : res.files) std::cout << f.string() << '\n';
    if (name != "analyze")
        std::cerr << res.trials << " trials, " << res.infeasible << " infeasible, "
                  << res.multi_on_periods << " multi-ON busy periods\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LTE-U duty-cycle monitoring experiments"};
    app.require_subcommand(1);
    Args a;
    add_common(app.add_subcommand("analyze", "closed-form Pd/Pfa curves"), a);
    add_common(app.add_subcommand("simulate", "duty-cycle estimation sweeps"), a);
    add_common(app.add_subcommand("detect", "violation-detection trials"), a);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return run(name, a);
    } catch (const lteumon::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
