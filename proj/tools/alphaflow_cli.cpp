// Command-line driver: single runs, alpha sweeps, the second-grade nu~alpha
// demonstration and the filtered-operator probe.

#include <CLI11.hpp>

#include "alphaflow/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"alphaflow: filtered-vorticity flow solver on annular domains"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::vector<double> alphas;
    double probe_p = 0.0;
    int trials = -1;
    long seed = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config file")->required();
        cmd->add_option("--out", out_dir, "output directory")->required();
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run one simulation");
    add_common(simulate);

    CLI::App* sweep = app.add_subcommand("sweep-alpha", "run an alpha ladder plus the Euler reference");
    add_common(sweep);
    sweep->add_option("--alphas", alphas, "override the config alpha ladder")->delimiter(',');

    CLI::App* obstruction =
        app.add_subcommand("second-grade-obstruction", "contrast nu rules across an alpha ladder");
    add_common(obstruction);

    CLI::App* probe = app.add_subcommand("probe-operator", "measure filtered-operator norm ratios");
    add_common(probe);
    probe->add_option("--alphas", alphas, "override the probe alpha ladder")->delimiter(',');
    probe->add_option("--p", probe_p, "Lebesgue exponent");
    probe->add_option("--trials", trials, "random fields per alpha");
    probe->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (simulate->parsed()) return alphaflow::cmd_simulate(config_path, out_dir);
    if (sweep->parsed()) return alphaflow::cmd_sweep_alpha(config_path, alphas, out_dir);
    if (obstruction->parsed()) return alphaflow::cmd_second_grade_obstruction(config_path, out_dir);
    if (probe->parsed()) {
        alphaflow::ProbeOverrides ov;
        if (!alphas.empty()) ov.alphas = alphas;
        if (probe_p > 0.0) ov.p = probe_p;
        if (trials >= 0) ov.trials = trials;
        if (seed >= 0) ov.seed = static_cast<unsigned long>(seed);
        return alphaflow::cmd_probe_operator(config_path, ov, out_dir);
    }
    return 2;
}
