// exband: spectrum-sensing experiments with excess-bandwidth detectors.
//
//   exband roc presets/fig4.cfg --out results/fig4 --svg
//   exband calibrate presets/fig4.cfg --pfa 0.05
//   exband validate --seed 7

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "exband/cli/commands.hpp"

int main(int argc, char** argv) {
    namespace ec = exband::cli;

    CLI::App app{"Spectrum sensing with noise-power uncertainty and excess-bandwidth bins"};
    app.set_version_flag("--version", std::string(ec::tool_version()));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    bool svg = false;
    double pfa = 0.1;

    auto add_common = [&](CLI::App* sub, bool with_config) {
        if (with_config) sub->add_option("config", config_path, "experiment file")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_option("--trials", trials, "trials per point (overrides the config)");
        if (with_config) {
            sub->add_option("--out", out_dir, "output directory");
            sub->add_flag("--svg", svg, "also write SVG charts");
        }
    };

    auto* roc = app.add_subcommand("roc", "empirical ROC sweep");
    auto* cdf = app.add_subcommand("cdf", "empirical H0 CDF of each statistic");
    auto* curves = app.add_subcommand("curves", "closed-form Pfa/Pd against threshold");
    auto* calibrate = app.add_subcommand("calibrate", "thresholds for one false-alarm target");
    auto* validate = app.add_subcommand("validate", "run the oracle checks");
    for (auto* sub : {roc, cdf, curves, calibrate}) add_common(sub, true);
    add_common(validate, false);
    calibrate->add_option("--pfa", pfa, "target false-alarm probability")->required()->check(CLI::Range(0.0, 1.0));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ec::kExitConfig;
    }

    ec::RunOptions opt;
    opt.out_dir = out_dir;
    opt.seed = seed;
    opt.trials = trials;
    opt.svg = svg;
    const std::string command = app.get_subcommands().front()->get_name();
    return ec::run_command(command, config_path, opt, pfa, std::cout, std::cerr);
}
