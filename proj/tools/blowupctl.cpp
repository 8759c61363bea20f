// blowupctl: scenario runner and certificate checker for the stretching
// model dt_omega = omega R(omega).
//
// Verbs:
//   run <config>      certificate (if requested) + time integration + reports
//   certify <config>  certificate only, no time integration
//   polar <config>    radial/angular experiments (dominance, sign test, monitor)
//   suite <manifest>  batch of the above, parallel across scenarios
//
// Exit codes: 0 ok, 1 internal error / strict warnings, 2 config error,
// 3 hypothesis refused, 4 step failure.

#include <CLI11.hpp>

#include "blowup/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"pseudospectral blow-up certificate toolkit"};
    app.require_subcommand(1);
    // allow the global flags to appear after the verb and its positional
    app.fallthrough();

    blowup::pipeline::RunOptions opt;
    app.add_option("--out", opt.out_dir, "output directory for reports and CSVs");
    app.add_option("--seed", opt.seed, "seed recorded in reports and used by property suites");
    app.add_option("--workers", opt.workers, "worker threads for suite execution")
        ->check(CLI::PositiveNumber);
    app.add_flag("--strict", opt.strict, "treat warnings as errors");

    std::string run_cfg, certify_cfg, polar_cfg, manifest;
    CLI::App* run = app.add_subcommand("run", "run one scenario config");
    run->add_option("config", run_cfg, "scenario config file")->required();
    CLI::App* certify = app.add_subcommand("certify", "certificate only, no integration");
    certify->add_option("config", certify_cfg, "scenario config file")->required();
    CLI::App* polar = app.add_subcommand("polar", "polar-model experiment config");
    polar->add_option("config", polar_cfg, "experiment config file")->required();
    CLI::App* suite = app.add_subcommand("suite", "run every entry of a manifest");
    suite->add_option("manifest", manifest, "manifest file listing '<verb> <config>' lines")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return blowup::pipeline::run_scenario(run_cfg, opt);
        if (certify->parsed()) return blowup::pipeline::certify(certify_cfg, opt);
        if (polar->parsed()) return blowup::pipeline::polar(polar_cfg, opt);
        return blowup::pipeline::suite(manifest, opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return blowup::pipeline::kExitInternal;
    }
}
