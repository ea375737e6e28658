#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "tsadam/commands.hpp"
#include "tsadam/errors.hpp"
#include "tsadam/manifest.hpp"

namespace {

std::string default_out() {
    const char* env = std::getenv("TSADAM_OUT");
    return (env != nullptr && *env != '\0') ? env : "out";
}

// Every invocation leaves a manifest behind, success or failure, and errors
// map to stable exit codes: 2 config, 3 parse, 4 numerical, 5 io, 1 other.
int run_with_manifest(const std::string& command, const std::string& out_dir,
                      const std::map<std::string, std::string>& config,
                      const std::function<int()>& body) {
    tsadam::manifest::RunManifest man;
    man.command = command;
    man.config = config;
    man.out_dir = out_dir;
    const auto start = std::chrono::steady_clock::now();
    int code = 0;
    try {
        code = body();
        man.status = code == 0 ? "ok" : "certification_failed";
    } catch (const tsadam::ConfigError& e) {
        man.status = "error";
        man.error = e.what();
        code = 2;
    } catch (const tsadam::ParseError& e) {
        man.status = "error";
        man.error = e.what();
        code = 3;
    } catch (const tsadam::NumericalError& e) {
        man.status = "error";
        man.error = e.what();
        code = 4;
    } catch (const tsadam::IoError& e) {
        man.status = "error";
        man.error = e.what();
        code = 5;
    } catch (const std::exception& e) {
        man.status = "error";
        man.error = e.what();
        code = 1;
    }
    man.duration_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    tsadam::manifest::write_manifest(man);
    if (!man.error.empty()) std::cerr << "error: " << man.error << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimizer laboratory for non-stationary time series"};
    app.set_version_flag("--version", tsadam::manifest::kToolVersion);
    app.require_subcommand(1);

    tsadam::commands::ModulationArgs mod;
    mod.out_dir = default_out();
    CLI::App* c_mod = app.add_subcommand(
        "modulation", "Tabulate the effective step-size modulation factor");
    c_mod->add_option("--beta1", mod.beta1, "First-moment decay values")
        ->delimiter(',');
    c_mod->add_option("--beta2", mod.beta2, "Second-moment decay");
    c_mod->add_option("--t-max", mod.t_max, "Largest step index");
    c_mod->add_flag("--svg,!--no-svg", mod.emit_svg, "Toggle the SVG overlay");
    c_mod->add_option("--out", mod.out_dir, "Output directory");

    tsadam::commands::CertifyArgs cert;
    cert.out_dir = default_out();
    CLI::App* c_cert = app.add_subcommand(
        "certify", "Check the dynamic-regret bound on drifting quadratics");
    c_cert->add_option("--horizon", cert.horizon, "Rounds per run");
    c_cert->add_option("--delta", cert.deltas, "Per-round drift magnitudes")
        ->delimiter(',');
    c_cert->add_option("--dim", cert.dims, "Problem dimensions")->delimiter(',');
    c_cert->add_option("--seeds", cert.seeds, "Seeds per grid cell");
    c_cert->add_option("--seed-base", cert.seed_base, "Base seed for the grid");
    c_cert->add_option("--curvature", cert.curvature, "Quadratic curvature kappa");
    c_cert->add_option("--grad-bound", cert.grad_bound, "Gradient norm clip G");
    c_cert->add_flag("--negative-control", cert.negative_control,
                     "Under-report the drift so certification must fail");
    c_cert->add_flag("--detail,!--no-detail", cert.detail_csv,
                     "Per-run prefix CSV files");
    c_cert->add_option("--out", cert.out_dir, "Output directory");

    tsadam::commands::TrainArgs train;
    train.out_dir = default_out();
    CLI::App* c_train =
        app.add_subcommand("train", "Run the forecasting benchmark from a config");
    c_train->add_option("--config", train.config_path, "Experiment config file");
    c_train->add_option("--seeds", train.seeds, "Override: comma-separated seeds");
    c_train->add_option("--optimizer", train.optimizers,
                        "Override: optimizer names to compare")
        ->delimiter(',');
    c_train->add_option("--lr-schedule", train.schedule,
                        "Override: none|cosine|type1|type2");
    c_train->add_option("--noise", train.noise, "Override: none|gaussian|outlier");
    c_train->add_option("--batch", train.batch, "Override: minibatch size");
    c_train->add_flag("--svg,!--no-svg", train.emit_svg, "Toggle the SVG overlay");
    c_train->add_option("--out", train.out_dir, "Output directory");

    tsadam::commands::SynthArgs synth;
    synth.out_dir = default_out();
    CLI::App* c_synth = app.add_subcommand(
        "synth", "Generate a synthetic series or decompose a CSV column");
    c_synth->add_option("--config", synth.config_path, "Config with a [series] section");
    c_synth->add_option("--data", synth.data_path,
                        "Decompose a column of this CSV instead of generating");
    c_synth->add_option("--period", synth.period, "Seasonal period for --data mode");
    c_synth->add_option("--channel", synth.channel,
                        "Column index for --data mode (-1 = last)");
    c_synth->add_option("--length", synth.length, "Override: series length");
    c_synth->add_option("--seed", synth.seed, "Override: generator seed");
    c_synth->add_option("--out", synth.out_dir, "Output directory");

    tsadam::commands::FlopsArgs flops;
    flops.out_dir = default_out();
    CLI::App* c_flops = app.add_subcommand(
        "flops", "Per-step floating-point cost of the update rules");
    c_flops->add_option("--n", flops.n, "Parameter count");
    c_flops->add_option("--out", flops.out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    if (c_mod->parsed()) {
        return run_with_manifest("modulation", mod.out_dir, mod.describe(),
                                 [&] { return tsadam::commands::cmd_modulation(mod); });
    }
    if (c_cert->parsed()) {
        return run_with_manifest("certify", cert.out_dir, cert.describe(),
                                 [&] { return tsadam::commands::cmd_certify(cert); });
    }
    if (c_train->parsed()) {
        return run_with_manifest("train", train.out_dir, train.describe(),
                                 [&] { return tsadam::commands::cmd_train(train); });
    }
    if (c_synth->parsed()) {
        return run_with_manifest("synth", synth.out_dir, synth.describe(),
                                 [&] { return tsadam::commands::cmd_synth(synth); });
    }
    if (c_flops->parsed()) {
        return run_with_manifest("flops", flops.out_dir, flops.describe(),
                                 [&] { return tsadam::commands::cmd_flops(flops); });
    }
    return 0;
}
