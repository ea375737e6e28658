#include "tsadam/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>

#include "tsadam/config.hpp"
#include "tsadam/csvio.hpp"
#include "tsadam/errors.hpp"
#include "tsadam/metrics.hpp"
#include "tsadam/oco.hpp"
#include "tsadam/optim.hpp"
#include "tsadam/rng.hpp"
#include "tsadam/svg.hpp"
#include "tsadam/synth.hpp"
#include "tsadam/train.hpp"

namespace tsadam::commands {

namespace fs = std::filesystem;

namespace {

void ensure_out_dir(const std::string& out) {
    if (out.empty()) throw ConfigError("output directory must not be empty");
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + out + "': " + ec.message());
    }
}

std::string path_in(const std::string& dir, const std::string& name) {
    return dir + "/" + name;
}

template <typename T>
std::string join_values(const std::vector<T>& values) {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ",";
        if constexpr (std::is_same_v<T, std::string>) {
            out += values[i];
        } else if constexpr (std::is_floating_point_v<T>) {
            out += csv::format_double(values[i]);
        } else {
            out += std::to_string(values[i]);
        }
    }
    return out;
}

}  // namespace

std::map<std::string, std::string> ModulationArgs::describe() const {
    return {{"beta1", join_values(beta1)},
            {"beta2", csv::format_double(beta2)},
            {"t_max", std::to_string(t_max)},
            {"svg", emit_svg ? "true" : "false"}};
}

int cmd_modulation(const ModulationArgs& args) {
    if (args.beta1.empty()) throw ConfigError("modulation: beta1 list must be nonempty");
    if (args.t_max < 1) throw ConfigError("modulation: t_max must be >= 1");
    ensure_out_dir(args.out_dir);

    svg::LinePlot plot("Step-size modulation factor", "t", "eta_eff / alpha");
    plot.log_x(true);
    const long long stride = std::max<long long>(1, args.t_max / 2000);

    for (const optim::Family family : {optim::Family::TSAdam, optim::Family::Adam}) {
        for (const double b1 : args.beta1) {
            optim::OptimizerSpec spec = optim::default_spec(family);
            spec.beta1 = b1;
            spec.beta2 = args.beta2;
            optim::validate(spec);

            const std::string name = std::string(optim::family_name(family));
            csv::Writer out(path_in(args.out_dir, "modulation_" + name + "_beta1_" +
                                                      csv::format_double(b1) + ".csv"));
            out.field("t");
            out.field("eta_eff");
            out.end_row();
            std::vector<double> xs, ys;
            for (long long t = 1; t <= args.t_max; ++t) {
                const double eff = optim::eff_step_modulation(spec, t);
                out.field(t);
                out.field(eff);
                out.end_row();
                if (t == 1 || t == args.t_max || t % stride == 0) {
                    xs.push_back(static_cast<double>(t));
                    ys.push_back(eff);
                }
            }
            out.close();
            plot.add(name + " beta1=" + csv::format_double(b1), std::move(xs),
                     std::move(ys));
        }
    }
    if (args.emit_svg) plot.write(path_in(args.out_dir, "modulation.svg"));
    std::cout << "modulation curves written to " << args.out_dir << '\n';
    return 0;
}

std::map<std::string, std::string> CertifyArgs::describe() const {
    return {{"horizon", std::to_string(horizon)},
            {"deltas", join_values(deltas)},
            {"dims", join_values(dims)},
            {"seeds", std::to_string(seeds)},
            {"seed_base", std::to_string(seed_base)},
            {"curvature", csv::format_double(curvature)},
            {"grad_bound", csv::format_double(grad_bound)},
            {"negative_control", negative_control ? "true" : "false"}};
}

int cmd_certify(const CertifyArgs& args) {
    if (args.horizon < 1) throw ConfigError("certify: horizon must be >= 1");
    if (args.seeds < 1) throw ConfigError("certify: seed count must be >= 1");
    if (!(args.curvature > 0.0)) throw ConfigError("certify: curvature must be > 0");
    if (!(args.grad_bound > 0.0)) throw ConfigError("certify: grad bound must be > 0");
    for (double d : args.deltas) {
        if (!(d >= 0.0)) throw ConfigError("certify: deltas must be >= 0");
    }
    ensure_out_dir(args.out_dir);

    struct ScheduleDef {
        std::string name;
        std::vector<double> eta;
    };
    std::vector<double> deltas = args.deltas;
    std::vector<ScheduleDef> schedules;
    if (args.negative_control) {
        // Heavy drift tracked with a tiny constant step: the honest bound is
        // huge, the under-reported one is crossed within a few hundred rounds.
        deltas = {0.5};
        schedules.push_back({"const0.01", oco::constant_schedule(args.horizon, 0.01)});
    } else {
        schedules.push_back({"const0.01", oco::constant_schedule(args.horizon, 0.01)});
        schedules.push_back({"const0.1", oco::constant_schedule(args.horizon, 0.1)});
        schedules.push_back({"invsqrt0.2", oco::inv_sqrt_schedule(args.horizon, 0.2)});
    }

    csv::Writer summary(path_in(args.out_dir, "certify_summary.csv"));
    for (const char* col : {"delta", "reported_delta", "dim", "schedule", "seed",
                            "horizon", "regret", "bound", "min_margin",
                            "small_drift_ok", "holds"}) {
        summary.field(col);
    }
    summary.end_row();

    bool all_hold = true;
    std::uint64_t run_index = 0;
    for (const double delta : deltas) {
        for (const int dim : args.dims) {
            for (const ScheduleDef& sched : schedules) {
                int held = 0;
                for (int s = 0; s < args.seeds; ++s) {
                    const oco::DriftScenario scenario = oco::make_scenario(
                        dim, args.horizon, delta, args.curvature, args.grad_bound,
                        derive_seed(args.seed_base, run_index++));
                    std::vector<double> theta1(dim, 0.0);
                    theta1[0] = 1.0;  // unit offset from the initial minimizer

                    std::optional<double> reported;
                    if (args.negative_control) reported = delta / 10.0;
                    const oco::CertifyResult res =
                        oco::certify_bound(scenario, sched.eta, theta1, reported);
                    const double min_margin =
                        *std::min_element(res.margin.begin(), res.margin.end());

                    summary.field(delta);
                    summary.field(reported.value_or(delta));
                    summary.field(dim);
                    summary.field(sched.name);
                    summary.field(s);
                    summary.field(args.horizon);
                    summary.field(res.ledger.cumulative_regret.back());
                    summary.field(res.bound_prefix.back());
                    summary.field(min_margin);
                    summary.field(res.small_drift_ok ? "true" : "false");
                    summary.field(res.holds ? "true" : "false");
                    summary.end_row();

                    if (args.detail_csv) {
                        csv::Writer detail(path_in(
                            args.out_dir,
                            "certify_delta" + csv::format_double(delta) + "_dim" +
                                std::to_string(dim) + "_" + sched.name + "_seed" +
                                std::to_string(s) + ".csv"));
                        detail.field("t");
                        detail.field("regret");
                        detail.field("bound");
                        detail.field("margin");
                        detail.end_row();
                        for (long t = 0; t < args.horizon; ++t) {
                            detail.field(t + 1);
                            detail.field(res.ledger.cumulative_regret[t]);
                            detail.field(res.bound_prefix[t]);
                            detail.field(res.margin[t]);
                            detail.end_row();
                        }
                        detail.close();
                    }
                    if (res.holds) ++held;
                    all_hold = all_hold && res.holds;
                    if (!res.small_drift_ok) {
                        std::cout << "note: delta=" << csv::format_double(delta)
                                  << " is outside the small-drift regime "
                                     "(G*delta < delta^2/2), bound may be "
                                     "non-monotone\n";
                    }
                }
                std::cout << "delta=" << csv::format_double(delta) << " dim=" << dim
                          << " schedule=" << sched.name << " -> holds " << held << "/"
                          << args.seeds << '\n';
            }
        }
    }
    summary.close();
    std::cout << (all_hold ? "certification PASS" : "certification FAIL") << '\n';
    return all_hold ? 0 : 1;
}

std::map<std::string, std::string> TrainArgs::describe() const {
    std::map<std::string, std::string> desc{{"config", config_path}};
    if (!seeds.empty()) desc["seeds"] = seeds;
    if (!optimizers.empty()) desc["optimizers"] = join_values(optimizers);
    if (!schedule.empty()) desc["lr_schedule"] = schedule;
    if (!noise.empty()) desc["noise"] = noise;
    if (batch > 0) desc["batch"] = std::to_string(batch);
    return desc;
}

int cmd_train(const TrainArgs& args) {
    if (args.config_path.empty()) throw ConfigError("train: --config is required");
    config::Document doc = config::parse_file(args.config_path);
    if (!args.seeds.empty()) doc["experiment"]["seeds"] = args.seeds;
    if (!args.optimizers.empty()) {
        doc["experiment"]["optimizers"] = join_values(args.optimizers);
    }
    if (!args.schedule.empty()) doc["experiment"]["lr_schedule"] = args.schedule;
    if (!args.noise.empty()) doc["experiment"]["noise"] = args.noise;
    if (args.batch > 0) doc["experiment"]["batch"] = std::to_string(args.batch);

    const config::TrainSetup setup = config::train_setup(doc);
    ensure_out_dir(args.out_dir);

    std::vector<train::MetricsReport> reports;
    for (size_t i = 0; i < setup.optimizers.size(); ++i) {
        train::ExperimentConfig cfg = setup.base;
        cfg.optimizer = setup.optimizers[i];
        reports.push_back(train::run_experiment(cfg));
        reports.back().optimizer_name = setup.optimizer_names[i];
    }

    csv::Writer metrics_csv(path_in(args.out_dir, "metrics.csv"));
    for (const char* col : {"optimizer", "seed", "failed", "best_epoch", "steps", "mse",
                            "mae", "mse_denorm", "mae_denorm", "smape", "mase"}) {
        metrics_csv.field(col);
    }
    metrics_csv.end_row();
    const auto metric_row = [&](const std::string& name, const train::SeedRun& run) {
        metrics_csv.field(name);
        metrics_csv.field(static_cast<long long>(run.seed));
        metrics_csv.field(run.failed ? "1" : "0");
        metrics_csv.field(run.best_epoch);
        metrics_csv.field(run.steps);
        if (run.failed) {
            for (int i = 0; i < 6; ++i) metrics_csv.field("");
        } else {
            metrics_csv.field(run.mse);
            metrics_csv.field(run.mae);
            metrics_csv.field(run.mse_denorm);
            metrics_csv.field(run.mae_denorm);
            metrics_csv.field(run.smape);
            if (run.mase) {
                metrics_csv.field(*run.mase);
            } else {
                metrics_csv.field("");
            }
        }
        metrics_csv.end_row();
    };
    const auto agg_row = [&](const std::string& name, const char* which,
                             const train::MetricsReport& report) {
        metrics_csv.field(name);
        metrics_csv.field(which);
        metrics_csv.field(std::to_string(report.failed_runs));
        metrics_csv.field("");
        metrics_csv.field("");
        const bool mean = std::string(which) == "mean";
        const auto cell = [&](const train::Aggregate& agg) {
            if (mean) {
                metrics_csv.field(agg.mean);
            } else if (agg.stddev) {
                metrics_csv.field(*agg.stddev);
            } else {
                metrics_csv.field("");
            }
        };
        cell(report.mse);
        cell(report.mae);
        cell(report.mse_denorm);
        cell(report.mae_denorm);
        cell(report.smape);
        if (report.mase) {
            cell(*report.mase);
        } else {
            metrics_csv.field("");
        }
        metrics_csv.end_row();
    };
    for (const train::MetricsReport& report : reports) {
        for (const train::SeedRun& run : report.runs) {
            metric_row(report.optimizer_name, run);
        }
        if (report.failed_runs < static_cast<long>(report.runs.size())) {
            agg_row(report.optimizer_name, "mean", report);
            agg_row(report.optimizer_name, "std", report);
        }
    }
    metrics_csv.close();

    for (const train::MetricsReport& report : reports) {
        for (const train::SeedRun& run : report.runs) {
            const std::string tag =
                report.optimizer_name + "_seed" + std::to_string(run.seed);
            csv::Writer curves(path_in(args.out_dir, "curves_" + tag + ".csv"));
            curves.field("epoch");
            curves.field("train_loss");
            curves.field("val_loss");
            curves.field("test_loss");
            curves.end_row();
            for (size_t e = 0; e < run.train_loss.size(); ++e) {
                curves.field(static_cast<long long>(e + 1));
                curves.field(run.train_loss[e]);
                curves.field(run.val_loss[e]);
                curves.field(run.test_loss[e]);
                curves.end_row();
            }
            curves.close();

            csv::Writer regret(path_in(args.out_dir, "regret_" + tag + ".csv"));
            regret.field("epoch");
            regret.field("test_loss");
            regret.field("cum_regret");
            regret.end_row();
            for (size_t e = 0; e < run.regret.size(); ++e) {
                regret.field(static_cast<long long>(e + 1));
                regret.field(run.test_loss[e]);
                regret.field(run.regret[e]);
                regret.end_row();
            }
            regret.close();
        }
    }

    // Head-to-head significance of tsadam against every other entry.
    const auto tsadam_it =
        std::find(setup.optimizer_names.begin(), setup.optimizer_names.end(), "tsadam");
    if (tsadam_it != setup.optimizer_names.end() && reports.size() > 1) {
        const size_t ts = static_cast<size_t>(tsadam_it - setup.optimizer_names.begin());
        const int comparisons = static_cast<int>(reports.size()) - 1;
        csv::Writer ttest(path_in(args.out_dir, "ttest.csv"));
        for (const char* col : {"a", "b", "n", "mean_a", "mean_b", "t_stat", "df",
                                "p_value", "significant", "comparisons", "note"}) {
            ttest.field(col);
        }
        ttest.end_row();
        for (size_t i = 0; i < reports.size(); ++i) {
            if (i == ts) continue;
            std::vector<double> a, b;
            for (size_t s = 0; s < reports[ts].runs.size(); ++s) {
                if (reports[ts].runs[s].failed || reports[i].runs[s].failed) continue;
                a.push_back(reports[ts].runs[s].mse);
                b.push_back(reports[i].runs[s].mse);
            }
            ttest.field("tsadam");
            ttest.field(reports[i].optimizer_name);
            ttest.field(static_cast<long long>(a.size()));
            if (a.size() < 2) {
                for (int c = 0; c < 6; ++c) ttest.field("");
                ttest.field(comparisons);
                ttest.field("insufficient paired runs");
                ttest.end_row();
                continue;
            }
            ttest.field(train::aggregate(a).mean);
            ttest.field(train::aggregate(b).mean);
            try {
                const train::TTestResult res = train::paired_ttest(a, b, comparisons);
                ttest.field(res.t_stat);
                ttest.field(res.df);
                ttest.field(res.p_value);
                ttest.field(res.significant ? "true" : "false");
                ttest.field(comparisons);
                ttest.field("");
            } catch (const DegenerateInputError&) {
                ttest.field("");
                ttest.field("");
                ttest.field("");
                ttest.field("");
                ttest.field(comparisons);
                ttest.field("zero-variance differences");
            }
            ttest.end_row();
        }
        ttest.close();
    }

    if (args.emit_svg) {
        svg::LinePlot plot("Test loss by epoch", "epoch", "normalized mse");
        for (const train::MetricsReport& report : reports) {
            for (const train::SeedRun& run : report.runs) {
                if (run.failed || run.test_loss.empty()) continue;
                std::vector<double> xs(run.test_loss.size());
                for (size_t e = 0; e < xs.size(); ++e) xs[e] = static_cast<double>(e + 1);
                plot.add(report.optimizer_name, std::move(xs),
                         std::vector<double>(run.test_loss));
                break;  // first healthy seed per optimizer keeps the plot legible
            }
        }
        plot.write(path_in(args.out_dir, "train_curves.svg"));
    }

    for (const train::MetricsReport& report : reports) {
        std::cout << report.optimizer_name << ": mean test mse "
                  << csv::format_double(report.mse.mean);
        if (report.mse.stddev) {
            std::cout << " +/- " << csv::format_double(*report.mse.stddev);
        }
        if (report.failed_runs > 0) {
            std::cout << " (" << report.failed_runs << " failed runs)";
        }
        std::cout << '\n';
    }
    return 0;
}

std::map<std::string, std::string> SynthArgs::describe() const {
    std::map<std::string, std::string> desc;
    if (!config_path.empty()) desc["config"] = config_path;
    if (!data_path.empty()) {
        desc["data"] = data_path;
        desc["period"] = std::to_string(period);
        desc["channel"] = std::to_string(channel);
    }
    if (length >= 0) desc["length"] = std::to_string(length);
    if (seed >= 0) desc["seed"] = std::to_string(seed);
    return desc;
}

namespace {

struct ReferenceShare {
    double trend, seasonal, residual;  // percent
};

// Published decomposition shares for the common public benchmark files,
// printed next to fresh results for a quick sanity comparison.
const std::map<std::string, ReferenceShare> kKnownShares = {
    {"ETTh1", {59.3, 32.1, 15.5}}, {"ETTh2", {88.9, 5.0, 6.8}},
    {"ETTm1", {59.1, 31.9, 15.5}}, {"ETTm2", {88.5, 5.0, 6.8}},
    {"ECL", {20.9, 73.3, 11.4}},   {"Weather", {51.0, 27.4, 28.3}},
};

void write_contributions(const std::string& out_dir,
                         const synth::VarianceContribution& c,
                         const ReferenceShare* ref) {
    csv::Writer out(path_in(out_dir, "contributions.csv"));
    out.field("component");
    out.field("share_pct");
    if (ref) out.field("reference_pct");
    out.end_row();
    const auto row = [&](const char* name, double pct, double ref_pct) {
        out.field(name);
        out.field(pct);
        if (ref) out.field(ref_pct);
        out.end_row();
    };
    row("trend", 100.0 * c.trend_pct, ref ? ref->trend : 0.0);
    row("seasonal", 100.0 * c.seasonal_pct, ref ? ref->seasonal : 0.0);
    row("residual", 100.0 * c.residual_pct, ref ? ref->residual : 0.0);
    out.close();
}

void print_contributions(const synth::VarianceContribution& c,
                         const ReferenceShare* ref) {
    const auto line = [&](const char* name, double pct, double ref_pct) {
        std::cout << "  " << name << ": " << csv::format_double(pct) << "%";
        if (ref) std::cout << " (reference " << csv::format_double(ref_pct) << "%)";
        std::cout << '\n';
    };
    std::cout << "variance contributions\n";
    line("trend", 100.0 * c.trend_pct, ref ? ref->trend : 0.0);
    line("seasonal", 100.0 * c.seasonal_pct, ref ? ref->seasonal : 0.0);
    line("residual", 100.0 * c.residual_pct, ref ? ref->residual : 0.0);
}

}  // namespace

int cmd_synth(const SynthArgs& args) {
    ensure_out_dir(args.out_dir);

    if (!args.data_path.empty()) {
        const train::MultiSeries series = train::load_csv(args.data_path);
        const int channel = args.channel < 0 ? series.channels - 1 : args.channel;
        if (channel >= series.channels) {
            throw ConfigError("synth: channel " + std::to_string(channel) +
                              " out of range (file has " +
                              std::to_string(series.channels) + ")");
        }
        std::vector<double> column(series.length);
        for (long t = 0; t < series.length; ++t) column[t] = series.at(t, channel);
        const synth::VarianceContribution c =
            synth::variance_contributions(column, args.period);
        const std::string stem = fs::path(args.data_path).stem().string();
        const auto ref = kKnownShares.find(stem);
        const ReferenceShare* ref_ptr = ref == kKnownShares.end() ? nullptr : &ref->second;
        print_contributions(c, ref_ptr);
        write_contributions(args.out_dir, c, ref_ptr);
        return 0;
    }

    synth::SeriesSpec spec;
    if (!args.config_path.empty()) {
        spec = config::series_spec(config::parse_file(args.config_path));
    }
    if (spec.seasonal.empty()) spec.seasonal.assign(spec.period, 0.0);
    if (args.length >= 0) spec.length = args.length;
    if (args.seed >= 0) spec.seed = static_cast<std::uint64_t>(args.seed);

    const synth::SeriesSample sample = synth::generate(spec, true);
    csv::Writer out(path_in(args.out_dir, "series.csv"));
    out.field("value");
    out.field("trend");
    out.field("seasonal");
    out.field("residual");
    out.end_row();
    for (size_t t = 0; t < sample.values.size(); ++t) {
        out.field(sample.values[t]);
        out.field(sample.trend[t]);
        out.field(sample.seasonal[t]);
        out.field(sample.residual[t]);
        out.end_row();
    }
    out.close();
    std::cout << "series of length " << sample.values.size() << " written to "
              << args.out_dir << "/series.csv\n";

    if (spec.length >= 2L * spec.period) {
        try {
            const synth::VarianceContribution c =
                synth::variance_contributions(sample.values, spec.period);
            print_contributions(c, nullptr);
            write_contributions(args.out_dir, c, nullptr);
        } catch (const DegenerateInputError&) {
            std::cout << "variance contributions skipped: constant series\n";
        }
    }
    return 0;
}

std::map<std::string, std::string> FlopsArgs::describe() const {
    return {{"n", std::to_string(n)}};
}

int cmd_flops(const FlopsArgs& args) {
    if (args.n < 1) throw ConfigError("flops: n must be >= 1");
    ensure_out_dir(args.out_dir);

    const optim::FlopBreakdown adam =
        optim::flop_breakdown(optim::Family::Adam, static_cast<std::size_t>(args.n));
    const optim::FlopBreakdown ts =
        optim::flop_breakdown(optim::Family::TSAdam, static_cast<std::size_t>(args.n));

    csv::Writer out(path_in(args.out_dir, "flops.csv"));
    for (const char* col : {"family", "n", "mul", "add", "div", "sqrt", "total"}) {
        out.field(col);
    }
    out.end_row();
    const auto row = [&](const char* name, const optim::FlopBreakdown& b) {
        out.field(name);
        out.field(args.n);
        out.field(b.mul);
        out.field(b.add);
        out.field(b.div);
        out.field(b.sqrt_ops);
        out.field(b.total());
        out.end_row();
    };
    row("adam", adam);
    row("tsadam", ts);
    out.close();

    const long long saving = adam.total() - ts.total();
    std::cout << "per-step FLOPs at n=" << args.n << '\n'
              << "  adam:   " << adam.total() << " (6n mul, 3n add, 2n div, 1n sqrt)\n"
              << "  tsadam: " << ts.total() << " (6n mul, 3n add, 1n div, 1n sqrt)\n"
              << "  saving " << saving << " FLOPs per iteration (1/12 ~= 8.33%)\n";
    return 0;
}

}  // namespace tsadam::commands
