#include "tsadam/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "tsadam/errors.hpp"
#include "tsadam/model.hpp"
#include "tsadam/oco.hpp"
#include "tsadam/rng.hpp"

namespace tsadam::train {

LrScheduleKind lr_schedule_from_name(const std::string& name) {
    if (name == "none") return LrScheduleKind::none;
    if (name == "cosine") return LrScheduleKind::cosine;
    if (name == "type1") return LrScheduleKind::type1;
    if (name == "type2") return LrScheduleKind::type2;
    throw ConfigError("unknown lr schedule '" + name +
                      "' (valid: none, cosine, type1, type2)");
}

std::string lr_schedule_name(LrScheduleKind kind) {
    switch (kind) {
        case LrScheduleKind::none: return "none";
        case LrScheduleKind::cosine: return "cosine";
        case LrScheduleKind::type1: return "type1";
        case LrScheduleKind::type2: return "type2";
    }
    return "none";
}

double lr_schedule(LrScheduleKind kind, int epoch, double alpha0, int total_epochs) {
    if (epoch < 1) throw std::invalid_argument("lr schedule: epoch must be >= 1");
    if (total_epochs < 1) throw std::invalid_argument("lr schedule: total epochs must be >= 1");
    switch (kind) {
        case LrScheduleKind::none:
            return alpha0;
        case LrScheduleKind::cosine: {
            const double pi = 3.141592653589793238462643383279502884;
            const double phase = pi * static_cast<double>(epoch - 1) /
                                 static_cast<double>(total_epochs);
            return alpha0 * 0.5 * (1.0 + std::cos(phase));
        }
        case LrScheduleKind::type1:
            return alpha0 * std::pow(0.5, epoch - 1);
        case LrScheduleKind::type2:
            return epoch <= 3 ? alpha0 : alpha0 * std::pow(0.5, epoch - 3);
    }
    return alpha0;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.lookback < 1 || cfg.horizon < 1) {
        throw ConfigError("experiment: lookback and horizon must be >= 1");
    }
    if (cfg.model != "linear" && cfg.model != "mlp") {
        throw ConfigError("experiment: model must be 'linear' or 'mlp'");
    }
    if (cfg.model == "mlp" && cfg.hidden < 1) {
        throw ConfigError("experiment: hidden width must be >= 1");
    }
    if (cfg.batch_size < 1) throw ConfigError("experiment: batch size must be >= 1");
    if (cfg.epochs < 0) throw ConfigError("experiment: epochs must be >= 0");
    if (cfg.patience < 1) throw ConfigError("experiment: patience must be >= 1");
    if (cfg.seeds.empty()) throw ConfigError("experiment: seed list must be nonempty");
    if (!(cfg.init_scale > 0.0)) throw ConfigError("experiment: init scale must be > 0");
    optim::validate(cfg.optimizer);
    if (cfg.csv_path.empty()) synth::validate(cfg.series);
    const int m = resolved_mase_seasonality(cfg);
    if (m < 1 || m >= cfg.lookback) {
        throw ConfigError("experiment: MASE seasonality (" + std::to_string(m) +
                          ") must lie in [1, lookback)");
    }
}

int resolved_mase_seasonality(const ExperimentConfig& cfg) {
    if (cfg.mase_seasonality > 0) return cfg.mase_seasonality;
    return cfg.csv_path.empty() ? cfg.series.period : 24;
}

WindowedData prepare_data(const ExperimentConfig& cfg) {
    MultiSeries series;
    if (cfg.csv_path.empty()) {
        const synth::SeriesSample sample = synth::generate(cfg.series, false);
        series.channels = 1;
        series.channel_names = {"value"};
        series.length = static_cast<long>(sample.values.size());
        series.values = sample.values;
    } else {
        series = load_csv(cfg.csv_path);
    }
    WindowedData data = make_windows(series, cfg.lookback, cfg.horizon, cfg.ratios);
    inject_noise(data, cfg.noise, cfg.noise_params, cfg.noise_seed);
    return data;
}

namespace {

struct SampleRef {
    long start;
    int channel;
};

double eval_split(const model::Forecaster& m, const WindowedData& d,
                  const std::vector<long>& windows) {
    std::vector<double> input(d.lookback), target(d.horizon), pred(d.horizon);
    double acc = 0.0;
    long count = 0;
    for (long s : windows) {
        for (int c = 0; c < d.channels; ++c) {
            input_window(d, s, c, input);
            target_window(d, s, c, target);
            m.forward(input, pred);
            double mse = 0.0;
            for (int j = 0; j < d.horizon; ++j) {
                const double e = pred[j] - target[j];
                mse += e * e;
            }
            acc += mse / static_cast<double>(d.horizon);
            ++count;
        }
    }
    return acc / static_cast<double>(count);
}

SeedRun run_one(const ExperimentConfig& cfg, const WindowedData& data,
                std::uint64_t seed) {
    SeedRun run;
    run.seed = seed;

    std::unique_ptr<model::Forecaster> net =
        model::make_forecaster(cfg.model, cfg.lookback, cfg.hidden, cfg.horizon);
    Rng init_rng(derive_seed(seed, 0));
    model::init_params(*net, init_rng, cfg.init_scale);

    optim::OptimizerState state = optim::init_state(net->param_count(), cfg.optimizer);
    std::vector<double> grad(net->param_count());
    std::vector<double> input(cfg.lookback), target(cfg.horizon);

    std::vector<SampleRef> samples;
    samples.reserve(data.train_windows.size() * data.channels);
    for (long s : data.train_windows) {
        for (int c = 0; c < data.channels; ++c) samples.push_back({s, c});
    }

    std::vector<double> best_params(net->params().begin(), net->params().end());
    double best_val = std::numeric_limits<double>::infinity();
    int bad_epochs = 0;

    for (int epoch = 1; epoch <= cfg.epochs && !run.failed; ++epoch) {
        optim::OptimizerSpec spec = cfg.optimizer;
        spec.alpha = lr_schedule(cfg.lr_schedule, epoch, cfg.optimizer.alpha, cfg.epochs);

        std::vector<SampleRef> order = samples;
        Rng shuffle_rng(derive_seed(seed, static_cast<std::uint64_t>(epoch)));
        shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        for (size_t at = 0; at < order.size() && !run.failed; at += cfg.batch_size) {
            const size_t batch_end = std::min(order.size(), at + cfg.batch_size);
            const double batch_n = static_cast<double>(batch_end - at);
            std::fill(grad.begin(), grad.end(), 0.0);
            double batch_loss = 0.0;
            for (size_t i = at; i < batch_end; ++i) {
                input_window(data, order[i].start, order[i].channel, input);
                target_window(data, order[i].start, order[i].channel, target);
                batch_loss += net->add_grad_mse(input, target, grad);
            }
            for (double& g : grad) g /= batch_n;
            batch_loss /= batch_n;
            epoch_loss += batch_loss * batch_n;
            if (!std::isfinite(batch_loss)) {
                run.failed = true;
                break;
            }
            try {
                optim::ParamView view{net->params(), grad};
                optim::step(spec, state, view);
            } catch (const NumericalError&) {
                run.failed = true;
                break;
            }
            ++run.steps;
        }
        if (run.failed) break;

        run.train_loss.push_back(epoch_loss / static_cast<double>(order.size()));
        const double val = eval_split(*net, data, data.val_windows);
        const double test = eval_split(*net, data, data.test_windows);
        run.val_loss.push_back(val);
        run.test_loss.push_back(test);
        if (!std::isfinite(val) || !std::isfinite(test)) {
            run.failed = true;
            break;
        }

        if (val < best_val) {
            best_val = val;
            best_params.assign(net->params().begin(), net->params().end());
            run.best_epoch = epoch;
            bad_epochs = 0;
        } else {
            ++bad_epochs;
            if (bad_epochs >= cfg.patience) break;
        }
    }

    std::copy(best_params.begin(), best_params.end(), net->params().begin());
    if (!run.test_loss.empty()) run.regret = oco::training_regret(run.test_loss);
    if (run.failed) return run;

    // Test metrics at the restored checkpoint, averaged over window samples.
    const int m = resolved_mase_seasonality(cfg);
    std::vector<double> pred(cfg.horizon), raw_in(cfg.lookback), raw_tg(cfg.horizon),
        pred_denorm(cfg.horizon);
    double mase_acc = 0.0;
    long mase_n = 0;
    long count = 0;
    for (long s : data.test_windows) {
        for (int c = 0; c < data.channels; ++c) {
            input_window(data, s, c, input);
            target_window(data, s, c, target);
            net->forward(input, pred);
            const MetricsFragment norm_frag = metrics(pred, target);
            run.mse += norm_frag.mse;
            run.mae += norm_frag.mae;

            raw_input_window(data, s, c, raw_in);
            raw_target_window(data, s, c, raw_tg);
            for (int j = 0; j < cfg.horizon; ++j) {
                pred_denorm[j] = pred[j] * data.stddev[c] + data.mean[c];
            }
            try {
                const MetricsFragment frag = metrics(pred_denorm, raw_tg, raw_in, m);
                run.mse_denorm += frag.mse;
                run.mae_denorm += frag.mae;
                run.smape += frag.smape;
                mase_acc += *frag.mase;
                ++mase_n;
            } catch (const DegenerateInputError&) {
                // Window constant at the seasonal lag: MASE undefined there,
                // keep the remaining metrics.
                const MetricsFragment frag = metrics(pred_denorm, raw_tg);
                run.mse_denorm += frag.mse;
                run.mae_denorm += frag.mae;
                run.smape += frag.smape;
            }
            ++count;
        }
    }
    const double inv = 1.0 / static_cast<double>(count);
    run.mse *= inv;
    run.mae *= inv;
    run.mse_denorm *= inv;
    run.mae_denorm *= inv;
    run.smape *= inv;
    if (mase_n > 0) run.mase = mase_acc / static_cast<double>(mase_n);
    return run;
}

}  // namespace

MetricsReport run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const WindowedData data = prepare_data(cfg);

    MetricsReport report;
    report.optimizer_name = optim::family_name(cfg.optimizer.family);
    for (std::uint64_t seed : cfg.seeds) {
        report.runs.push_back(run_one(cfg, data, seed));
        if (report.runs.back().failed) ++report.failed_runs;
    }

    std::vector<double> mse, mae, mse_d, mae_d, smape, mase;
    for (const SeedRun& run : report.runs) {
        if (run.failed) continue;
        mse.push_back(run.mse);
        mae.push_back(run.mae);
        mse_d.push_back(run.mse_denorm);
        mae_d.push_back(run.mae_denorm);
        smape.push_back(run.smape);
        if (run.mase) mase.push_back(*run.mase);
    }
    if (!mse.empty()) {
        report.mse = aggregate(mse);
        report.mae = aggregate(mae);
        report.mse_denorm = aggregate(mse_d);
        report.mae_denorm = aggregate(mae_d);
        report.smape = aggregate(smape);
        if (!mase.empty()) report.mase = aggregate(mase);
    }
    return report;
}

}  // namespace tsadam::train
