#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsadam/data.hpp"
#include "tsadam/metrics.hpp"
#include "tsadam/optim.hpp"
#include "tsadam/synth.hpp"

namespace tsadam::train {

enum class LrScheduleKind { none, cosine, type1, type2 };

LrScheduleKind lr_schedule_from_name(const std::string& name);
std::string lr_schedule_name(LrScheduleKind kind);

// Per-epoch learning rate. cosine anneals alpha0 to 0 over total_epochs;
// type1 halves every epoch; type2 holds alpha0 for three epochs, then halves.
double lr_schedule(LrScheduleKind kind, int epoch, double alpha0, int total_epochs);

struct ExperimentConfig {
    std::string csv_path;       // empty -> generate from `series`
    synth::SeriesSpec series;
    int lookback = 48;
    int horizon = 24;
    SplitRatios ratios;
    std::string model = "mlp";  // linear | mlp
    int hidden = 32;
    optim::OptimizerSpec optimizer;
    int batch_size = 32;
    int epochs = 10;
    int patience = 3;           // early stopping on validation loss
    LrScheduleKind lr_schedule = LrScheduleKind::none;
    NoiseKind noise = NoiseKind::none;
    NoiseParams noise_params;
    std::uint64_t noise_seed = 1;
    std::vector<std::uint64_t> seeds{123, 2021, 2077};
    int mase_seasonality = 0;   // 0 -> series period (synthetic) or 24 (csv)
    double init_scale = 0.1;    // uniform parameter init half-width
};

void validate(const ExperimentConfig& cfg);
int resolved_mase_seasonality(const ExperimentConfig& cfg);

struct SeedRun {
    std::uint64_t seed = 0;
    bool failed = false;             // divergence: non-finite loss or gradient
    std::vector<double> train_loss;  // per epoch, mean over train samples
    std::vector<double> val_loss;    // per epoch, full split, normalized mse
    std::vector<double> test_loss;   // per epoch, full split, normalized mse
    std::vector<double> regret;      // cumulative gap to the best test loss
    int best_epoch = 0;              // 1-based; 0 = initial parameters
    long steps = 0;                  // optimizer steps taken
    // Test metrics at the best-validation checkpoint.
    double mse = 0.0;                // normalized scale
    double mae = 0.0;                // normalized scale
    double mse_denorm = 0.0;         // original units
    double mae_denorm = 0.0;
    double smape = 0.0;              // original units, 0..200 scale
    std::optional<double> mase;      // absent if every window is seasonal-constant
};

struct MetricsReport {
    std::string optimizer_name;
    std::vector<SeedRun> runs;
    long failed_runs = 0;
    // Aggregates over non-failed runs.
    Aggregate mse, mae, mse_denorm, mae_denorm, smape;
    std::optional<Aggregate> mase;
};

// Full train/validate/test pipeline over every configured seed: seeded
// per-epoch shuffling, minibatch gradient averaging, early stopping with the
// best-validation checkpoint restored for test metrics. Divergent runs are
// reported as failed instead of raising. Deterministic per (config, seed).
MetricsReport run_experiment(const ExperimentConfig& cfg);

// The windowed data an experiment would train on (shared by reporting code).
WindowedData prepare_data(const ExperimentConfig& cfg);

}  // namespace tsadam::train
