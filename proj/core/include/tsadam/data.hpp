#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tsadam::train {

// Multivariate series, row-major (time x channel).
struct MultiSeries {
    std::vector<std::string> channel_names;
    long length = 0;
    int channels = 0;
    std::vector<double> values;

    double at(long t, int c) const { return values[t * channels + c]; }
};

// ETT-style file: a `date` header column followed by numeric columns.
MultiSeries load_csv(const std::string& path);

struct SplitRatios {
    double train = 0.6;
    double val = 0.2;
    double test = 0.2;
};

struct SplitRange {
    long begin = 0;
    long end = 0;  // rows [begin, end)
    long rows() const { return end - begin; }
};

// Chronological three-way split with sliding windows that never straddle a
// boundary: window start s covers rows [s, s + lookback + horizon) entirely
// inside one split. Normalization is per-channel z-scoring with statistics
// taken from the train split only.
struct WindowedData {
    int lookback = 0;
    int horizon = 0;
    int channels = 0;
    long length = 0;
    std::vector<double> raw;     // time x channel, original units
    std::vector<double> norm;    // same layout, z-scored
    std::vector<double> mean;    // per channel, train split
    std::vector<double> stddev;  // per channel, train split
    SplitRange train_range, val_range, test_range;
    std::vector<long> train_windows, val_windows, test_windows;
};

WindowedData make_windows(const MultiSeries& series, int lookback, int horizon,
                          SplitRatios ratios);

// Single-channel views of one window, copied into caller buffers.
void input_window(const WindowedData& d, long start, int channel, std::span<double> out);
void target_window(const WindowedData& d, long start, int channel, std::span<double> out);
void raw_input_window(const WindowedData& d, long start, int channel, std::span<double> out);
void raw_target_window(const WindowedData& d, long start, int channel, std::span<double> out);

enum class NoiseKind { none, gaussian, outlier };

NoiseKind noise_kind_from_name(const std::string& name);
std::string noise_kind_name(NoiseKind kind);

struct NoiseParams {
    double gaussian_fraction = 0.1;  // additive noise std, fraction of train std
    double outlier_fraction = 0.01;  // fraction of train rows spiked, per channel
    double outlier_magnitude = 5.0;  // spike height in train stds around the mean
};

// Perturbs train-split rows only, updating both raw and normalized views;
// deterministic under seed. Gaussian draws go row-major; outlier positions
// are sampled without replacement per channel.
void inject_noise(WindowedData& data, NoiseKind kind, const NoiseParams& params,
                  std::uint64_t seed);

}  // namespace tsadam::train
