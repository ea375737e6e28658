#include "tsadam/data.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "tsadam/csvio.hpp"
#include "tsadam/errors.hpp"
#include "tsadam/rng.hpp"

namespace tsadam::train {

MultiSeries load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    const std::vector<std::string> header = csv::split(line, ',');
    if (header.empty() || std::string(csv::trim(header[0])) != "date") {
        throw ParseError(path + " line 1: first column must be named 'date'");
    }
    if (header.size() < 2) {
        throw ParseError(path + " line 1: no numeric columns after 'date'");
    }

    MultiSeries series;
    series.channels = static_cast<int>(header.size()) - 1;
    for (size_t i = 1; i < header.size(); ++i) {
        series.channel_names.emplace_back(csv::trim(header[i]));
    }

    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (csv::trim(line).empty()) continue;
        const std::vector<std::string> cells = csv::split(line, ',');
        if (static_cast<int>(cells.size()) != series.channels + 1) {
            throw ParseError(path + " line " + std::to_string(lineno) + ": expected " +
                             std::to_string(series.channels + 1) + " columns, got " +
                             std::to_string(cells.size()));
        }
        for (int c = 0; c < series.channels; ++c) {
            series.values.push_back(csv::parse_double(cells[c + 1], path, lineno));
        }
        ++series.length;
    }
    if (series.length == 0) throw ParseError(path + ": no data rows");
    return series;
}

WindowedData make_windows(const MultiSeries& series, int lookback, int horizon,
                          SplitRatios ratios) {
    if (lookback < 1 || horizon < 1) {
        throw ConfigError("windows: lookback and horizon must be >= 1");
    }
    if (!(ratios.train >= 0.0) || !(ratios.val >= 0.0) || !(ratios.test >= 0.0) ||
        std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
        throw ConfigError("windows: split ratios must be nonnegative and sum to 1");
    }

    WindowedData d;
    d.lookback = lookback;
    d.horizon = horizon;
    d.channels = series.channels;
    d.length = series.length;
    d.raw = series.values;

    const long n = series.length;
    const long train_rows = std::llround(ratios.train * static_cast<double>(n));
    const long val_rows = std::llround(ratios.val * static_cast<double>(n));
    d.train_range = {0, train_rows};
    d.val_range = {train_rows, train_rows + val_rows};
    d.test_range = {train_rows + val_rows, n};

    const long min_rows = static_cast<long>(lookback) + horizon;
    for (const SplitRange* r : {&d.train_range, &d.val_range, &d.test_range}) {
        if (r->rows() < min_rows) {
            throw ConfigError("windows: every split needs at least lookback+horizon = " +
                              std::to_string(min_rows) + " rows (got " +
                              std::to_string(r->rows()) + ")");
        }
    }

    d.mean.assign(d.channels, 0.0);
    d.stddev.assign(d.channels, 0.0);
    for (int c = 0; c < d.channels; ++c) {
        double acc = 0.0;
        for (long t = d.train_range.begin; t < d.train_range.end; ++t) {
            acc += series.at(t, c);
        }
        const double mean = acc / static_cast<double>(train_rows);
        double ss = 0.0;
        for (long t = d.train_range.begin; t < d.train_range.end; ++t) {
            const double e = series.at(t, c) - mean;
            ss += e * e;
        }
        const double sd = std::sqrt(ss / static_cast<double>(train_rows));
        if (sd < 1e-12) {
            throw DegenerateInputError("windows: channel " + std::to_string(c) +
                                       " is constant over the train split");
        }
        d.mean[c] = mean;
        d.stddev[c] = sd;
    }

    d.norm.resize(d.raw.size());
    for (long t = 0; t < n; ++t) {
        for (int c = 0; c < d.channels; ++c) {
            d.norm[t * d.channels + c] = (series.at(t, c) - d.mean[c]) / d.stddev[c];
        }
    }

    const auto fill = [&](const SplitRange& r, std::vector<long>& starts) {
        for (long s = r.begin; s + min_rows <= r.end; ++s) starts.push_back(s);
    };
    fill(d.train_range, d.train_windows);
    fill(d.val_range, d.val_windows);
    fill(d.test_range, d.test_windows);
    return d;
}

namespace {

void copy_rows(const std::vector<double>& src, const WindowedData& d, long from,
               int count, int channel, std::span<double> out) {
    if (static_cast<int>(out.size()) != count) {
        throw std::invalid_argument("window copy: output span size mismatch");
    }
    for (int i = 0; i < count; ++i) {
        out[i] = src[(from + i) * d.channels + channel];
    }
}

}  // namespace

void input_window(const WindowedData& d, long start, int channel, std::span<double> out) {
    copy_rows(d.norm, d, start, d.lookback, channel, out);
}

void target_window(const WindowedData& d, long start, int channel, std::span<double> out) {
    copy_rows(d.norm, d, start + d.lookback, d.horizon, channel, out);
}

void raw_input_window(const WindowedData& d, long start, int channel,
                      std::span<double> out) {
    copy_rows(d.raw, d, start, d.lookback, channel, out);
}

void raw_target_window(const WindowedData& d, long start, int channel,
                       std::span<double> out) {
    copy_rows(d.raw, d, start + d.lookback, d.horizon, channel, out);
}

NoiseKind noise_kind_from_name(const std::string& name) {
    if (name == "none") return NoiseKind::none;
    if (name == "gaussian") return NoiseKind::gaussian;
    if (name == "outlier") return NoiseKind::outlier;
    throw ConfigError("unknown noise kind '" + name + "' (valid: none, gaussian, outlier)");
}

std::string noise_kind_name(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::none: return "none";
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::outlier: return "outlier";
    }
    return "none";
}

void inject_noise(WindowedData& data, NoiseKind kind, const NoiseParams& params,
                  std::uint64_t seed) {
    if (kind == NoiseKind::none) return;
    Rng rng(seed);
    const SplitRange r = data.train_range;

    if (kind == NoiseKind::gaussian) {
        const double frac = params.gaussian_fraction;
        if (!(frac >= 0.0) || frac >= 1.0) {
            throw ConfigError("noise: gaussian std fraction must lie in [0, 1)");
        }
        if (frac == 0.0) return;
        for (long t = r.begin; t < r.end; ++t) {
            for (int c = 0; c < data.channels; ++c) {
                const double eps = rng.normal(0.0, frac * data.stddev[c]);
                data.raw[t * data.channels + c] += eps;
                data.norm[t * data.channels + c] += eps / data.stddev[c];
            }
        }
        return;
    }

    const double frac = params.outlier_fraction;
    if (!(frac >= 0.0) || frac >= 1.0) {
        throw ConfigError("noise: outlier fraction must lie in [0, 1)");
    }
    const long count = std::llround(frac * static_cast<double>(r.rows()));
    if (count == 0) return;
    for (int c = 0; c < data.channels; ++c) {
        const std::vector<std::uint64_t> picks =
            rng.sample_without_replacement(static_cast<std::uint64_t>(r.rows()),
                                           static_cast<std::uint64_t>(count));
        for (std::uint64_t p : picks) {
            const long t = r.begin + static_cast<long>(p);
            const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
            const double spike = sign * params.outlier_magnitude;
            data.raw[t * data.channels + c] = data.mean[c] + spike * data.stddev[c];
            data.norm[t * data.channels + c] = spike;
        }
    }
}

}  // namespace tsadam::train
