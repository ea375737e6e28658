#include "tsadam/synth.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tsadam/errors.hpp"
#include "tsadam/rng.hpp"

namespace tsadam::synth {

namespace {

double population_variance(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return acc / n;
}

}  // namespace

void validate(const SeriesSpec& spec) {
    if (spec.period < 1) throw ConfigError("series spec: period must be at least 1");
    if (spec.length < 1) throw ConfigError("series spec: length must be at least 1");
    if (static_cast<int>(spec.seasonal.size()) != spec.period) {
        throw ConfigError("series spec: seasonal pattern length must equal period");
    }
    if (!(spec.sigma_eps >= 0.0) || !std::isfinite(spec.sigma_eps)) {
        throw ConfigError("series spec: sigma_eps must be finite and nonnegative");
    }
    if (!(spec.sigma_r >= 0.0) || !std::isfinite(spec.sigma_r)) {
        throw ConfigError("series spec: sigma_r must be finite and nonnegative");
    }
    const double sum = std::accumulate(spec.seasonal.begin(), spec.seasonal.end(), 0.0);
    if (std::abs(sum) > 1e-9) {
        throw ConfigError("series spec: seasonal pattern must sum to zero (got " +
                          std::to_string(sum) + ")");
    }
}

SeriesSample generate(const SeriesSpec& spec, bool keep_components) {
    validate(spec);
    Rng rng(spec.seed);
    const long n = spec.length;

    std::vector<double> trend(n);
    trend[0] = spec.trend_start;
    for (long t = 1; t < n; ++t) {
        trend[t] = trend[t - 1] + rng.normal(0.0, spec.sigma_eps);
    }

    SeriesSample out;
    out.values.resize(n);
    if (keep_components) {
        out.trend = trend;
        out.seasonal.resize(n);
        out.residual.resize(n);
    }
    for (long t = 0; t < n; ++t) {
        const double s = spec.seasonal[seasonal_slot(t + 1, spec.period)];
        const double r = rng.normal(0.0, spec.sigma_r);
        out.values[t] = trend[t] + s + r;
        if (keep_components) {
            out.seasonal[t] = s;
            out.residual[t] = r;
        }
    }
    return out;
}

Moments theoretical_moments(const SeriesSpec& spec, long t) {
    validate(spec);
    if (t < 1 || t > spec.length) {
        throw std::invalid_argument("theoretical_moments: t out of [1, length]");
    }
    Moments m;
    m.mean = spec.trend_start + spec.seasonal[seasonal_slot(t, spec.period)];
    m.variance = static_cast<double>(t - 1) * spec.sigma_eps * spec.sigma_eps +
                 spec.sigma_r * spec.sigma_r;
    return m;
}

MomentCheck moment_check_against(const SeriesSpec& spec, long t, long replicates,
                                 double mean_oracle, double var_oracle) {
    validate(spec);
    if (replicates < 1000) {
        throw std::invalid_argument("moment check: need at least 1000 replicates");
    }
    if (t < 1 || t > spec.length) {
        throw std::invalid_argument("moment check: t out of [1, length]");
    }

    SeriesSpec draw = spec;
    draw.length = t;
    double sum = 0.0;
    double sumsq = 0.0;
    for (long i = 0; i < replicates; ++i) {
        draw.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(i));
        const double y = generate(draw, /*keep_components=*/false).values[t - 1];
        sum += y;
        sumsq += y * y;
    }
    const double r = static_cast<double>(replicates);
    const double sample_mean = sum / r;
    const double sample_var = (sumsq - r * sample_mean * sample_mean) / (r - 1.0);

    // Guard the degenerate zero-variance oracle: fall back to a tiny floor
    // so exact-match cases report z = 0 instead of 0/0.
    const double sd = std::sqrt(std::max(var_oracle, 1e-300));
    MomentCheck check;
    check.z_mean = (sample_mean - mean_oracle) / (sd / std::sqrt(r));
    const double var_se = std::max(var_oracle, 1e-300) * std::sqrt(2.0 / (r - 1.0));
    check.z_var = (sample_var - var_oracle) / var_se;
    check.pass = std::abs(check.z_mean) <= 3.0 && std::abs(check.z_var) <= 3.0;
    return check;
}

MomentCheck empirical_moment_check(const SeriesSpec& spec, long t, long replicates) {
    const Moments m = theoretical_moments(spec, t);
    return moment_check_against(spec, t, replicates, m.mean, m.variance);
}

VarianceContribution variance_contributions(std::span<const double> values, int period) {
    if (period < 1) throw std::invalid_argument("variance_contributions: period must be >= 1");
    const long n = static_cast<long>(values.size());
    if (n < 2 * period) {
        throw std::invalid_argument("variance_contributions: need at least two periods of data");
    }
    const double total_var = population_variance(values);
    if (total_var <= 0.0) {
        throw DegenerateInputError("variance_contributions: constant series has no variance");
    }

    // Centered moving average; window = period+1 rounded down to odd.
    int window = period + 1;
    if (window % 2 == 0) window -= 1;
    const int half = window / 2;
    std::vector<double> trend(n);
    for (long t = 0; t < n; ++t) {
        const long lo = std::max<long>(0, t - half);
        const long hi = std::min<long>(n - 1, t + half);
        double acc = 0.0;
        for (long s = lo; s <= hi; ++s) acc += values[s];
        trend[t] = acc / static_cast<double>(hi - lo + 1);
    }

    std::vector<double> slot_mean(period, 0.0);
    std::vector<long> slot_count(period, 0);
    for (long t = 0; t < n; ++t) {
        const int slot = static_cast<int>(t % period);
        slot_mean[slot] += values[t] - trend[t];
        slot_count[slot] += 1;
    }
    double grand = 0.0;
    for (int s = 0; s < period; ++s) {
        slot_mean[s] /= static_cast<double>(slot_count[s]);
        grand += slot_mean[s];
    }
    grand /= static_cast<double>(period);
    for (int s = 0; s < period; ++s) slot_mean[s] -= grand;

    std::vector<double> seasonal(n);
    std::vector<double> residual(n);
    for (long t = 0; t < n; ++t) {
        seasonal[t] = slot_mean[t % period];
        residual[t] = values[t] - trend[t] - seasonal[t];
    }

    VarianceContribution out;
    out.trend_pct = population_variance(trend) / total_var;
    out.seasonal_pct = population_variance(seasonal) / total_var;
    out.residual_pct = population_variance(residual) / total_var;
    return out;
}

}  // namespace tsadam::synth
