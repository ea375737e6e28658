#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tsadam::synth {

// Additive trend + seasonal + residual generator. The trend is a Gaussian
// random walk started at trend_start, the seasonal pattern repeats with
// the given period and sums to zero, the residual is i.i.d. Gaussian.
struct SeriesSpec {
    double trend_start = 0.0;
    double sigma_eps = 0.0;   // trend innovation stddev
    double sigma_r = 0.0;     // residual stddev
    int period = 1;
    std::vector<double> seasonal;  // length == period, zero-sum
    long length = 1;
    std::uint64_t seed = 0;
};

// Throws ConfigError (non-zero-sum seasonal, bad sizes, negative stddevs).
void validate(const SeriesSpec& spec);

struct SeriesSample {
    std::vector<double> values;
    // Components, retained when requested; values = trend + seasonal + residual.
    std::vector<double> trend;
    std::vector<double> seasonal;
    std::vector<double> residual;
};

// Seasonal slot for 1-based time t, anchoring the first pattern entry at t=1.
// Returns a 0-based index into SeriesSpec::seasonal.
inline int seasonal_slot(long t, int period) {
    return static_cast<int>((t - 1) % period);
}

// Deterministic under spec.seed. Draw order: trend innovations for
// t = 2..T first, then residuals for t = 1..T.
SeriesSample generate(const SeriesSpec& spec, bool keep_components = true);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

// Closed-form marginal moments of the observation at 1-based time t:
// mean = trend_start + seasonal slot, variance = (t-1)*sigma_eps^2 + sigma_r^2.
Moments theoretical_moments(const SeriesSpec& spec, long t);

struct MomentCheck {
    double z_mean = 0.0;
    double z_var = 0.0;
    bool pass = false;
};

// Monte Carlo check of sample mean/variance at time t against arbitrary
// oracle values; z_var uses the Gaussian chi-square standard error.
MomentCheck moment_check_against(const SeriesSpec& spec, long t, long replicates,
                                 double mean_oracle, double var_oracle);

// Same check against the closed-form moments. pass iff both |z| <= 3.
MomentCheck empirical_moment_check(const SeriesSpec& spec, long t, long replicates);

struct VarianceContribution {
    double trend_pct = 0.0;
    double seasonal_pct = 0.0;
    double residual_pct = 0.0;
};

// Moving-average decomposition: trend = centered MA whose window is
// period+1 adjusted down to the nearest odd width; seasonal = per-slot
// mean of the detrended series re-centered to zero sum; residual = rest.
// Each contribution is var(component) / var(input); the three need not
// sum to one. Throws DegenerateInputError on constant input.
VarianceContribution variance_contributions(std::span<const double> values, int period);

}  // namespace tsadam::synth
