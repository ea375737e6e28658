#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "tsadam/errors.hpp"
#include "tsadam/rng.hpp"
#include "tsadam/synth.hpp"

using namespace tsadam;

namespace {

synth::SeriesSpec basic_spec() {
    synth::SeriesSpec spec;
    spec.trend_start = 2.0;
    spec.sigma_eps = 0.1;
    spec.sigma_r = 0.5;
    spec.period = 2;
    spec.seasonal = {1.0, -1.0};
    spec.length = 64;
    spec.seed = 42;
    return spec;
}

}  // namespace

TEST_CASE("seasonal slot anchors the pattern at t=1 and wraps") {
    CHECK(synth::seasonal_slot(1, 4) == 0);
    CHECK(synth::seasonal_slot(4, 4) == 3);
    CHECK(synth::seasonal_slot(5, 4) == 0);
    CHECK(synth::seasonal_slot(9, 4) == 0);
}

TEST_CASE("spec validation rejects malformed inputs") {
    synth::SeriesSpec spec = basic_spec();
    spec.seasonal = {1.0, -0.5};  // sums to 0.5
    CHECK_THROWS_WITH_AS(synth::validate(spec), doctest::Contains("sum to zero"),
                         ConfigError);

    spec = basic_spec();
    spec.seasonal = {1.0, -1.0, 0.0};
    CHECK_THROWS_AS(synth::validate(spec), ConfigError);

    spec = basic_spec();
    spec.sigma_eps = -0.1;
    CHECK_THROWS_AS(synth::validate(spec), ConfigError);

    spec = basic_spec();
    spec.length = 0;
    CHECK_THROWS_AS(synth::validate(spec), ConfigError);

    spec = basic_spec();
    spec.period = 0;
    spec.seasonal = {};
    CHECK_THROWS_AS(synth::validate(spec), ConfigError);

    CHECK_NOTHROW(synth::validate(basic_spec()));
}

TEST_CASE("noise-free generation is exactly trend plus seasonal") {
    synth::SeriesSpec spec = basic_spec();
    spec.trend_start = 5.0;
    spec.sigma_eps = 0.0;
    spec.sigma_r = 0.0;
    spec.length = 4;
    const synth::SeriesSample sample = synth::generate(spec);
    CHECK(sample.values == std::vector<double>{6.0, 4.0, 6.0, 4.0});
    CHECK(sample.trend == std::vector<double>{5.0, 5.0, 5.0, 5.0});
    CHECK(sample.seasonal == std::vector<double>{1.0, -1.0, 1.0, -1.0});
    CHECK(sample.residual == std::vector<double>{0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("components always sum to the observed value") {
    const synth::SeriesSample sample = synth::generate(basic_spec());
    for (size_t t = 0; t < sample.values.size(); ++t) {
        CHECK(sample.values[t] ==
              doctest::Approx(sample.trend[t] + sample.seasonal[t] + sample.residual[t])
                  .epsilon(1e-15));
    }
}

TEST_CASE("generation is deterministic per seed and varies across seeds") {
    const synth::SeriesSample a = synth::generate(basic_spec());
    const synth::SeriesSample b = synth::generate(basic_spec());
    CHECK(a.values == b.values);

    synth::SeriesSpec other = basic_spec();
    other.seed = 43;
    const synth::SeriesSample c = synth::generate(other);
    CHECK(a.values != c.values);
}

TEST_CASE("components can be dropped on request") {
    const synth::SeriesSample sample = synth::generate(basic_spec(), false);
    CHECK(!sample.values.empty());
    CHECK(sample.trend.empty());
    CHECK(sample.seasonal.empty());
    CHECK(sample.residual.empty());
}

TEST_CASE("closed-form moments: drifting variance, periodic mean") {
    const synth::SeriesSpec spec = basic_spec();

    // t = 11 sits on seasonal slot 0: mean = 2 + 1, ten accumulated trend
    // innovations: var = 10 * 0.01 + 0.25.
    const synth::Moments m11 = synth::theoretical_moments(spec, 11);
    CHECK(m11.mean == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(m11.variance == doctest::Approx(0.35).epsilon(1e-12));

    const synth::Moments m1 = synth::theoretical_moments(spec, 1);
    CHECK(m1.mean == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(m1.variance == doctest::Approx(0.25).epsilon(1e-12));

    const synth::Moments m2 = synth::theoretical_moments(spec, 2);
    CHECK(m2.mean == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(synth::theoretical_moments(spec, 0), std::invalid_argument);
    CHECK_THROWS_AS(synth::theoretical_moments(spec, spec.length + 1),
                    std::invalid_argument);
}

TEST_CASE("monte carlo moments agree with the closed form") {
    synth::SeriesSpec spec = basic_spec();
    spec.length = 12;
    for (const long t : {1L, 5L, 12L}) {
        const synth::MomentCheck check = synth::empirical_moment_check(spec, t, 4000);
        CHECK(std::abs(check.z_mean) <= 3.0);
        CHECK(std::abs(check.z_var) <= 3.0);
        CHECK(check.pass);
    }
}

TEST_CASE("monte carlo check flags a wrong oracle") {
    synth::SeriesSpec spec = basic_spec();
    spec.length = 6;
    const synth::Moments truth = synth::theoretical_moments(spec, 6);
    const synth::MomentCheck off_mean =
        synth::moment_check_against(spec, 6, 4000, truth.mean + 0.5, truth.variance);
    CHECK(!off_mean.pass);
    const synth::MomentCheck off_var =
        synth::moment_check_against(spec, 6, 4000, truth.mean, truth.variance * 4.0);
    CHECK(!off_var.pass);

    CHECK_THROWS_AS(synth::moment_check_against(spec, 6, 10, truth.mean, truth.variance),
                    std::invalid_argument);
}

TEST_CASE("variance decomposition attributes a pure seasonal signal") {
    const int period = 12;
    std::vector<double> values(20 * period);
    for (size_t t = 0; t < values.size(); ++t) {
        values[t] = 3.0 * std::sin(2.0 * 3.14159265358979 * (t % period) / period);
    }
    const synth::VarianceContribution c = synth::variance_contributions(values, period);
    CHECK(c.seasonal_pct > 0.9);
    CHECK(c.trend_pct < 0.05);
    CHECK(c.residual_pct < 0.05);
}

TEST_CASE("variance decomposition attributes a pure ramp to the trend") {
    std::vector<double> values(200);
    for (size_t t = 0; t < values.size(); ++t) values[t] = 0.5 * t;
    const synth::VarianceContribution c = synth::variance_contributions(values, 12);
    CHECK(c.trend_pct > 0.95);
    CHECK(c.seasonal_pct < 0.05);
    CHECK(c.residual_pct < 0.05);
}

TEST_CASE("variance decomposition pushes white noise into the residual") {
    Rng rng(12345);
    std::vector<double> values(2400);
    for (double& v : values) v = rng.normal();
    const synth::VarianceContribution c = synth::variance_contributions(values, 12);
    CHECK(c.residual_pct > 0.5);
    CHECK(c.seasonal_pct < 0.25);
}

TEST_CASE("variance decomposition rejects degenerate input") {
    std::vector<double> constant(100, 3.0);
    CHECK_THROWS_AS(synth::variance_contributions(constant, 4), DegenerateInputError);

    std::vector<double> tiny{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(synth::variance_contributions(tiny, 4), std::invalid_argument);
    CHECK_THROWS_AS(synth::variance_contributions(tiny, 0), std::invalid_argument);
}

TEST_CASE("generated signal shares match the configured composition") {
    // A strongly seasonal spec should decompose as mostly seasonal.
    synth::SeriesSpec spec;
    spec.period = 24;
    spec.seasonal.resize(24);
    double sum = 0.0;
    for (int k = 0; k < 24; ++k) {
        spec.seasonal[k] = 3.0 * std::sin(2.0 * 3.14159265358979 * k / 24.0);
        sum += spec.seasonal[k];
    }
    for (int k = 0; k < 24; ++k) spec.seasonal[k] -= sum / 24.0;
    spec.sigma_eps = 0.01;
    spec.sigma_r = 0.1;
    spec.length = 2000;
    spec.seed = 9;
    const synth::SeriesSample sample = synth::generate(spec);
    const synth::VarianceContribution c =
        synth::variance_contributions(sample.values, spec.period);
    CHECK(c.seasonal_pct > 0.7);
}
