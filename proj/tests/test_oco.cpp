#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "tsadam/oco.hpp"

using namespace tsadam;

namespace {

double norm_of(std::span<const double> v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("drift paths start at the origin with exact per-round displacement") {
    const int dim = 3;
    const long horizon = 50;
    const double delta = 0.05;
    const std::vector<double> path = oco::make_drift_path(dim, horizon, delta, 7);
    REQUIRE(path.size() == static_cast<size_t>(dim * horizon));
    for (int i = 0; i < dim; ++i) CHECK(path[i] == 0.0);
    for (long t = 1; t < horizon; ++t) {
        double step_sq = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double d = path[t * dim + i] - path[(t - 1) * dim + i];
            step_sq += d * d;
        }
        CHECK(std::sqrt(step_sq) == doctest::Approx(delta).epsilon(1e-12));
    }

    CHECK(oco::make_drift_path(dim, horizon, delta, 7) == path);
    CHECK(oco::make_drift_path(dim, horizon, delta, 8) != path);

    const std::vector<double> still = oco::make_drift_path(2, 10, 0.0, 3);
    for (const double x : still) CHECK(x == 0.0);
}

TEST_CASE("scenario accessors expose 1-based rounds") {
    const oco::DriftScenario sc = oco::make_scenario(2, 5, 0.1, 1.0, 1.0, 11);
    CHECK(sc.minimizer(1).size() == 2);
    CHECK(sc.minimizer(1)[0] == 0.0);
    CHECK_THROWS_AS(sc.minimizer(0), std::invalid_argument);
    CHECK_THROWS_AS(sc.minimizer(6), std::invalid_argument);
    CHECK_THROWS_AS(oco::make_scenario(2, 5, 0.1, 0.0, 1.0, 11), std::invalid_argument);
}

TEST_CASE("schedules tabulate 1-based step sizes") {
    CHECK(oco::constant_schedule(3, 0.1) == std::vector<double>{0.1, 0.1, 0.1});
    const std::vector<double> inv = oco::inv_sqrt_schedule(4, 0.2);
    CHECK(inv[0] == doctest::Approx(0.2));
    CHECK(inv[1] == doctest::Approx(0.2 / std::sqrt(2.0)));
    CHECK(inv[3] == doctest::Approx(0.1));
    CHECK_THROWS_AS(oco::constant_schedule(0, 0.1), std::invalid_argument);
}

TEST_CASE("gradient descent on a fixed quadratic matches the hand trace") {
    // One-dimensional, minimizer fixed at 1, unit curvature, eta = 1:
    // theta_1 = 0 -> loss 0.5, clipped gradient -1, theta_2 = 1 -> loss 0.
    oco::DriftScenario sc;
    sc.dim = 1;
    sc.horizon = 2;
    sc.delta = 0.0;
    sc.curvature = 1.0;
    sc.grad_bound = 1.0;
    sc.minimizers = {1.0, 1.0};
    const std::vector<double> eta{1.0, 1.0};
    const std::vector<double> theta1{0.0};
    const oco::RegretLedger ledger = oco::run_ogd(sc, eta, theta1);
    REQUIRE(ledger.per_step_loss.size() == 2);
    CHECK(ledger.per_step_loss[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ledger.per_step_loss[1] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ledger.cumulative_regret[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ledger.cumulative_regret[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ledger.final_theta[0] == doctest::Approx(1.0).epsilon(1e-15));
    for (const double opt : ledger.per_step_optimal) CHECK(opt == 0.0);
    CHECK(ledger.eta_sequence == eta);
}

TEST_CASE("distant iterates see a gradient clipped to the bound") {
    // Start 10 away with G = 1: the first step moves by exactly eta * G.
    oco::DriftScenario sc;
    sc.dim = 1;
    sc.horizon = 1;
    sc.curvature = 1.0;
    sc.grad_bound = 1.0;
    sc.minimizers = {0.0};
    const std::vector<double> eta{0.5};
    const oco::RegretLedger ledger = oco::run_ogd(sc, eta, std::vector<double>{10.0});
    CHECK(ledger.final_theta[0] == doctest::Approx(10.0 - 0.5 * 1.0).epsilon(1e-12));
}

TEST_CASE("gradient descent rejects malformed schedules") {
    const oco::DriftScenario sc = oco::make_scenario(1, 5, 0.0, 1.0, 1.0, 1);
    const std::vector<double> theta1{0.0};
    CHECK_THROWS_AS(oco::run_ogd(sc, std::vector<double>{0.1, 0.1}, theta1),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        oco::run_ogd(sc, std::vector<double>{0.1, 0.1, 0.1, 0.1, 1.5}, theta1),
        std::invalid_argument);
    CHECK_THROWS_AS(oco::run_ogd(sc, oco::constant_schedule(5, 0.1),
                                 std::vector<double>{0.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("bound terms reproduce the worked constant-step example") {
    // distance 1, G = 1, eta = 0.1 for T = 10 rounds, delta = 0.01.
    const oco::BoundBreakdown b = oco::regret_bound_terms(
        1.0, 1.0, 0.01, oco::constant_schedule(10, 0.1));
    CHECK(b.initial_error == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(b.noise_term == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(b.drift_term == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.drift_noise_term == doctest::Approx(0.0995).epsilon(1e-12));
    CHECK(b.total == doctest::Approx(6.5995).epsilon(1e-12));
}

TEST_CASE("bound terms trade off against the step size") {
    const auto small = oco::regret_bound_terms(1.0, 1.0, 0.01,
                                               oco::constant_schedule(100, 0.01));
    const auto large = oco::regret_bound_terms(1.0, 1.0, 0.01,
                                               oco::constant_schedule(100, 0.1));
    // Bigger steps absorb drift (smaller drift term) but amplify noise.
    CHECK(large.drift_term < small.drift_term);
    CHECK(large.noise_term > small.noise_term);
    CHECK(large.initial_error < small.initial_error);
    // The drift-noise cross term only depends on T and delta.
    CHECK(large.drift_noise_term == doctest::Approx(small.drift_noise_term));
}

TEST_CASE("certification holds across the default grid scenarios") {
    for (const double delta : {0.0, 0.01, 0.05}) {
        for (const int dim : {1, 10}) {
            const oco::DriftScenario sc =
                oco::make_scenario(dim, 800, delta, 1.0, 1.0, 31 + dim);
            std::vector<double> theta1(dim, 0.0);
            theta1[0] = 1.0;
            for (const std::vector<double>& eta :
                 {oco::constant_schedule(800, 0.01), oco::constant_schedule(800, 0.1),
                  oco::inv_sqrt_schedule(800, 0.2)}) {
                const oco::CertifyResult res = oco::certify_bound(sc, eta, theta1, {});
                CHECK(res.holds);
                CHECK(res.small_drift_ok);
                REQUIRE(res.margin.size() == 800);
                for (const double m : res.margin) CHECK(m >= 0.0);
            }
        }
    }
}

TEST_CASE("certified bound prefix is nondecreasing in the small-drift regime") {
    const oco::DriftScenario sc = oco::make_scenario(4, 300, 0.05, 1.0, 1.0, 77);
    std::vector<double> theta1(4, 0.0);
    theta1[0] = 1.0;
    const oco::CertifyResult res =
        oco::certify_bound(sc, oco::constant_schedule(300, 0.1), theta1, {});
    CHECK(res.small_drift_ok);
    for (size_t t = 1; t < res.bound_prefix.size(); ++t) {
        CHECK(res.bound_prefix[t] >= res.bound_prefix[t - 1]);
    }
    CHECK(res.bound_prefix.back() == doctest::Approx(res.breakdown.total).epsilon(1e-9));
}

TEST_CASE("under-reporting the drift breaks certification") {
    // True drift 0.5 with eta = 0.01: steady-state tracking error is far
    // above what a reported drift of 0.05 can explain.
    const oco::DriftScenario sc = oco::make_scenario(1, 500, 0.5, 1.0, 1.0, 13);
    std::vector<double> theta1{1.0};
    const oco::CertifyResult honest =
        oco::certify_bound(sc, oco::constant_schedule(500, 0.01), theta1, {});
    const oco::CertifyResult lied =
        oco::certify_bound(sc, oco::constant_schedule(500, 0.01), theta1, 0.05);
    CHECK(!lied.holds);
    CHECK(*std::min_element(lied.margin.begin(), lied.margin.end()) < 0.0);
    // The honest bound at this drift level is flagged as outside the
    // small-drift regime rather than silently trusted.
    CHECK(honest.small_drift_ok == (1.0 * 0.5 - 0.5 * 0.5 / 2.0 >= 0.0));
}

TEST_CASE("cumulative regret accumulates the gap to the best loss seen") {
    const std::vector<double> losses{3.0, 2.0, 1.0};
    const std::vector<double> regret = oco::training_regret(losses);
    REQUIRE(regret.size() == 3);
    CHECK(regret[0] == doctest::Approx(2.0));
    CHECK(regret[1] == doctest::Approx(3.0));
    CHECK(regret[2] == doctest::Approx(3.0));

    const std::vector<double> flat{1.0, 1.0};
    const std::vector<double> zero = oco::training_regret(flat);
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);

    CHECK_THROWS_AS(oco::training_regret(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(oco::training_regret(std::vector<double>{1.0, std::nan("")}),
                    std::invalid_argument);
}
