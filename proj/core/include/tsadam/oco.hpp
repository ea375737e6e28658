#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tsadam::oco {

// A sequence of isotropic quadratic objectives whose minimizers drift by a
// fixed displacement each round:
//   f_t(theta) = (curvature/2) * ||theta - minimizer_t||^2
// Gradients handed to the learner are clipped to norm grad_bound, so the
// bounded-gradient assumption holds exactly rather than probabilistically.
struct DriftScenario {
    int dim = 1;
    long horizon = 1;
    double delta = 0.0;       // per-round minimizer displacement
    double curvature = 1.0;
    double grad_bound = 1.0;
    std::uint64_t seed = 0;
    std::vector<double> minimizers;  // horizon x dim, row-major

    // Minimizer of round t (1-based).
    std::span<const double> minimizer(long t) const;
};

// Minimizer path starting at the origin. Every consecutive displacement has
// norm exactly delta, in a uniformly random direction; deterministic under
// seed. Returns a horizon x dim row-major array.
std::vector<double> make_drift_path(int dim, long horizon, double delta,
                                    std::uint64_t seed);

DriftScenario make_scenario(int dim, long horizon, double delta, double curvature,
                            double grad_bound, std::uint64_t seed);

// Step-size schedules indexed by 1-based round.
std::vector<double> constant_schedule(long horizon, double eta);
std::vector<double> inv_sqrt_schedule(long horizon, double base);  // base/sqrt(t)

struct RegretLedger {
    std::vector<double> per_step_loss;
    std::vector<double> per_step_optimal;  // identically zero for this family
    std::vector<double> cumulative_regret;
    std::vector<double> eta_sequence;
    std::vector<double> final_theta;
};

// Online gradient descent: theta <- theta - eta_t * clip(grad f_t(theta)).
// Requires 0 < eta_t <= 1 and a schedule covering the whole horizon.
RegretLedger run_ogd(const DriftScenario& sc, std::span<const double> eta,
                     std::span<const double> theta1);

struct BoundBreakdown {
    double initial_error = 0.0;     // ||theta1 - minimizer_1||^2 / (2 eta_1)
    double noise_term = 0.0;        // (G^2/2) sum eta_t
    double drift_term = 0.0;        // delta * sum 1/eta_t
    double drift_noise_term = 0.0;  // G*delta*T - delta^2*T/2
    double total = 0.0;
};

BoundBreakdown regret_bound(const DriftScenario& sc, std::span<const double> eta,
                            std::span<const double> theta1);
BoundBreakdown regret_bound_terms(double initial_distance, double grad_bound,
                                  double delta, std::span<const double> eta);

struct CertifyResult {
    bool holds = false;              // regret <= bound at every prefix
    std::vector<double> margin;      // bound - regret, per prefix
    std::vector<double> bound_prefix;
    RegretLedger ledger;
    BoundBreakdown breakdown;        // full-horizon terms
    // False when G*delta - delta^2/2 < 0, i.e. the drift is too large
    // relative to the gradient bound for the bound to stay monotone.
    bool small_drift_ok = true;
};

// Runs OGD and evaluates the bound at every prefix horizon. reported_delta,
// when given, replaces the scenario's true drift inside the bound only
// (negative controls under-report it; the dynamics keep the true delta).
CertifyResult certify_bound(const DriftScenario& sc, std::span<const double> eta,
                            std::span<const double> theta1,
                            std::optional<double> reported_delta = std::nullopt);

// Cumulative sums of loss_t minus the minimum over the whole series, the
// training-curve notion of regret (comparator = best loss ever achieved).
std::vector<double> training_regret(std::span<const double> losses);

}  // namespace tsadam::oco
