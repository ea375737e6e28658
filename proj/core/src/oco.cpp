#include "tsadam/oco.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tsadam/rng.hpp"

namespace tsadam::oco {

namespace {

double norm2(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc;
}

void check_schedule(std::span<const double> eta, long horizon) {
    if (static_cast<long>(eta.size()) < horizon) {
        throw std::invalid_argument("ogd: schedule shorter than horizon");
    }
    for (long t = 0; t < horizon; ++t) {
        if (!(eta[t] > 0.0) || eta[t] > 1.0) {
            throw std::invalid_argument("ogd: step sizes must lie in (0, 1]");
        }
    }
}

}  // namespace

std::span<const double> DriftScenario::minimizer(long t) const {
    if (t < 1 || t > horizon) {
        throw std::invalid_argument("drift scenario: round out of [1, horizon]");
    }
    return {minimizers.data() + (t - 1) * dim, static_cast<size_t>(dim)};
}

std::vector<double> make_drift_path(int dim, long horizon, double delta,
                                    std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("drift path: dim must be >= 1");
    if (horizon < 1) throw std::invalid_argument("drift path: horizon must be >= 1");
    if (!(delta >= 0.0)) throw std::invalid_argument("drift path: delta must be >= 0");

    std::vector<double> path(static_cast<size_t>(horizon) * dim, 0.0);
    if (delta == 0.0) return path;

    Rng rng(seed);
    std::vector<double> dir(dim);
    for (long t = 1; t < horizon; ++t) {
        double len = 0.0;
        do {
            for (int i = 0; i < dim; ++i) dir[i] = rng.normal();
            len = std::sqrt(norm2(dir));
        } while (len < 1e-12);
        for (int i = 0; i < dim; ++i) {
            path[t * dim + i] = path[(t - 1) * dim + i] + delta * dir[i] / len;
        }
    }
    return path;
}

DriftScenario make_scenario(int dim, long horizon, double delta, double curvature,
                            double grad_bound, std::uint64_t seed) {
    if (!(curvature > 0.0)) throw std::invalid_argument("scenario: curvature must be > 0");
    if (!(grad_bound > 0.0)) throw std::invalid_argument("scenario: grad bound must be > 0");
    DriftScenario sc;
    sc.dim = dim;
    sc.horizon = horizon;
    sc.delta = delta;
    sc.curvature = curvature;
    sc.grad_bound = grad_bound;
    sc.seed = seed;
    sc.minimizers = make_drift_path(dim, horizon, delta, seed);
    return sc;
}

std::vector<double> constant_schedule(long horizon, double eta) {
    if (horizon < 1) throw std::invalid_argument("schedule: horizon must be >= 1");
    return std::vector<double>(horizon, eta);
}

std::vector<double> inv_sqrt_schedule(long horizon, double base) {
    if (horizon < 1) throw std::invalid_argument("schedule: horizon must be >= 1");
    std::vector<double> eta(horizon);
    for (long t = 0; t < horizon; ++t) {
        eta[t] = base / std::sqrt(static_cast<double>(t + 1));
    }
    return eta;
}

RegretLedger run_ogd(const DriftScenario& sc, std::span<const double> eta,
                     std::span<const double> theta1) {
    check_schedule(eta, sc.horizon);
    if (static_cast<int>(theta1.size()) != sc.dim) {
        throw std::invalid_argument("ogd: initial point dimension mismatch");
    }

    RegretLedger ledger;
    ledger.per_step_loss.resize(sc.horizon);
    ledger.per_step_optimal.assign(sc.horizon, 0.0);
    ledger.cumulative_regret.resize(sc.horizon);
    ledger.eta_sequence.assign(eta.begin(), eta.begin() + sc.horizon);

    std::vector<double> theta(theta1.begin(), theta1.end());
    std::vector<double> grad(sc.dim);
    double cum = 0.0;
    for (long t = 1; t <= sc.horizon; ++t) {
        const std::span<const double> star = sc.minimizer(t);
        double err2 = 0.0;
        for (int i = 0; i < sc.dim; ++i) {
            grad[i] = sc.curvature * (theta[i] - star[i]);
            err2 += (theta[i] - star[i]) * (theta[i] - star[i]);
        }
        const double loss = 0.5 * sc.curvature * err2;
        const double gnorm = std::sqrt(norm2(grad));
        if (gnorm > sc.grad_bound) {
            const double scale = sc.grad_bound / gnorm;
            for (double& g : grad) g *= scale;
        }
        const double step = eta[t - 1];
        for (int i = 0; i < sc.dim; ++i) theta[i] -= step * grad[i];

        ledger.per_step_loss[t - 1] = loss;
        cum += loss;
        ledger.cumulative_regret[t - 1] = cum;
    }
    ledger.final_theta = std::move(theta);
    return ledger;
}

BoundBreakdown regret_bound_terms(double initial_distance, double grad_bound,
                                  double delta, std::span<const double> eta) {
    if (eta.empty()) throw std::invalid_argument("regret bound: empty schedule");
    for (double e : eta) {
        if (!(e > 0.0)) throw std::invalid_argument("regret bound: step sizes must be > 0");
    }
    const double horizon = static_cast<double>(eta.size());
    double sum_eta = 0.0;
    double sum_inv = 0.0;
    for (double e : eta) {
        sum_eta += e;
        sum_inv += 1.0 / e;
    }
    BoundBreakdown b;
    b.initial_error = initial_distance * initial_distance / (2.0 * eta[0]);
    b.noise_term = 0.5 * grad_bound * grad_bound * sum_eta;
    b.drift_term = delta * sum_inv;
    b.drift_noise_term = grad_bound * delta * horizon - 0.5 * delta * delta * horizon;
    b.total = b.initial_error + b.noise_term + b.drift_term + b.drift_noise_term;
    return b;
}

BoundBreakdown regret_bound(const DriftScenario& sc, std::span<const double> eta,
                            std::span<const double> theta1) {
    check_schedule(eta, sc.horizon);
    if (static_cast<int>(theta1.size()) != sc.dim) {
        throw std::invalid_argument("regret bound: initial point dimension mismatch");
    }
    const std::span<const double> star = sc.minimizer(1);
    double d2 = 0.0;
    for (int i = 0; i < sc.dim; ++i) d2 += (theta1[i] - star[i]) * (theta1[i] - star[i]);
    return regret_bound_terms(std::sqrt(d2), sc.grad_bound, sc.delta,
                              eta.subspan(0, sc.horizon));
}

CertifyResult certify_bound(const DriftScenario& sc, std::span<const double> eta,
                            std::span<const double> theta1,
                            std::optional<double> reported_delta) {
    const double delta = reported_delta.value_or(sc.delta);
    CertifyResult res;
    res.ledger = run_ogd(sc, eta, theta1);
    res.small_drift_ok =
        sc.grad_bound * delta - 0.5 * delta * delta >= 0.0;

    const std::span<const double> star = sc.minimizer(1);
    double d2 = 0.0;
    for (int i = 0; i < sc.dim; ++i) d2 += (theta1[i] - star[i]) * (theta1[i] - star[i]);
    const double initial = d2 / (2.0 * eta[0]);
    const double per_round_drift_noise =
        sc.grad_bound * delta - 0.5 * delta * delta;

    res.bound_prefix.resize(sc.horizon);
    res.margin.resize(sc.horizon);
    res.holds = true;
    double sum_eta = 0.0;
    double sum_inv = 0.0;
    for (long t = 1; t <= sc.horizon; ++t) {
        sum_eta += eta[t - 1];
        sum_inv += 1.0 / eta[t - 1];
        const double bound = initial +
                             0.5 * sc.grad_bound * sc.grad_bound * sum_eta +
                             delta * sum_inv +
                             per_round_drift_noise * static_cast<double>(t);
        res.bound_prefix[t - 1] = bound;
        res.margin[t - 1] = bound - res.ledger.cumulative_regret[t - 1];
        if (res.margin[t - 1] < 0.0) res.holds = false;
    }
    res.breakdown = regret_bound_terms(std::sqrt(d2), sc.grad_bound, delta,
                                       eta.subspan(0, sc.horizon));
    return res;
}

std::vector<double> training_regret(std::span<const double> losses) {
    if (losses.empty()) throw std::invalid_argument("training regret: empty loss series");
    double best = losses[0];
    for (double v : losses) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("training regret: non-finite loss entry");
        }
        best = std::min(best, v);
    }
    std::vector<double> regret(losses.size());
    double cum = 0.0;
    for (size_t i = 0; i < losses.size(); ++i) {
        cum += losses[i] - best;
        regret[i] = cum;
    }
    return regret;
}

}  // namespace tsadam::oco
