#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace tsadam::optim {

enum class Family { SGD, Adam, TSAdam, AdamW, Yogi, Lookahead };

std::string_view family_name(Family family);
std::optional<Family> family_from_name(std::string_view name);

// Hyperparameters for one optimizer instance. TS_Adam is Adam with the
// second-order bias correction switched off; the same switch drives the
// dagger variants of AdamW, Yogi and Lookahead.
struct OptimizerSpec {
    Family family = Family::Adam;
    double alpha = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double weight_decay = 0.0;
    bool second_order_correction = true;
    int lookahead_k = 5;
    double lookahead_alpha = 0.5;
    Family inner_family = Family::Adam;  // consulted for Lookahead only
};

// Spec with the family's conventional defaults and a consistent
// bias-correction flag (false for TSAdam, true otherwise).
OptimizerSpec default_spec(Family family);

// Throws ConfigError naming the offending field.
void validate(const OptimizerSpec& spec);

struct OptimizerState {
    long long t = 0;
    std::vector<double> m;
    std::vector<double> v;
    std::vector<double> slow;  // Lookahead slow weights; filled on first step
    long long flops_accumulated = 0;
};

// Flat parameters with their gradient; the optimizer updates theta in place.
struct ParamView {
    std::span<double> theta;
    std::span<const double> grad;
};

OptimizerState init_state(std::size_t n, const OptimizerSpec& spec);

// One update. Throws NumericalError on non-finite gradients and
// std::invalid_argument on buffer-length mismatches.
void step(const OptimizerSpec& spec, OptimizerState& state, ParamView params);

// Gradient-independent rescaling of the base learning rate at step t:
// sqrt(1 - beta2^t) / (1 - beta1^t) with the second-order correction,
// 1 / (1 - beta1^t) without it. SGD has no modulation and returns 1.
double eff_step_modulation(const OptimizerSpec& spec, long long t);

// Idealized per-step arithmetic cost model, defined for Adam and TSAdam.
struct FlopBreakdown {
    long long mul = 0;
    long long add = 0;
    long long div = 0;
    long long sqrt_ops = 0;
    long long total() const { return mul + add + div + sqrt_ops; }
};

FlopBreakdown flop_breakdown(Family family, std::size_t n);
long long flops_per_step(const OptimizerSpec& spec, std::size_t n);

// Dagger variant: same spec without the second-order bias correction.
// Adam maps to TSAdam (they are the same update once the correction is
// removed); TSAdam is returned unchanged; SGD has no second moment.
OptimizerSpec make_dagger(const OptimizerSpec& spec);

}  // namespace tsadam::optim
