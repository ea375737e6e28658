#include "tsadam/optim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tsadam/errors.hpp"

namespace tsadam::optim {

namespace {

bool all_finite(std::span<const double> xs) {
    for (double x : xs) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

// Shared moment-based update for the Adam/AdamW/Yogi branches. The only
// difference between a corrected optimizer and its dagger variant is
// whether v is divided by (1 - beta2^t) before the square root.
void adaptive_update(const OptimizerSpec& spec, Family kind, bool corrected,
                     OptimizerState& state, ParamView params) {
    const std::size_t n = params.theta.size();
    const double t = static_cast<double>(state.t);
    const double bc1 = 1.0 - std::pow(spec.beta1, t);
    const double bc2 = 1.0 - std::pow(spec.beta2, t);

    if (kind == Family::AdamW && spec.weight_decay > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            params.theta[i] -= spec.alpha * spec.weight_decay * params.theta[i];
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const double g = params.grad[i];
        state.m[i] = spec.beta1 * state.m[i] + (1.0 - spec.beta1) * g;
        if (kind == Family::Yogi) {
            const double g2 = g * g;
            const double diff = state.v[i] - g2;
            const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
            state.v[i] = std::max(0.0, state.v[i] - (1.0 - spec.beta2) * sign * g2);
        } else {
            state.v[i] = spec.beta2 * state.v[i] + (1.0 - spec.beta2) * g * g;
        }
        const double m_hat = state.m[i] / bc1;
        const double v_hat = corrected ? state.v[i] / bc2 : state.v[i];
        params.theta[i] -= spec.alpha * m_hat / (std::sqrt(v_hat) + spec.epsilon);
    }
}

void check_field(bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw ConfigError("optimizer spec: field '" + field + "' " + why);
}

}  // namespace

std::string_view family_name(Family family) {
    switch (family) {
        case Family::SGD: return "sgd";
        case Family::Adam: return "adam";
        case Family::TSAdam: return "tsadam";
        case Family::AdamW: return "adamw";
        case Family::Yogi: return "yogi";
        case Family::Lookahead: return "lookahead";
    }
    return "unknown";
}

std::optional<Family> family_from_name(std::string_view name) {
    if (name == "sgd") return Family::SGD;
    if (name == "adam") return Family::Adam;
    if (name == "tsadam" || name == "ts_adam") return Family::TSAdam;
    if (name == "adamw") return Family::AdamW;
    if (name == "yogi") return Family::Yogi;
    if (name == "lookahead") return Family::Lookahead;
    return std::nullopt;
}

OptimizerSpec default_spec(Family family) {
    OptimizerSpec spec;
    spec.family = family;
    spec.second_order_correction = family != Family::TSAdam;
    return spec;
}

void validate(const OptimizerSpec& spec) {
    check_field(spec.alpha > 0.0, "alpha", "must be positive");
    check_field(spec.beta1 >= 0.0 && spec.beta1 < 1.0, "beta1", "must lie in [0, 1)");
    check_field(spec.beta2 >= 0.0 && spec.beta2 < 1.0, "beta2", "must lie in [0, 1)");
    check_field(spec.beta1 <= spec.beta2, "beta1",
                "must not exceed beta2 (requires 0 <= beta1 <= beta2 < 1)");
    check_field(spec.epsilon > 0.0, "epsilon", "must be positive");
    check_field(spec.weight_decay >= 0.0, "weight_decay", "must be nonnegative");
    if (spec.family == Family::TSAdam) {
        check_field(!spec.second_order_correction, "second_order_correction",
                    "must be false for tsadam");
    }
    if (spec.family == Family::Adam) {
        check_field(spec.second_order_correction, "second_order_correction",
                    "must be true for adam (use tsadam or make_dagger to drop it)");
    }
    if (spec.family == Family::Lookahead) {
        check_field(spec.lookahead_k >= 1, "lookahead_k", "must be at least 1");
        check_field(spec.lookahead_alpha > 0.0 && spec.lookahead_alpha <= 1.0,
                    "lookahead_alpha", "must lie in (0, 1]");
        check_field(spec.inner_family != Family::Lookahead, "inner_family",
                    "must not nest lookahead");
        if (spec.inner_family == Family::TSAdam) {
            check_field(!spec.second_order_correction, "second_order_correction",
                        "must be false when the inner optimizer is tsadam");
        }
        if (spec.inner_family == Family::Adam) {
            check_field(spec.second_order_correction, "second_order_correction",
                        "must be true when the inner optimizer is adam");
        }
    }
}

OptimizerState init_state(std::size_t n, const OptimizerSpec& spec) {
    if (n == 0) throw ConfigError("optimizer spec: parameter count must be at least 1");
    validate(spec);
    OptimizerState state;
    state.m.assign(n, 0.0);
    state.v.assign(n, 0.0);
    return state;
}

void step(const OptimizerSpec& spec, OptimizerState& state, ParamView params) {
    const std::size_t n = params.theta.size();
    if (params.grad.size() != n) {
        throw std::invalid_argument("optimizer step: theta and grad lengths differ");
    }
    if (state.m.size() != n || state.v.size() != n) {
        throw std::invalid_argument("optimizer step: state buffers do not match parameter count");
    }
    if (!all_finite(params.grad)) {
        throw NumericalError("optimizer step: non-finite gradient, step rejected");
    }

    if (spec.family == Family::Lookahead && state.slow.empty()) {
        state.slow.assign(params.theta.begin(), params.theta.end());
    }

    ++state.t;

    switch (spec.family) {
        case Family::SGD:
            for (std::size_t i = 0; i < n; ++i) {
                params.theta[i] -= spec.alpha * params.grad[i];
            }
            break;
        case Family::Adam:
        case Family::TSAdam:
        case Family::AdamW:
        case Family::Yogi:
            adaptive_update(spec, spec.family == Family::TSAdam ? Family::Adam : spec.family,
                            spec.second_order_correction, state, params);
            break;
        case Family::Lookahead: {
            const Family inner =
                spec.inner_family == Family::TSAdam ? Family::Adam : spec.inner_family;
            if (inner == Family::SGD) {
                for (std::size_t i = 0; i < n; ++i) {
                    params.theta[i] -= spec.alpha * params.grad[i];
                }
            } else {
                adaptive_update(spec, inner, spec.second_order_correction, state, params);
            }
            if (state.t % spec.lookahead_k == 0) {
                for (std::size_t i = 0; i < n; ++i) {
                    state.slow[i] += spec.lookahead_alpha * (params.theta[i] - state.slow[i]);
                    params.theta[i] = state.slow[i];
                }
            }
            break;
        }
    }

    if (spec.family == Family::Adam || spec.family == Family::TSAdam) {
        state.flops_accumulated += flops_per_step(spec, n);
    }
}

double eff_step_modulation(const OptimizerSpec& spec, long long t) {
    if (t < 1) throw std::invalid_argument("eff_step_modulation: t must be at least 1");
    if (spec.family == Family::SGD) return 1.0;
    const double td = static_cast<double>(t);
    const double bc1 = 1.0 - std::pow(spec.beta1, td);
    if (!spec.second_order_correction) return 1.0 / bc1;
    return std::sqrt(1.0 - std::pow(spec.beta2, td)) / bc1;
}

FlopBreakdown flop_breakdown(Family family, std::size_t n) {
    const long long nn = static_cast<long long>(n);
    if (family == Family::Adam) {
        return {6 * nn, 3 * nn, 2 * nn, nn};
    }
    if (family == Family::TSAdam) {
        return {6 * nn, 3 * nn, nn, nn};
    }
    throw std::invalid_argument("flop accounting is defined only for adam and tsadam");
}

long long flops_per_step(const OptimizerSpec& spec, std::size_t n) {
    if (n == 0) throw std::invalid_argument("flops_per_step: n must be at least 1");
    return flop_breakdown(spec.family, n).total();
}

OptimizerSpec make_dagger(const OptimizerSpec& spec) {
    if (spec.family == Family::SGD) {
        throw std::invalid_argument("make_dagger: sgd keeps no second moment to uncorrect");
    }
    OptimizerSpec out = spec;
    if (spec.family == Family::Adam) {
        out.family = Family::TSAdam;  // Adam minus the correction is exactly TSAdam
    }
    out.second_order_correction = false;
    if (out.family == Family::Lookahead && out.inner_family == Family::Adam) {
        out.inner_family = Family::TSAdam;
    }
    return out;
}

}  // namespace tsadam::optim
