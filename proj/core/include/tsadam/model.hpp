#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace tsadam {
class Rng;
}

namespace tsadam::model {

// Forecasters map a lookback window to a horizon-length forecast and expose
// their parameters as one flat array (layer by layer, row-major weights
// before biases) so a single optimizer state covers the whole model.
class Forecaster {
  public:
    virtual ~Forecaster() = default;

    virtual int lookback() const = 0;
    virtual int horizon() const = 0;
    virtual long param_count() const = 0;
    virtual std::span<double> params() = 0;
    virtual std::span<const double> params() const = 0;

    virtual void forward(std::span<const double> window,
                         std::span<double> out) const = 0;

    // Adds d(mse)/d(params) for one (window, target) pair into grad and
    // returns the loss, mse = mean over the horizon of squared error.
    virtual double add_grad_mse(std::span<const double> window,
                                std::span<const double> target,
                                std::span<double> grad) const = 0;

    // One-line shape summary, also used as the checkpoint header.
    virtual std::string shape_descriptor() const = 0;
};

// out = W * window + b, with W stored row-major (horizon x lookback).
class LinearForecaster final : public Forecaster {
  public:
    LinearForecaster(int lookback, int horizon);

    int lookback() const override { return lookback_; }
    int horizon() const override { return horizon_; }
    long param_count() const override { return static_cast<long>(params_.size()); }
    std::span<double> params() override { return params_; }
    std::span<const double> params() const override { return params_; }
    void forward(std::span<const double> window, std::span<double> out) const override;
    double add_grad_mse(std::span<const double> window, std::span<const double> target,
                        std::span<double> grad) const override;
    std::string shape_descriptor() const override;

  private:
    int lookback_;
    int horizon_;
    std::vector<double> params_;  // [W row-major | b]
};

// One hidden tanh layer: out = W2 * tanh(W1 * window + b1) + b2.
// Flat order: W1 (hidden x lookback, row-major), b1, W2 (horizon x hidden), b2.
class MlpForecaster final : public Forecaster {
  public:
    MlpForecaster(int lookback, int hidden, int horizon);

    int lookback() const override { return lookback_; }
    int horizon() const override { return horizon_; }
    int hidden() const { return hidden_; }
    long param_count() const override { return static_cast<long>(params_.size()); }
    std::span<double> params() override { return params_; }
    std::span<const double> params() const override { return params_; }
    void forward(std::span<const double> window, std::span<double> out) const override;
    double add_grad_mse(std::span<const double> window, std::span<const double> target,
                        std::span<double> grad) const override;
    std::string shape_descriptor() const override;

  private:
    int lookback_;
    int hidden_;
    int horizon_;
    std::vector<double> params_;
};

std::unique_ptr<Forecaster> make_forecaster(const std::string& kind, int lookback,
                                            int hidden, int horizon);

// Zeroes grad, then delegates to add_grad_mse.
double grad_mse(const Forecaster& model, std::span<const double> window,
                std::span<const double> target, std::span<double> grad);

// Central-difference check of add_grad_mse over every flat coordinate.
// Returns max over coordinates of |analytic - numeric| / max(1, |analytic|).
// h must lie in [1e-8, 1e-3].
double finite_diff_check(Forecaster& model, std::span<const double> window,
                         std::span<const double> target, double h);

// Uniform(-scale, scale) init of every parameter.
void init_params(Forecaster& model, Rng& rng, double scale);

// Flat parameter CSV with the shape descriptor as a comment header line.
void save_checkpoint(const Forecaster& model, const std::string& path);
void load_checkpoint(Forecaster& model, const std::string& path);

}  // namespace tsadam::model
