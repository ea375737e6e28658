#include "tsadam/model.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "tsadam/csvio.hpp"
#include "tsadam/errors.hpp"
#include "tsadam/rng.hpp"

namespace tsadam::model {

namespace {

void check_pair(const Forecaster& m, std::span<const double> window,
                std::span<const double> target) {
    if (static_cast<int>(window.size()) != m.lookback()) {
        throw std::invalid_argument("forecaster: window length != lookback");
    }
    if (static_cast<int>(target.size()) != m.horizon()) {
        throw std::invalid_argument("forecaster: target length != horizon");
    }
    for (double v : window) {
        if (!std::isfinite(v)) throw NumericalError("forecaster: non-finite window value");
    }
    for (double v : target) {
        if (!std::isfinite(v)) throw NumericalError("forecaster: non-finite target value");
    }
}

double mse_of(std::span<const double> pred, std::span<const double> target) {
    double acc = 0.0;
    for (size_t j = 0; j < pred.size(); ++j) {
        const double e = pred[j] - target[j];
        acc += e * e;
    }
    return acc / static_cast<double>(pred.size());
}

}  // namespace

LinearForecaster::LinearForecaster(int lookback, int horizon)
    : lookback_(lookback), horizon_(horizon) {
    if (lookback < 1 || horizon < 1) {
        throw std::invalid_argument("linear forecaster: lookback and horizon must be >= 1");
    }
    params_.assign(static_cast<size_t>(horizon) * lookback + horizon, 0.0);
}

void LinearForecaster::forward(std::span<const double> window,
                               std::span<double> out) const {
    if (static_cast<int>(window.size()) != lookback_ ||
        static_cast<int>(out.size()) != horizon_) {
        throw std::invalid_argument("linear forecaster: forward size mismatch");
    }
    const double* w = params_.data();
    const double* b = params_.data() + static_cast<size_t>(horizon_) * lookback_;
    for (int j = 0; j < horizon_; ++j) {
        double acc = b[j];
        const double* row = w + static_cast<size_t>(j) * lookback_;
        for (int i = 0; i < lookback_; ++i) acc += row[i] * window[i];
        out[j] = acc;
    }
}

double LinearForecaster::add_grad_mse(std::span<const double> window,
                                      std::span<const double> target,
                                      std::span<double> grad) const {
    check_pair(*this, window, target);
    if (grad.size() != params_.size()) {
        throw std::invalid_argument("linear forecaster: gradient length mismatch");
    }
    std::vector<double> out(horizon_);
    forward(window, out);
    double* gw = grad.data();
    double* gb = grad.data() + static_cast<size_t>(horizon_) * lookback_;
    double loss = 0.0;
    const double inv_h = 1.0 / static_cast<double>(horizon_);
    for (int j = 0; j < horizon_; ++j) {
        const double e = out[j] - target[j];
        loss += e * e;
        const double dout = 2.0 * e * inv_h;
        double* row = gw + static_cast<size_t>(j) * lookback_;
        for (int i = 0; i < lookback_; ++i) row[i] += dout * window[i];
        gb[j] += dout;
    }
    return loss * inv_h;
}

std::string LinearForecaster::shape_descriptor() const {
    return "linear lookback=" + std::to_string(lookback_) +
           " horizon=" + std::to_string(horizon_);
}

MlpForecaster::MlpForecaster(int lookback, int hidden, int horizon)
    : lookback_(lookback), hidden_(hidden), horizon_(horizon) {
    if (lookback < 1 || hidden < 1 || horizon < 1) {
        throw std::invalid_argument("mlp forecaster: all dimensions must be >= 1");
    }
    const size_t count = static_cast<size_t>(hidden) * lookback + hidden +
                         static_cast<size_t>(horizon) * hidden + horizon;
    params_.assign(count, 0.0);
}

void MlpForecaster::forward(std::span<const double> window,
                            std::span<double> out) const {
    if (static_cast<int>(window.size()) != lookback_ ||
        static_cast<int>(out.size()) != horizon_) {
        throw std::invalid_argument("mlp forecaster: forward size mismatch");
    }
    const double* w1 = params_.data();
    const double* b1 = w1 + static_cast<size_t>(hidden_) * lookback_;
    const double* w2 = b1 + hidden_;
    const double* b2 = w2 + static_cast<size_t>(horizon_) * hidden_;

    std::vector<double> h(hidden_);
    for (int k = 0; k < hidden_; ++k) {
        double acc = b1[k];
        const double* row = w1 + static_cast<size_t>(k) * lookback_;
        for (int i = 0; i < lookback_; ++i) acc += row[i] * window[i];
        h[k] = std::tanh(acc);
    }
    for (int j = 0; j < horizon_; ++j) {
        double acc = b2[j];
        const double* row = w2 + static_cast<size_t>(j) * hidden_;
        for (int k = 0; k < hidden_; ++k) acc += row[k] * h[k];
        out[j] = acc;
    }
}

double MlpForecaster::add_grad_mse(std::span<const double> window,
                                   std::span<const double> target,
                                   std::span<double> grad) const {
    check_pair(*this, window, target);
    if (grad.size() != params_.size()) {
        throw std::invalid_argument("mlp forecaster: gradient length mismatch");
    }
    const double* w1 = params_.data();
    const double* b1 = w1 + static_cast<size_t>(hidden_) * lookback_;
    const double* w2 = b1 + hidden_;
    const double* b2 = w2 + static_cast<size_t>(horizon_) * hidden_;

    std::vector<double> h(hidden_);
    for (int k = 0; k < hidden_; ++k) {
        double acc = b1[k];
        const double* row = w1 + static_cast<size_t>(k) * lookback_;
        for (int i = 0; i < lookback_; ++i) acc += row[i] * window[i];
        h[k] = std::tanh(acc);
    }
    std::vector<double> out(horizon_);
    for (int j = 0; j < horizon_; ++j) {
        double acc = b2[j];
        const double* row = w2 + static_cast<size_t>(j) * hidden_;
        for (int k = 0; k < hidden_; ++k) acc += row[k] * h[k];
        out[j] = acc;
    }

    double* gw1 = grad.data();
    double* gb1 = gw1 + static_cast<size_t>(hidden_) * lookback_;
    double* gw2 = gb1 + hidden_;
    double* gb2 = gw2 + static_cast<size_t>(horizon_) * hidden_;

    double loss = 0.0;
    const double inv_h = 1.0 / static_cast<double>(horizon_);
    std::vector<double> dh(hidden_, 0.0);
    for (int j = 0; j < horizon_; ++j) {
        const double e = out[j] - target[j];
        loss += e * e;
        const double dout = 2.0 * e * inv_h;
        const double* row = w2 + static_cast<size_t>(j) * hidden_;
        double* grow = gw2 + static_cast<size_t>(j) * hidden_;
        for (int k = 0; k < hidden_; ++k) {
            grow[k] += dout * h[k];
            dh[k] += dout * row[k];
        }
        gb2[j] += dout;
    }
    for (int k = 0; k < hidden_; ++k) {
        const double dz = dh[k] * (1.0 - h[k] * h[k]);
        double* grow = gw1 + static_cast<size_t>(k) * lookback_;
        for (int i = 0; i < lookback_; ++i) grow[i] += dz * window[i];
        gb1[k] += dz;
    }
    return loss * inv_h;
}

std::string MlpForecaster::shape_descriptor() const {
    return "mlp lookback=" + std::to_string(lookback_) +
           " hidden=" + std::to_string(hidden_) +
           " horizon=" + std::to_string(horizon_);
}

std::unique_ptr<Forecaster> make_forecaster(const std::string& kind, int lookback,
                                            int hidden, int horizon) {
    if (kind == "linear") return std::make_unique<LinearForecaster>(lookback, horizon);
    if (kind == "mlp") return std::make_unique<MlpForecaster>(lookback, hidden, horizon);
    throw ConfigError("unknown model kind '" + kind + "' (valid: linear, mlp)");
}

double grad_mse(const Forecaster& model, std::span<const double> window,
                std::span<const double> target, std::span<double> grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    return model.add_grad_mse(window, target, grad);
}

double finite_diff_check(Forecaster& model, std::span<const double> window,
                         std::span<const double> target, double h) {
    if (!(h >= 1e-8 && h <= 1e-3)) {
        throw std::invalid_argument("finite diff check: h must lie in [1e-8, 1e-3]");
    }
    std::vector<double> analytic(model.param_count(), 0.0);
    model.add_grad_mse(window, target, analytic);

    std::span<double> params = model.params();
    std::vector<double> out(model.horizon());
    double worst = 0.0;
    for (long p = 0; p < model.param_count(); ++p) {
        const double saved = params[p];
        params[p] = saved + h;
        model.forward(window, out);
        const double up = mse_of(out, target);
        params[p] = saved - h;
        model.forward(window, out);
        const double down = mse_of(out, target);
        params[p] = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double err = std::abs(analytic[p] - numeric) /
                           std::max(1.0, std::abs(analytic[p]));
        worst = std::max(worst, err);
    }
    return worst;
}

void init_params(Forecaster& model, Rng& rng, double scale) {
    for (double& p : model.params()) p = rng.uniform(-scale, scale);
}

void save_checkpoint(const Forecaster& model, const std::string& path) {
    csv::Writer out(path);
    out.raw_line("# " + model.shape_descriptor());
    out.raw_line("param");
    for (double p : model.params()) {
        out.field(p);
        out.end_row();
    }
    out.close();
}

void load_checkpoint(Forecaster& model, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open checkpoint '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "# " + model.shape_descriptor()) {
        throw ConfigError("checkpoint '" + path + "' shape mismatch, expected '" +
                          model.shape_descriptor() + "'");
    }
    if (!std::getline(in, line) || line != "param") {
        throw ParseError("checkpoint '" + path + "': missing 'param' header");
    }
    std::span<double> params = model.params();
    long count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (count >= model.param_count()) {
            throw ParseError("checkpoint '" + path + "': too many values");
        }
        params[count++] = csv::parse_double(line, path, count + 2);
    }
    if (count != model.param_count()) {
        throw ParseError("checkpoint '" + path + "': expected " +
                         std::to_string(model.param_count()) + " values, got " +
                         std::to_string(count));
    }
}

}  // namespace tsadam::model
