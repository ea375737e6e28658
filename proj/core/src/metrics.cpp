#include "tsadam/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "tsadam/errors.hpp"

namespace tsadam::train {

MetricsFragment metrics(std::span<const double> pred, std::span<const double> actual,
                        std::span<const double> insample, int seasonality) {
    if (pred.size() != actual.size() || pred.empty()) {
        throw std::invalid_argument("metrics: pred/actual must be nonempty equal-length");
    }
    MetricsFragment out;
    const double inv_h = 1.0 / static_cast<double>(pred.size());
    for (size_t j = 0; j < pred.size(); ++j) {
        const double e = pred[j] - actual[j];
        out.mse += e * e;
        out.mae += std::abs(e);
        const double denom = std::abs(pred[j]) + std::abs(actual[j]);
        if (denom > 0.0) out.smape += std::abs(e) / denom;
    }
    out.mse *= inv_h;
    out.mae *= inv_h;
    out.smape *= 200.0 * inv_h;

    if (!insample.empty()) {
        if (seasonality < 1) {
            throw std::invalid_argument("metrics: seasonality must be >= 1");
        }
        const long n = static_cast<long>(insample.size());
        if (n <= seasonality) {
            throw std::invalid_argument("metrics: insample must be longer than seasonality");
        }
        double scale = 0.0;
        for (long t = seasonality; t < n; ++t) {
            scale += std::abs(insample[t] - insample[t - seasonality]);
        }
        scale /= static_cast<double>(n - seasonality);
        if (scale == 0.0) {
            throw DegenerateInputError(
                "metrics: insample is constant at the seasonal lag, MASE undefined");
        }
        out.mase = out.mae / scale;
    }
    return out;
}

double reg_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("incomplete beta: a, b must be > 0");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("incomplete beta: x must lie in [0, 1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    // Continued fraction (modified Lentz); converges fast for
    // x <= (a+1)/(a+b+2), use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) otherwise.
    // The comparison must be strict: at x exactly equal to the threshold the
    // swapped arguments sit exactly on their own threshold too, and a >= test
    // would recurse forever.
    if (x > (a + 1.0) / (a + b + 2.0)) {
        return 1.0 - reg_incomplete_beta(b, a, 1.0 - x);
    }
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) +
                                  std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b));
    const double tiny = 1e-300;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const double m2 = 2.0 * m;
        double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + num * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + num * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 3e-14) break;
    }
    return front * h / a;
}

double student_t_two_sided_p(double t, long df) {
    if (df < 1) throw std::invalid_argument("t-test: df must be >= 1");
    const double nu = static_cast<double>(df);
    const double x = nu / (nu + t * t);
    return reg_incomplete_beta(0.5 * nu, 0.5, x);
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b,
                         int comparisons) {
    if (a.size() != b.size() || a.size() < 2) {
        throw std::invalid_argument("paired t-test: need equal-length samples, n >= 2");
    }
    if (comparisons < 1) {
        throw std::invalid_argument("paired t-test: comparisons must be >= 1");
    }
    const long n = static_cast<long>(a.size());
    double mean = 0.0;
    for (long i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (long i = 0; i < n; ++i) {
        const double d = a[i] - b[i] - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) {
        throw DegenerateInputError("paired t-test: zero-variance differences");
    }
    TTestResult res;
    res.df = n - 1;
    res.t_stat = mean / (sd / std::sqrt(static_cast<double>(n)));
    res.p_value = student_t_two_sided_p(res.t_stat, res.df);
    res.significant = res.p_value < 0.05 / comparisons;
    return res;
}

Aggregate aggregate(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("aggregate: empty sample");
    Aggregate agg;
    for (double x : xs) agg.mean += x;
    agg.mean /= static_cast<double>(xs.size());
    if (xs.size() >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - agg.mean) * (x - agg.mean);
        agg.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return agg;
}

}  // namespace tsadam::train
