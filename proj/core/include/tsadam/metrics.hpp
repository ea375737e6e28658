#pragma once

#include <optional>
#include <span>

namespace tsadam::train {

struct MetricsFragment {
    double mse = 0.0;
    double mae = 0.0;
    double smape = 0.0;          // 0..200 percent scale, 0/0 terms count as 0
    std::optional<double> mase;  // absent without an insample history
};

// Pointwise forecast metrics over one horizon. When insample is nonempty it
// must be longer than seasonality, and the mean absolute seasonal-naive
// difference over it becomes the MASE denominator.
MetricsFragment metrics(std::span<const double> pred, std::span<const double> actual,
                        std::span<const double> insample = {}, int seasonality = 1);

struct TTestResult {
    double t_stat = 0.0;
    long df = 0;
    double p_value = 1.0;
    bool significant = false;
};

// Two-sided paired t-test on the differences a_i - b_i. The significance
// threshold is 0.05 / comparisons (Bonferroni across a comparison family).
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b,
                         int comparisons);

// Regularized incomplete beta I_x(a, b) via the standard continued fraction.
double reg_incomplete_beta(double a, double b, double x);

// Two-sided p-value of a t statistic at df degrees of freedom.
double student_t_two_sided_p(double t, long df);

struct Aggregate {
    double mean = 0.0;
    std::optional<double> stddev;  // absent when fewer than two samples
};

Aggregate aggregate(std::span<const double> xs);

}  // namespace tsadam::train
