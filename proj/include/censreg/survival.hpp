#pragma once
#include <functional>
#include <vector>

#include "censreg/sample.hpp"

namespace censreg {

// Right-continuous step function on the reals with values in [0, 1].
// The value is 1 before the first jump and forced to 0 at and beyond
// top_time (the largest observation).
struct SurvivalCurve {
    std::vector<double> jump_times;        // strictly ascending
    std::vector<double> values_after_jump; // value on [jump_times[k], next jump)
    std::size_t sample_size = 0;
    double top_time = 0.0;
};

enum class Side { right, left };

// Product-limit estimate of the censoring survival function: the factor
// (1 - (1-delta_(i)) / (n-i+1)) is applied at the i-th order statistic of t,
// with delta = 1 observations preceding delta = 0 at tied times.
// Throws std::invalid_argument on an empty sample or non-finite times.
SurvivalCurve km_censoring_survival(const CensoredSample& sample);

// Step-function evaluation; side = left gives the left limit at t.
double survival_at(const SurvivalCurve& curve, double t, Side side = Side::right);

// sup over t <= tau of |curve(t) - reference(t)|, exact for piecewise-constant
// curves: the candidates are right values and left limits at every jump point
// up to tau, plus tau itself.
double km_sup_distance(const SurvivalCurve& curve, const SurvivalCurve& reference,
                       double tau);

// Same against an analytic survival function, which must be non-increasing;
// segment endpoints then bound each monotone piece exactly.
double km_sup_distance(const SurvivalCurve& curve,
                       const std::function<double(double)>& reference, double tau);

} // namespace censreg
