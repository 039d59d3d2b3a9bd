#pragma once
#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "censreg/sample.hpp"
#include "censreg/smoothing.hpp"
#include "censreg/survival.hpp"

namespace censreg {

// At or below this density the ratio r1/ell is reported as undefined
// ("density below threshold") rather than divided out.
inline constexpr double kDensityFloor = 1e-8;

// Divisor source for the inverse-probability weights: none (1, uncensored
// analysis), an analytic survival function evaluated at t, or a product-limit
// curve evaluated as the left limit at t.
using GSource =
    std::variant<std::monostate, std::function<double(double)>, SurvivalCurve>;

double g_divisor(const GSource& g, double t);

struct NwWeights {
    std::vector<double> weights; // one per observation; sum to 1 when defined
    bool defined = false;        // whether sum_j K_d((x - X_j)/h) > 0
};

NwWeights nw_weights(const CensoredSample& sample, const KernelSpec& spec, double h,
                     const std::vector<double>& x);

// (1/(n h^d)) sum_i delta_i t_i / g(t_i) K_d((x - X_i)/h); uncensored terms
// whose divisor is zero are dropped and counted.
double censoring_adjusted_numerator(const CensoredSample& sample,
                                    const KernelSpec& spec, double h,
                                    const std::vector<double>& x, const GSource& g,
                                    std::size_t* dropped = nullptr);

struct PointEstimate {
    std::vector<double> x;
    double ell = 0.0;              // kernel density estimate at x
    double r1 = 0.0;               // censoring-adjusted numerator at x
    std::optional<double> m;       // r1 / ell when ell > kDensityFloor
    std::size_t dropped_terms = 0; // uncensored terms with zero divisor
};

PointEstimate regression_estimate(const CensoredSample& sample, const KernelSpec& spec,
                                  double h, const std::vector<double>& x,
                                  const GSource& g);

// Grid evaluation; the parallel version partitions grid points across OpenMP
// threads and is bit-identical to the serial one.
std::vector<PointEstimate> estimate_on_grid(const CensoredSample& sample,
                                            const KernelSpec& spec, double h,
                                            const EvaluationGrid& grid,
                                            const GSource& g);
std::vector<PointEstimate> estimate_on_grid_serial(const CensoredSample& sample,
                                                   const KernelSpec& spec, double h,
                                                   const EvaluationGrid& grid,
                                                   const GSource& g);

} // namespace censreg
