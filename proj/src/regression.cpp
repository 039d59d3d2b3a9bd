#include "censreg/regression.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "kernel_detail.hpp"

namespace censreg {

double g_divisor(const GSource& g, double t) {
    if (std::holds_alternative<std::monostate>(g)) return 1.0;
    if (const auto* fn = std::get_if<std::function<double(double)>>(&g)) {
        double v = (*fn)(t);
        if (!(v >= 0.0) || !(v <= 1.0))
            throw std::invalid_argument("survival function value outside [0,1]");
        return v;
    }
    return survival_at(std::get<SurvivalCurve>(g), t, Side::left);
}

namespace {

void check_inputs(const CensoredSample& sample, const KernelSpec& spec, double h,
                  const std::vector<double>& x) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("bandwidth must be positive");
    if (x.size() != spec.d || sample.d != spec.d)
        throw std::invalid_argument("dimension mismatch");
}

// Oracle survival functions must be non-increasing; one ordered pair per
// estimate call keeps the cost trivial while catching sign mistakes.
void spot_check_monotone(const GSource& g, const CensoredSample& sample) {
    const auto* fn = std::get_if<std::function<double(double)>>(&g);
    if (!fn || sample.observations.empty()) return;
    double lo = sample.observations.front().t, hi = lo;
    for (const auto& obs : sample.observations) {
        lo = std::min(lo, obs.t);
        hi = std::max(hi, obs.t);
    }
    if ((*fn)(lo) < (*fn)(hi))
        throw std::invalid_argument("survival function must be non-increasing");
}

} // namespace

NwWeights nw_weights(const CensoredSample& sample, const KernelSpec& spec, double h,
                     const std::vector<double>& x) {
    check_inputs(sample, spec, h, x);
    NwWeights w;
    w.weights.resize(sample.size(), 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double k = detail::kernel_shifted(spec, x.data(), sample.observations[i].x.data(), h);
        w.weights[i] = k;
        sum += k;
    }
    w.defined = sum > 0.0;
    if (w.defined)
        for (double& wi : w.weights) wi /= sum;
    else
        for (double& wi : w.weights) wi = 0.0;
    return w;
}

double censoring_adjusted_numerator(const CensoredSample& sample,
                                    const KernelSpec& spec, double h,
                                    const std::vector<double>& x, const GSource& g,
                                    std::size_t* dropped) {
    check_inputs(sample, spec, h, x);
    spot_check_monotone(g, sample);
    double acc = 0.0;
    std::size_t zero_divisors = 0;
    for (const auto& obs : sample.observations) {
        if (obs.delta != 1) continue;
        double k = detail::kernel_shifted(spec, x.data(), obs.x.data(), h);
        double gi = g_divisor(g, obs.t);
        if (gi == 0.0) {
            ++zero_divisors;
            continue;
        }
        acc += obs.t / gi * k;
    }
    if (dropped) *dropped = zero_divisors;
    return acc / (static_cast<double>(sample.size()) * detail::pow_dim(h, spec.d));
}

PointEstimate regression_estimate(const CensoredSample& sample, const KernelSpec& spec,
                                  double h, const std::vector<double>& x,
                                  const GSource& g) {
    check_inputs(sample, spec, h, x);
    spot_check_monotone(g, sample);
    // One pass, two accumulators updated in the same order as the standalone
    // density and numerator routines, so the components match them bitwise.
    double acc_ell = 0.0;
    double acc_r1 = 0.0;
    std::size_t zero_divisors = 0;
    for (const auto& obs : sample.observations) {
        double k = detail::kernel_shifted(spec, x.data(), obs.x.data(), h);
        acc_ell += k;
        if (obs.delta != 1) continue;
        double gi = g_divisor(g, obs.t);
        if (gi == 0.0) {
            ++zero_divisors;
            continue;
        }
        acc_r1 += obs.t / gi * k;
    }
    double norm = static_cast<double>(sample.size()) * detail::pow_dim(h, spec.d);
    PointEstimate est;
    est.x = x;
    est.ell = acc_ell / norm;
    est.r1 = acc_r1 / norm;
    est.dropped_terms = zero_divisors;
    if (est.ell > kDensityFloor) est.m = est.r1 / est.ell;
    return est;
}

namespace {

std::vector<PointEstimate> grid_run(const CensoredSample& sample, const KernelSpec& spec,
                                    double h, const EvaluationGrid& grid,
                                    const GSource& g, bool parallel) {
    validate_grid(grid);
    if (grid.size() == 0) throw std::invalid_argument("empty grid");
    std::vector<PointEstimate> out(grid.size());
    const long long total = static_cast<long long>(grid.size());
    if (parallel) {
        std::atomic<bool> failed{false};
        std::exception_ptr err;
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < total; ++i) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                out[static_cast<std::size_t>(i)] = regression_estimate(
                    sample, spec, h, grid.point(static_cast<std::size_t>(i)), g);
            } catch (...) {
                bool expected = false;
                if (failed.compare_exchange_strong(expected, true))
                    err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (long long i = 0; i < total; ++i)
            out[static_cast<std::size_t>(i)] = regression_estimate(
                sample, spec, h, grid.point(static_cast<std::size_t>(i)), g);
    }
    return out;
}

} // namespace

std::vector<PointEstimate> estimate_on_grid(const CensoredSample& sample,
                                            const KernelSpec& spec, double h,
                                            const EvaluationGrid& grid,
                                            const GSource& g) {
    return grid_run(sample, spec, h, grid, g, true);
}

std::vector<PointEstimate> estimate_on_grid_serial(const CensoredSample& sample,
                                                   const KernelSpec& spec, double h,
                                                   const EvaluationGrid& grid,
                                                   const GSource& g) {
    return grid_run(sample, spec, h, grid, g, false);
}

} // namespace censreg
