#pragma once
#include <cmath>

#include "censreg/smoothing.hpp"

namespace censreg::detail {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;

inline double kernel1(KernelFamily family, double u) {
    if (family == KernelFamily::gaussian_product)
        return kInvSqrt2Pi * std::exp(-0.5 * u * u);
    return std::fabs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

// K_d((x - xi)/h) without temporary buffers; all callers scale by the same
// division so grid paths agree bitwise.
inline double kernel_shifted(const KernelSpec& spec, const double* x, const double* xi,
                             double h) {
    double k = 1.0;
    for (std::size_t j = 0; j < spec.d; ++j)
        k *= kernel1(spec.family, (x[j] - xi[j]) / h);
    return k;
}

inline double pow_dim(double h, std::size_t d) {
    double v = 1.0;
    for (std::size_t j = 0; j < d; ++j) v *= h;
    return v;
}

} // namespace censreg::detail
