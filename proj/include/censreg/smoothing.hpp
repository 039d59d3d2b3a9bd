#pragma once
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "censreg/sample.hpp"

namespace censreg {

enum class KernelFamily { gaussian_product, epanechnikov_product };

// Product kernel K_d(u) = prod_j K(u_j) with a declared Hoelder exponent
// gamma (1 for both shipped families).
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian_product;
    std::size_t d = 1;
    double gamma = 1.0;

    static KernelSpec gaussian(std::size_t d = 1);
    static KernelSpec epanechnikov(std::size_t d = 1);
};

// Throws std::invalid_argument on dimension mismatch or non-finite input.
double kernel_eval(const KernelSpec& spec, const std::vector<double>& u);

// Bandwidth selection: either a fixed h or the rate-matched rule
// h_n = c * (log n / n)^{1/(d+2)}.
struct BandwidthRule {
    enum class Kind { fixed, optimal } kind = Kind::fixed;
    double value = 0.0; // h for fixed, c for optimal

    static BandwidthRule fixed(double h);
    static BandwidthRule optimal(double c);
};

// Throws std::invalid_argument("bandwidth undefined") when the rule cannot
// produce a strictly positive h (n < 2 under the optimal rule).
double bandwidth_for(const BandwidthRule& rule, std::size_t n, std::size_t d);

// (1/(n h^d)) sum_i K_d((x - X_i)/h). Throws std::invalid_argument on h <= 0.
double density_estimate(const CensoredSample& sample, const KernelSpec& spec,
                        double h, const std::vector<double>& x);

// Numeric verification that a kernel is a bounded, Lipschitz probability
// density with the moment conditions the rate analysis needs. The weighted
// square integral int (u_1+..+u_d) K^2(u) du is recorded without a pass flag:
// it vanishes for symmetric kernels and is merely required finite.
struct KernelPropertyReport {
    double integral = 0.0;                 // int K_d(u) du
    double abs_first_moment = 0.0;         // int ||u|| K_d(u) du
    double square_integral = 0.0;          // int K_d(u)^2 du
    double weighted_square_integral = 0.0; // int (u_1+..+u_d) K_d(u)^2 du
    double holder_ratio_max = 0.0;         // max |K(u)-K(v)| / ||u-v||^gamma
    double max_value = 0.0;
    bool integrates_to_one = false;
    bool first_moment_finite = false;
    bool square_integrable = false;
    bool lipschitz_gamma = false;
    bool bounded = false;
    bool ok() const {
        return integrates_to_one && first_moment_finite && square_integrable &&
               lipschitz_gamma && bounded;
    }
};

KernelPropertyReport verify_kernel_properties(const KernelSpec& spec, double tol = 1e-6);

// Same checks for an arbitrary 1-D kernel on [-half_width, half_width];
// lets tests feed deliberately broken kernels through the verifier.
KernelPropertyReport verify_kernel_properties(const std::function<double(double)>& k,
                                              double half_width, double gamma,
                                              double tol);

std::string kernel_name(KernelFamily family);
KernelFamily kernel_from_name(const std::string& name);

} // namespace censreg
