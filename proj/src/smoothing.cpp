#include "censreg/smoothing.hpp"

#include <cmath>
#include <stdexcept>

#include "kernel_detail.hpp"

namespace censreg {

KernelSpec KernelSpec::gaussian(std::size_t d) {
    return {KernelFamily::gaussian_product, d, 1.0};
}

KernelSpec KernelSpec::epanechnikov(std::size_t d) {
    return {KernelFamily::epanechnikov_product, d, 1.0};
}

double kernel_eval(const KernelSpec& spec, const std::vector<double>& u) {
    if (u.size() != spec.d) throw std::invalid_argument("kernel dimension mismatch");
    double k = 1.0;
    for (double uj : u) {
        if (!std::isfinite(uj)) throw std::invalid_argument("kernel argument not finite");
        k *= detail::kernel1(spec.family, uj);
    }
    return k;
}

BandwidthRule BandwidthRule::fixed(double h) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("fixed bandwidth must be positive");
    return {Kind::fixed, h};
}

BandwidthRule BandwidthRule::optimal(double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("bandwidth constant must be positive");
    return {Kind::optimal, c};
}

double bandwidth_for(const BandwidthRule& rule, std::size_t n, std::size_t d) {
    if (rule.kind == BandwidthRule::Kind::fixed) return rule.value;
    if (n < 2) throw std::invalid_argument("bandwidth undefined");
    double nn = static_cast<double>(n);
    double h = rule.value *
               std::pow(std::log(nn) / nn, 1.0 / static_cast<double>(d + 2));
    if (!(h > 0.0)) throw std::invalid_argument("bandwidth undefined");
    return h;
}

double density_estimate(const CensoredSample& sample, const KernelSpec& spec,
                        double h, const std::vector<double>& x) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("bandwidth must be positive");
    if (x.size() != spec.d || sample.d != spec.d)
        throw std::invalid_argument("dimension mismatch");
    double acc = 0.0;
    for (const auto& obs : sample.observations)
        acc += detail::kernel_shifted(spec, x.data(), obs.x.data(), h);
    return acc / (static_cast<double>(sample.size()) * detail::pow_dim(h, spec.d));
}

namespace {

struct Base1d {
    double integral = 0.0;
    double abs_first_moment = 0.0;
    double square_integral = 0.0;
    double weighted_square_integral = 0.0; // int u K(u)^2 du
    double max_value = 0.0;
    double holder_ratio = 0.0;
};

// Composite Simpson probe of a 1-D kernel on [-hw, hw].
Base1d probe_1d(const std::function<double(double)>& k, double hw, double gamma) {
    const std::size_t intervals = 40000; // even
    const double step = 2.0 * hw / static_cast<double>(intervals);
    Base1d b;
    double prev = k(-hw);
    for (std::size_t i = 0; i <= intervals; ++i) {
        double u = -hw + step * static_cast<double>(i);
        double v = k(u);
        double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        b.integral += w * v;
        b.abs_first_moment += w * std::fabs(u) * v;
        b.square_integral += w * v * v;
        b.weighted_square_integral += w * u * v * v;
        b.max_value = std::max(b.max_value, v);
        if (i > 0) {
            double ratio = std::fabs(v - prev) / std::pow(step, gamma);
            b.holder_ratio = std::max(b.holder_ratio, ratio);
        }
        prev = v;
    }
    double scale = step / 3.0;
    b.integral *= scale;
    b.abs_first_moment *= scale;
    b.square_integral *= scale;
    b.weighted_square_integral *= scale;
    return b;
}

KernelPropertyReport combine(const Base1d& b, std::size_t d, double tol) {
    KernelPropertyReport r;
    double id1 = 1.0, sd1 = 1.0, md1 = 1.0; // I^{d-1}, S^{d-1}, M^{d-1}
    for (std::size_t j = 1; j < d; ++j) {
        id1 *= b.integral;
        sd1 *= b.square_integral;
        md1 *= b.max_value;
    }
    r.integral = id1 * b.integral;
    r.abs_first_moment = static_cast<double>(d) * b.abs_first_moment * id1;
    r.square_integral = sd1 * b.square_integral;
    r.weighted_square_integral =
        static_cast<double>(d) * b.weighted_square_integral * sd1;
    r.max_value = md1 * b.max_value;
    r.holder_ratio_max = static_cast<double>(d) * md1 * b.holder_ratio;
    r.integrates_to_one = std::fabs(r.integral - 1.0) <= tol;
    r.first_moment_finite = std::isfinite(r.abs_first_moment);
    r.square_integrable =
        std::isfinite(r.square_integral) && std::isfinite(r.weighted_square_integral);
    r.lipschitz_gamma = std::isfinite(r.holder_ratio_max) && r.holder_ratio_max <= 100.0;
    r.bounded = std::isfinite(r.max_value) && r.max_value <= 1e6;
    return r;
}

} // namespace

KernelPropertyReport verify_kernel_properties(const KernelSpec& spec, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    // Mass of the Gaussian outside +-10 is below 1e-22, far under any usable
    // tolerance; the Epanechnikov support ends at 1 exactly.
    double hw = spec.family == KernelFamily::gaussian_product ? 10.0 : 1.0;
    auto k = [&spec](double u) { return detail::kernel1(spec.family, u); };
    return combine(probe_1d(k, hw, spec.gamma), spec.d, tol);
}

KernelPropertyReport verify_kernel_properties(const std::function<double(double)>& k,
                                              double half_width, double gamma,
                                              double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (!(half_width > 0.0)) throw std::invalid_argument("half width must be positive");
    return combine(probe_1d(k, half_width, gamma), 1, tol);
}

std::string kernel_name(KernelFamily family) {
    return family == KernelFamily::gaussian_product ? "gaussian" : "epanechnikov";
}

KernelFamily kernel_from_name(const std::string& name) {
    if (name == "gaussian") return KernelFamily::gaussian_product;
    if (name == "epanechnikov") return KernelFamily::epanechnikov_product;
    throw std::invalid_argument("unknown kernel '" + name + "'");
}

} // namespace censreg
