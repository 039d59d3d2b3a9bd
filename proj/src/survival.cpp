#include "censreg/survival.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace censreg {

SurvivalCurve km_censoring_survival(const CensoredSample& sample) {
    const std::size_t n = sample.size();
    if (n == 0) throw std::invalid_argument("empty sample");
    for (const auto& obs : sample.observations)
        if (!std::isfinite(obs.t)) throw std::invalid_argument("invalid time");

    // Order statistics of t with concomitant delta; delta = 1 sorts first at
    // ties so censoring events see the correct risk-set size.
    std::vector<std::pair<double, int>> ord(n);
    for (std::size_t i = 0; i < n; ++i)
        ord[i] = {sample.observations[i].t, sample.observations[i].delta};
    std::sort(ord.begin(), ord.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second > b.second;
    });

    SurvivalCurve curve;
    curve.sample_size = n;
    curve.top_time = ord.back().first;

    double value = 1.0;
    double prev = 1.0;
    std::size_t i = 0;
    while (i < n) {
        double t = ord[i].first;
        while (i < n && ord[i].first == t) {
            if (ord[i].second == 0)
                value *= 1.0 - 1.0 / static_cast<double>(n - i);
            ++i;
        }
        // The factor with rank n can reach zero; every earlier one is
        // strictly positive, and the definition forces 0 at the largest
        // observation regardless of its indicator.
        double after = (t == curve.top_time) ? 0.0 : value;
        if (after != prev) {
            curve.jump_times.push_back(t);
            curve.values_after_jump.push_back(after);
            prev = after;
        }
    }
    return curve;
}

double survival_at(const SurvivalCurve& curve, double t, Side side) {
    const auto& jt = curve.jump_times;
    auto it = side == Side::right ? std::upper_bound(jt.begin(), jt.end(), t)
                                  : std::lower_bound(jt.begin(), jt.end(), t);
    if (it == jt.begin()) return 1.0;
    return curve.values_after_jump[static_cast<std::size_t>(it - jt.begin()) - 1];
}

namespace {

void collect_breaks(const SurvivalCurve& curve, double tau, std::vector<double>& out) {
    for (double t : curve.jump_times) {
        if (t > tau) break;
        out.push_back(t);
    }
}

} // namespace

double km_sup_distance(const SurvivalCurve& curve, const SurvivalCurve& reference,
                       double tau) {
    if (!std::isfinite(tau)) throw std::invalid_argument("tau must be finite");
    std::vector<double> breaks;
    collect_breaks(curve, tau, breaks);
    collect_breaks(reference, tau, breaks);
    breaks.push_back(tau);

    double sup = 0.0;
    for (double t : breaks) {
        double right = std::fabs(survival_at(curve, t, Side::right) -
                                 survival_at(reference, t, Side::right));
        double left = std::fabs(survival_at(curve, t, Side::left) -
                                survival_at(reference, t, Side::left));
        sup = std::max(sup, std::max(right, left));
    }
    return sup;
}

double km_sup_distance(const SurvivalCurve& curve,
                       const std::function<double(double)>& reference, double tau) {
    if (!std::isfinite(tau)) throw std::invalid_argument("tau must be finite");
    std::vector<double> breaks;
    collect_breaks(curve, tau, breaks);
    breaks.push_back(tau);

    // The curve is constant between breaks and the reference is monotone, so
    // the distance on each segment peaks at a segment endpoint.
    double sup = 0.0;
    for (double t : breaks) {
        double g = reference(t);
        double right = std::fabs(survival_at(curve, t, Side::right) - g);
        double left = std::fabs(survival_at(curve, t, Side::left) - g);
        sup = std::max(sup, std::max(right, left));
    }
    return sup;
}

} // namespace censreg
