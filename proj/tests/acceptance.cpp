// Acceptance suite: one line per criterion, nonzero exit if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "censreg/harness.hpp"
#include "censreg/regression.hpp"
#include "censreg/rng.hpp"
#include "censreg/sample.hpp"
#include "censreg/smoothing.hpp"
#include "censreg/survival.hpp"
#include "censreg/synthetic.hpp"
#include "testutil.hpp"

using namespace censreg;

namespace {

constexpr std::uint64_t kMasterSeed = 7;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok && pass) {
            pass = false;
            detail = why;
        }
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt(v[i]);
    }
    return out + "]";
}

double gauss1(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI); }

// ---- criterion 1: product-limit estimator vs direct product over order stats

struct BrutePoint {
    double t = 0.0;
    double value = 0.0; // right-continuous value at t
};

std::vector<BrutePoint> brute_product_limit(std::vector<std::pair<double, int>> obs) {
    std::sort(obs.begin(), obs.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second > b.second;
    });
    const std::size_t n = obs.size();
    const double top = obs.back().first;
    std::vector<BrutePoint> out;
    double value = 1.0;
    std::size_t i = 0;
    while (i < n) {
        double t = obs[i].first;
        while (i < n && obs[i].first == t) {
            std::size_t rank = i + 1;
            if (obs[i].second == 0)
                value *= 1.0 - 1.0 / static_cast<double>(n - rank + 1);
            ++i;
        }
        out.push_back({t, t == top ? 0.0 : value});
    }
    return out;
}

Outcome criterion_km_brute_force() {
    Outcome o;
    Rng rng(911);
    const double times[] = {0.5, 1.0, 1.5, 2.0, 2.5};
    for (int rep = 0; rep < 200 && o.pass; ++rep) {
        std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 8);
        if (n > 8) n = 8;
        CensoredSample sample;
        sample.d = 1;
        std::vector<std::pair<double, int>> obs;
        for (std::size_t i = 0; i < n; ++i) {
            double t = times[static_cast<std::size_t>(rng.uniform01() * 5) % 5];
            int delta = rng.uniform01() < 0.5 ? 1 : 0;
            obs.emplace_back(t, delta);
            CensoredObservation co;
            co.x = {0.0};
            co.t = t;
            co.delta = delta;
            sample.observations.push_back(co);
        }
        auto curve = km_censoring_survival(sample);
        auto brute = brute_product_limit(obs);
        for (const auto& bp : brute)
            o.require(survival_at(curve, bp.t, Side::right) == bp.value,
                      "rep " + std::to_string(rep) + ": value at t=" + fmt(bp.t) +
                          " is " + fmt(survival_at(curve, bp.t)) + ", brute force says " +
                          fmt(bp.value));
        for (std::size_t k = 0; k < curve.jump_times.size(); ++k) {
            double jt = curve.jump_times[k];
            bool found = false;
            for (const auto& bp : brute)
                if (bp.t == jt && bp.value == curve.values_after_jump[k]) found = true;
            o.require(found, "rep " + std::to_string(rep) + ": stray jump at t=" + fmt(jt));
        }
    }
    return o;
}

// ---- criterion 2: weight normalization

Outcome criterion_weight_normalization() {
    Outcome o;
    Rng rng(917);
    for (int rep = 0; rep < 1000 && o.pass; ++rep) {
        std::size_t d = rep % 10 < 7 ? 1 : 2;
        std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 40);
        CensoredSample sample;
        sample.d = d;
        for (std::size_t i = 0; i < n; ++i) {
            CensoredObservation co;
            for (std::size_t k = 0; k < d; ++k) co.x.push_back(rng.normal() * 1.5);
            co.t = 1.0;
            co.delta = 1;
            sample.observations.push_back(co);
        }
        // Evaluate within a few bandwidths of some observation so the kernel
        // sum cannot underflow to an undefined weight vector.
        double h = 0.05 + rng.uniform01() * 2.0;
        const auto& anchor =
            sample.observations[static_cast<std::size_t>(rng.uniform01() * n) % n];
        std::vector<double> x;
        for (std::size_t k = 0; k < d; ++k)
            x.push_back(anchor.x[k] + (rng.uniform01() * 2.0 - 1.0) * 3.0 * h);
        auto w = nw_weights(sample, KernelSpec::gaussian(d), h, x);
        o.require(w.defined, "rep " + std::to_string(rep) + ": weights undefined");
        double sum = 0.0, mn = 1.0;
        for (double wi : w.weights) {
            sum += wi;
            mn = std::min(mn, wi);
        }
        o.require(std::fabs(sum - 1.0) <= 1e-12,
                  "rep " + std::to_string(rep) + ": |sum-1| = " + fmt(std::fabs(sum - 1.0)));
        o.require(mn >= 0.0, "rep " + std::to_string(rep) + ": negative weight " + fmt(mn));
    }
    return o;
}

// ---- criterion 3: uncensored plug-in reduces to the classical estimator

Outcome criterion_uncensored_reduction() {
    Outcome o;
    Rng rng(919);
    auto grid = make_uniform_grid(-1.5, 1.5, 21, 1);
    for (int rep = 0; rep < 50 && o.pass; ++rep) {
        std::size_t n = 10 + static_cast<std::size_t>(rng.uniform01() * 41);
        if (n > 50) n = 50;
        CensoredSample sample;
        sample.d = 1;
        for (std::size_t i = 0; i < n; ++i) {
            CensoredObservation co;
            co.x = {rng.normal()};
            co.t = rng.normal() * 2.0 + 1.0;
            co.delta = 1;
            sample.observations.push_back(co);
        }
        double h = 0.5 + rng.uniform01() * 0.7;
        GSource g = km_censoring_survival(sample);
        auto ests = estimate_on_grid(sample, KernelSpec::gaussian(), h, grid, g);
        for (const auto& est : ests) {
            if (!est.m) continue;
            double num = 0.0, den = 0.0;
            for (const auto& co : sample.observations) {
                double k = gauss1((est.x[0] - co.x[0]) / h);
                num += co.t * k;
                den += k;
            }
            double classical = num / den;
            o.require(std::fabs(*est.m - classical) <= 1e-12,
                      "rep " + std::to_string(rep) + " x=" + fmt(est.x[0]) +
                          ": plug-in " + fmt(*est.m) + " vs classical " + fmt(classical));
        }
    }
    return o;
}

// ---- criteria 4 and 5: median sup error falls as n grows, per model family

std::vector<double> family_medians(ModelFamily family) {
    ExperimentConfig config;
    config.model.family = family;
    config.model.rho = 0.9;
    config.model.lambda = 1.5;
    config.n_values = {50, 100, 300};
    config.replications = 100;
    config.grid = make_uniform_grid(-1.5, 1.5, 61, 1);
    config.kernel = KernelSpec::gaussian();
    config.bandwidth = BandwidthRule::optimal(1.0);
    config.g_sources = {GKind::km};
    config.master_seed = kMasterSeed;
    auto report = run_monte_carlo(config);
    std::vector<double> medians;
    for (const auto& s : report.summaries) medians.push_back(s.median_sup_error);
    return medians;
}

Outcome check_decreasing(const std::vector<double>& medians, const std::string& label) {
    Outcome o;
    for (std::size_t i = 0; i + 1 < medians.size(); ++i)
        o.require(medians[i + 1] < medians[i],
                  label + " medians not decreasing: " + fmt_list(medians));
    return o;
}

Outcome criterion_fit_improves_linear() {
    return check_decreasing(family_medians(ModelFamily::linear), "linear");
}

Outcome criterion_fit_improves_sinus_parabolic() {
    Outcome o = check_decreasing(family_medians(ModelFamily::sinus), "sinus");
    Outcome p = check_decreasing(family_medians(ModelFamily::parabolic), "parabolic");
    o.require(p.pass, p.detail);
    return o;
}

// ---- criterion 6: log-log slope of median sup error vs the optimal rate

Outcome criterion_rate_slope() {
    Outcome o;
    ExperimentConfig config;
    config.model.family = ModelFamily::linear;
    config.model.rho = 0.9;
    config.model.lambda = 1.5;
    config.n_values = {250, 500, 1000, 2000, 4000};
    config.replications = 200;
    config.grid = make_uniform_grid(-1.5, 1.5, 61, 1);
    config.kernel = KernelSpec::gaussian();
    config.bandwidth = BandwidthRule::optimal(1.0);
    config.g_sources = {GKind::km};
    config.master_seed = kMasterSeed;
    auto report = run_monte_carlo(config);
    auto fit = rate_slope(report, report.optimal_rates, GKind::km);
    o.require(fit.slope >= 0.5 && fit.slope <= 1.5,
              "slope " + fmt(fit.slope) + " outside [0.5, 1.5]");
    o.require(fit.r_squared >= 0.9, "r^2 " + fmt(fit.r_squared) + " below 0.9");
    o.detail = "slope=" + fmt(fit.slope) + " r^2=" + fmt(fit.r_squared);
    return o;
}

// ---- criterion 7: uniform convergence of the estimated censoring curve

Outcome criterion_km_uniform_convergence() {
    Outcome o;
    const double lambda = 1.5;
    auto ref = true_censoring_survival_fn(lambda);
    std::vector<std::size_t> ns = {100, 400, 1600};
    std::vector<double> medians;
    for (std::size_t n : ns) {
        std::vector<double> dists;
        for (std::size_t rep = 0; rep < 100; ++rep) {
            Rng rng(Rng::derive_stream(Rng::derive_stream(kMasterSeed + 1, n), rep));
            CensoredSample sample;
            sample.d = 1;
            for (std::size_t i = 0; i < n; ++i) {
                double y = rng.exponential(1.0);
                double c = rng.exponential(lambda);
                CensoredObservation co;
                co.x = {0.0};
                co.t = std::min(y, c);
                co.delta = y <= c ? 1 : 0;
                sample.observations.push_back(co);
            }
            dists.push_back(km_sup_distance(km_censoring_survival(sample), ref, 1.0));
        }
        std::sort(dists.begin(), dists.end());
        medians.push_back(0.5 * (dists[49] + dists[50]));
    }
    for (std::size_t i = 0; i + 1 < medians.size(); ++i)
        o.require(medians[i + 1] <= medians[i],
                  "medians not non-increasing: " + fmt_list(medians));
    o.require(medians.back() < 0.05,
              "median at n=1600 is " + fmt(medians.back()) + ", not below 0.05");
    o.detail = "medians=" + fmt_list(medians);
    return o;
}

// ---- criterion 8: plug-in vs known-divisor gap shrinks with n

Outcome criterion_oracle_gap() {
    Outcome o;
    ExperimentConfig config;
    config.model.family = ModelFamily::linear;
    config.model.rho = 0.9;
    config.model.lambda = 1.5;
    config.n_values = {100, 400, 1600};
    config.replications = 100;
    config.grid = make_uniform_grid(-1.5, 1.5, 61, 1);
    config.kernel = KernelSpec::gaussian();
    config.bandwidth = BandwidthRule::optimal(1.0);
    config.g_sources = {GKind::km, GKind::oracle};
    config.master_seed = kMasterSeed;
    auto gaps = oracle_gap(config);
    std::vector<double> medians;
    for (const auto& g : gaps) medians.push_back(g.median_gap);
    for (std::size_t i = 0; i + 1 < medians.size(); ++i)
        o.require(medians[i + 1] < medians[i],
                  "median gaps not decreasing: " + fmt_list(medians));
    o.detail = "medians=" + fmt_list(medians);
    return o;
}

// ---- criterion 9: admissibility arithmetic

Outcome criterion_assumption_arithmetic() {
    Outcome o;
    AssumptionParams params; // d=1, gamma=1, mu=0.5 defaults
    auto report = check_assumptions(params, BandwidthRule::optimal(1.0), 100, 1000000000);
    o.require(report.p == 3.0, "p = " + fmt(report.p) + ", expected exactly 3");
    o.require(report.mixing_threshold == 6.0,
              "threshold = " + fmt(report.mixing_threshold) + ", expected exactly 6");
    for (const auto& c : report.checks)
        o.require(c.pass, c.name + " failed: " + c.detail);
    return o;
}

// ---- criterion 10: censored fraction of the linear model

Outcome criterion_censored_fraction() {
    Outcome o;
    double analytic = linear_censored_fraction(1.5);
    o.require(std::fabs(analytic - 0.294) < 1e-3,
              "analytic value " + fmt(analytic) + " is not ~0.294");

    // Independent quadrature of integral over y>0 of (1 - e^{-1.5 y}) phi(y) dy.
    const int steps = 20000;
    double quad = 0.0;
    for (int i = 0; i <= steps; ++i) {
        double y = 12.0 * i / steps;
        double f = (1.0 - std::exp(-1.5 * y)) * gauss1(y);
        double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        quad += w * f;
    }
    quad *= (12.0 / steps) / 3.0;
    o.require(std::fabs(analytic - quad) < 1e-6,
              "closed form " + fmt(analytic) + " vs quadrature " + fmt(quad));

    ModelSpec spec;
    spec.n = 100000;
    spec.seed = kMasterSeed + 1;
    double observed = censored_fraction(generate_dataset(spec));
    o.require(std::fabs(observed - analytic) < 0.01,
              "observed fraction " + fmt(observed) + " vs analytic " + fmt(analytic));
    o.detail = "observed=" + fmt(observed) + " analytic=" + fmt(analytic);
    return o;
}

// ---- criterion 11: byte-identical reports across parallelism levels

Outcome criterion_parallel_determinism() {
    Outcome o;
#ifdef CENSREG_CLI_PATH
    std::string base = "rate-check --model linear --n-list 60,120,240 --reps 20"
                       " --seed 4242 --grid-points 41 --quiet";
    auto one = testutil::run_cli(base + " --threads 1 --out acc_t1.json --raw-out acc_t1.csv",
                                 "acc_t1");
    auto four = testutil::run_cli(base + " --threads 4 --out acc_t4.json --raw-out acc_t4.csv",
                                  "acc_t4");
    o.require(one.status == 0, "single-thread run exited " + std::to_string(one.status));
    o.require(four.status == 0, "multi-thread run exited " + std::to_string(four.status));
    std::string j1 = testutil::slurp("acc_t1.json");
    std::string j4 = testutil::slurp("acc_t4.json");
    o.require(!j1.empty(), "single-thread report is empty");
    o.require(j1 == j4, "reports differ between thread counts");
    o.require(testutil::slurp("acc_t1.csv") == testutil::slurp("acc_t4.csv"),
              "raw error CSVs differ between thread counts");
#else
    o.require(false, "CLI path not configured");
#endif
    return o;
}

struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
    double time_limit_s; // 0 = no limit
};

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "product-limit curve equals brute-force evaluation", criterion_km_brute_force,
         1.0},
        {2, "kernel weights normalize and stay nonnegative", criterion_weight_normalization,
         0.0},
        {3, "uncensored plug-in equals the classical estimator",
         criterion_uncensored_reduction, 0.0},
        {4, "linear model fit improves with n", criterion_fit_improves_linear, 30.0},
        {5, "sinus and parabolic fits improve with n", criterion_fit_improves_sinus_parabolic,
         0.0},
        {6, "uniform error tracks the optimal rate", criterion_rate_slope, 300.0},
        {7, "estimated censoring curve converges uniformly",
         criterion_km_uniform_convergence, 0.0},
        {8, "plug-in to known-divisor gap shrinks", criterion_oracle_gap, 0.0},
        {9, "admissibility arithmetic is exact", criterion_assumption_arithmetic, 0.0},
        {10, "censored fraction matches the analytic value", criterion_censored_fraction,
         0.0},
        {11, "reports are byte-identical across thread counts",
         criterion_parallel_determinism, 0.0},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0 && elapsed >= c.time_limit_s) {
            o.pass = false;
            o.detail = "took " + fmt(elapsed) + "s, limit " + fmt(c.time_limit_s) + "s" +
                       (o.detail.empty() ? "" : "; " + o.detail);
        }
        if (!o.pass) ++failures;
        std::printf("%s %2d %s [%.2fs]%s%s\n", o.pass ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), elapsed, o.detail.empty() ? "" : " -- ",
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
