#include "censreg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "censreg/numfmt.hpp"
#include "censreg/rng.hpp"
#include "json.hpp"

namespace censreg {

namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t replication_seed(std::uint64_t master, std::size_t n, std::size_t rep) {
    return Rng::derive_stream(Rng::derive_stream(master, n), rep);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t m = v.size();
    return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

GSource make_g_source(GKind kind, const ModelSpec& model, const CensoredSample& sample) {
    if (kind == GKind::km) return GSource{km_censoring_survival(sample)};
    if (model.censoring == CensoringMode::none) return GSource{std::monostate{}};
    return GSource{true_censoring_survival_fn(model.lambda)};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

std::string g_kind_name(GKind kind) { return kind == GKind::km ? "km" : "oracle"; }

void validate_config(const ExperimentConfig& config) {
    if (config.n_values.empty()) throw std::invalid_argument("n_values must be non-empty");
    for (std::size_t i = 0; i < config.n_values.size(); ++i) {
        if (config.n_values[i] < 2)
            throw std::invalid_argument("every n must be at least 2");
        if (i > 0 && config.n_values[i] <= config.n_values[i - 1])
            throw std::invalid_argument("n_values must be strictly ascending");
    }
    if (config.replications < 1)
        throw std::invalid_argument("replications must be at least 1");
    if (config.g_sources.empty())
        throw std::invalid_argument("g_sources must be non-empty");
    validate_grid(config.grid);
    if (config.grid.dimension() != 1 || config.kernel.d != 1)
        throw std::invalid_argument("experiments use one-dimensional covariates");
    if (!(config.model.rho > 0.0 && config.model.rho < 1.0))
        throw std::invalid_argument("rho must lie in (0,1)");
    if (!(config.model.lambda > 0.0))
        throw std::invalid_argument("lambda must be positive");
}

SupError sup_error(const std::vector<PointEstimate>& estimates,
                   const std::function<double(double)>& truth) {
    SupError result;
    bool any = false;
    for (const auto& est : estimates) {
        if (!est.m) {
            ++result.undefined_count;
            continue;
        }
        any = true;
        result.sup = std::max(result.sup, std::fabs(*est.m - truth(est.x[0])));
    }
    if (!any) throw std::runtime_error("no defined estimates");
    return result;
}

double optimal_rate(std::size_t n, std::size_t d) {
    double nn = static_cast<double>(n);
    return std::pow(std::log(nn) / nn, 1.0 / static_cast<double>(d + 2));
}

double two_term_rate(std::size_t n, std::size_t d, double h) {
    double nn = static_cast<double>(n);
    double hd = 1.0;
    for (std::size_t j = 0; j < d; ++j) hd *= h;
    return std::max(std::sqrt(std::log(nn) / (nn * hd)), h);
}

namespace {

struct RepOutcome {
    bool failed = false;
    std::string reason;
    std::uint64_t seed = 0;
    double censored = 0.0;
    std::vector<SupError> by_source;
};

template <typename Body>
void replication_loop(std::size_t count, bool parallel, const Body& body) {
    const long long total = static_cast<long long>(count);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long rep = 0; rep < total; ++rep)
            body(static_cast<std::size_t>(rep));
    } else {
        for (long long rep = 0; rep < total; ++rep)
            body(static_cast<std::size_t>(rep));
    }
}

void enforce_failure_cap(std::size_t failed, std::size_t replications, std::size_t n) {
    if (failed * 50 > replications)
        throw std::runtime_error("replication failures exceed 2% at n=" +
                                 std::to_string(n) + " (" + std::to_string(failed) +
                                 " of " + std::to_string(replications) + ")");
}

ErrorReport run_monte_carlo_impl(const ExperimentConfig& config,
                                 const ProgressFn& progress, bool parallel) {
    validate_config(config);
    ErrorReport report;
    report.config = config;
    const std::size_t sources = config.g_sources.size();

    for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
        const std::size_t n = config.n_values[ni];
        const double h = bandwidth_for(config.bandwidth, n, config.kernel.d);
        std::vector<RepOutcome> outcomes(config.replications);

        replication_loop(config.replications, parallel, [&](std::size_t rep) {
            RepOutcome& out = outcomes[rep];
            out.seed = replication_seed(config.master_seed, n, rep);
            try {
                ModelSpec ms = config.model;
                ms.n = n;
                ms.seed = out.seed;
                CensoredSample sample = generate_dataset(ms);
                out.censored = censored_fraction(sample);
                auto truth = true_regression_fn(ms);
                out.by_source.resize(sources);
                for (std::size_t si = 0; si < sources; ++si) {
                    GSource g = make_g_source(config.g_sources[si], ms, sample);
                    auto ests =
                        estimate_on_grid_serial(sample, config.kernel, h, config.grid, g);
                    out.by_source[si] = sup_error(ests, truth);
                }
            } catch (const std::exception& e) {
                out.failed = true;
                out.reason = e.what();
            }
        });

        std::size_t failed = 0;
        for (std::size_t rep = 0; rep < outcomes.size(); ++rep)
            if (outcomes[rep].failed) {
                ++failed;
                report.failures.push_back({n, rep, outcomes[rep].seed, outcomes[rep].reason});
            }
        enforce_failure_cap(failed, config.replications, n);

        for (std::size_t si = 0; si < sources; ++si) {
            SourceSummary s;
            s.n = n;
            s.source = config.g_sources[si];
            s.bandwidth = h;
            double sum = 0.0, sum_undef = 0.0, sum_censored = 0.0;
            std::vector<double> sups;
            for (std::size_t rep = 0; rep < outcomes.size(); ++rep) {
                const RepOutcome& out = outcomes[rep];
                if (out.failed) continue;
                const SupError& se = out.by_source[si];
                s.raw.push_back({rep, se.sup, se.undefined_count});
                s.max_sup_error = std::max(s.max_sup_error, se.sup);
                sum += se.sup;
                sum_undef += static_cast<double>(se.undefined_count);
                sum_censored += out.censored;
                sups.push_back(se.sup);
            }
            double used = static_cast<double>(s.raw.size());
            s.mean_sup_error = sum / used;
            s.median_sup_error = median_of(std::move(sups));
            s.mean_undefined = sum_undef / used;
            s.censored_fraction = sum_censored / used;
            report.summaries.push_back(std::move(s));
        }
        report.optimal_rates.push_back(optimal_rate(n, config.kernel.d));
        report.two_term_rates.push_back(two_term_rate(n, config.kernel.d, h));
        if (progress) progress(n, ni, config.n_values.size());
    }

    if (config.n_values.size() >= 3) {
        std::vector<double> medians;
        for (const auto& s : report.summaries)
            if (s.source == config.g_sources.front()) medians.push_back(s.median_sup_error);
        bool positive = std::all_of(medians.begin(), medians.end(),
                                    [](double v) { return v > 0.0; });
        if (positive) report.rate_fit = rate_slope(medians, report.optimal_rates);
    }
    return report;
}

} // namespace

ErrorReport run_monte_carlo(const ExperimentConfig& config, const ProgressFn& progress) {
    return run_monte_carlo_impl(config, progress, true);
}

ErrorReport run_monte_carlo_serial(const ExperimentConfig& config,
                                   const ProgressFn& progress) {
    return run_monte_carlo_impl(config, progress, false);
}

RateFit rate_slope(const std::vector<double>& values, const std::vector<double>& rates) {
    if (values.size() != rates.size())
        throw std::invalid_argument("values and rates must have equal length");
    if (values.size() < 3)
        throw std::invalid_argument("rate fit needs at least 3 points");
    std::vector<double> lx(values.size()), ly(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !(rates[i] > 0.0))
            throw std::invalid_argument("rate fit needs positive values");
        lx[i] = std::log(rates[i]);
        ly[i] = std::log(values[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("rates must not be all equal");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    return fit;
}

RateFit rate_slope(const ErrorReport& report, const std::vector<double>& rates,
                   GKind source) {
    std::vector<double> medians;
    for (const auto& s : report.summaries)
        if (s.source == source) medians.push_back(s.median_sup_error);
    return rate_slope(medians, rates);
}

std::vector<GapSummary> oracle_gap(const ExperimentConfig& config) {
    validate_config(config);
    bool has_km = false, has_oracle = false;
    for (GKind k : config.g_sources) {
        has_km = has_km || k == GKind::km;
        has_oracle = has_oracle || k == GKind::oracle;
    }
    if (!has_km || !has_oracle)
        throw std::invalid_argument("oracle gap needs both km and oracle g sources");

    std::vector<GapSummary> out;
    for (std::size_t n : config.n_values) {
        const double h = bandwidth_for(config.bandwidth, n, config.kernel.d);
        struct GapOutcome {
            bool failed = false;
            std::string reason;
            std::uint64_t seed = 0;
            double gap = 0.0;
        };
        std::vector<GapOutcome> outcomes(config.replications);

        replication_loop(config.replications, true, [&](std::size_t rep) {
            GapOutcome& g = outcomes[rep];
            g.seed = replication_seed(config.master_seed, n, rep);
            try {
                ModelSpec ms = config.model;
                ms.n = n;
                ms.seed = g.seed;
                CensoredSample sample = generate_dataset(ms);
                auto km = estimate_on_grid_serial(sample, config.kernel, h, config.grid,
                                                  make_g_source(GKind::km, ms, sample));
                auto oracle = estimate_on_grid_serial(
                    sample, config.kernel, h, config.grid,
                    make_g_source(GKind::oracle, ms, sample));
                bool any = false;
                for (std::size_t i = 0; i < km.size(); ++i) {
                    if (!km[i].m || !oracle[i].m) continue;
                    any = true;
                    g.gap = std::max(g.gap, std::fabs(*km[i].m - *oracle[i].m));
                }
                if (!any) throw std::runtime_error("no defined estimates");
            } catch (const std::exception& e) {
                g.failed = true;
                g.reason = e.what();
            }
        });

        std::size_t failed = 0;
        GapSummary summary;
        summary.n = n;
        for (const auto& g : outcomes) {
            if (g.failed) {
                ++failed;
                continue;
            }
            summary.gaps.push_back(g.gap);
        }
        enforce_failure_cap(failed, config.replications, n);
        summary.median_gap = median_of(summary.gaps);
        out.push_back(std::move(summary));
    }
    return out;
}

double AssumptionParams::p() const {
    double dd = static_cast<double>(d);
    return (gamma * (4.0 + dd) + dd) / (2.0 * gamma);
}

bool AssumptionReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

AssumptionReport check_assumptions(const AssumptionParams& params,
                                   const BandwidthRule& rule, std::size_t n_min,
                                   std::size_t n_max) {
    if (n_min < 3 || n_max <= n_min)
        throw std::invalid_argument("need 3 <= n_min < n_max");
    if (!(params.gamma > 0.0) || !(params.c1 > 0.0) || !(params.c2 > 0.0))
        throw std::invalid_argument("gamma, c1, c2 must be positive");

    AssumptionReport report;
    const double d = static_cast<double>(params.d);
    report.p = params.p();
    report.mixing_threshold =
        report.p + std::sqrt(report.p * report.p + 3.0 * (d - 1.0));
    const double denom = params.gamma * (params.nu + 1.0) + 2.0 * params.gamma + 1.0;
    report.theta_lower = 1.0 / denom;
    report.theta_upper =
        1.0 / (1.0 - params.nu) - params.gamma * (3.0 - params.nu) / (d * denom);
    report.theta_interval_empty = !(report.theta_lower < report.theta_upper);

    // Log-spaced integer n values covering [n_min, n_max].
    std::vector<std::size_t> ns;
    const std::size_t points = 241;
    double la = std::log(static_cast<double>(n_min));
    double lb = std::log(static_cast<double>(n_max));
    for (std::size_t i = 0; i < points; ++i) {
        double f = static_cast<double>(i) / static_cast<double>(points - 1);
        auto n = static_cast<std::size_t>(std::llround(std::exp(la + f * (lb - la))));
        n = std::max(n_min, std::min(n_max, n));
        if (ns.empty() || n > ns.back()) ns.push_back(n);
    }

    std::vector<double> mass(ns.size()), damp(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        double nn = static_cast<double>(ns[i]);
        double h = bandwidth_for(rule, ns[i], params.d);
        double hd = 1.0;
        for (std::size_t j = 0; j < params.d; ++j) hd *= h;
        mass[i] = nn * hd;
        damp[i] = std::pow(h, params.mu) * std::log(std::log(nn));
    }

    bool grows = mass.back() >= 10.0 * mass.front();
    for (std::size_t i = 0; i + 1 < mass.size(); ++i)
        if (!(mass[i + 1] > mass[i])) grows = false;

    std::size_t peak = 0;
    for (std::size_t i = 1; i < damp.size(); ++i)
        if (damp[i] > damp[peak]) peak = i;
    bool tail_monotone = true;
    for (std::size_t i = peak; i + 1 < damp.size(); ++i)
        if (damp[i + 1] > damp[i] * (1.0 + 1e-12)) tail_monotone = false;
    bool peak_early = peak <= ns.size() / 2;
    bool ends_low = damp.back() <= 0.25 * damp[peak];
    bool limits_pass =
        std::isfinite(damp[peak]) && grows && tail_monotone && peak_early && ends_low;
    report.checks.push_back(
        {"bandwidth-limits", limits_pass,
         "n h^d goes from " + fmt(mass.front()) + " to " + fmt(mass.back()) +
             "; h^mu log log n peaks at n=" + std::to_string(ns[peak]) + " (" +
             fmt(damp[peak]) + ") and ends at " + fmt(damp.back())});

    bool mixing_pass = params.nu > report.mixing_threshold;
    report.checks.push_back(
        {"mixing-exponent", mixing_pass,
         "p=" + fmt(report.p) + ", decay exponent must exceed " +
             fmt(report.mixing_threshold) + ", got " + fmt(params.nu)});

    const double e_left = params.gamma * (3.0 - params.nu) / (d * denom) + params.theta * d;
    const double e_right = d / (1.0 - params.nu);
    bool window_pass = true;
    std::string window_detail;
    for (std::size_t n : {n_min, n_max}) {
        double nn = static_cast<double>(n);
        double h = bandwidth_for(rule, n, params.d);
        double hd = 1.0;
        for (std::size_t j = 0; j < params.d; ++j) hd *= h;
        double lo = params.c1 * std::pow(nn, e_left);
        double hi = params.c2 * std::pow(nn, e_right);
        if (!(lo <= hd && hd <= hi)) window_pass = false;
        if (!window_detail.empty()) window_detail += "; ";
        window_detail += "n=" + std::to_string(n) + ": " + fmt(lo) + " <= " + fmt(hd) +
                         " <= " + fmt(hi);
    }
    window_detail += "; admissible theta in (" + fmt(report.theta_lower) + ", " +
                     fmt(report.theta_upper) + ")" +
                     (report.theta_interval_empty ? " [empty]" : "");
    report.checks.push_back({"bandwidth-window", window_pass, window_detail});
    return report;
}

std::string report_to_json(const ErrorReport& report) {
    const ExperimentConfig& c = report.config;
    ordered_json j;
    ordered_json cfg;
    cfg["model"] = family_name(c.model.family);
    cfg["rho"] = c.model.rho;
    cfg["lambda"] = c.model.lambda;
    cfg["censoring"] =
        c.model.censoring == CensoringMode::exponential ? "exponential" : "none";
    cfg["n_values"] = c.n_values;
    cfg["replications"] = c.replications;
    ordered_json grid;
    grid["dimension"] = c.grid.dimension();
    grid["min"] = c.grid.lower;
    grid["max"] = c.grid.upper;
    {
        std::vector<std::size_t> counts;
        for (const auto& axis : c.grid.axes) counts.push_back(axis.size());
        grid["points"] = counts;
    }
    cfg["grid"] = grid;
    ordered_json kernel;
    kernel["family"] = kernel_name(c.kernel.family);
    kernel["dimension"] = c.kernel.d;
    kernel["gamma"] = c.kernel.gamma;
    cfg["kernel"] = kernel;
    ordered_json bw;
    bw["rule"] = c.bandwidth.kind == BandwidthRule::Kind::fixed ? "fixed" : "optimal";
    bw["value"] = c.bandwidth.value;
    cfg["bandwidth"] = bw;
    {
        std::vector<std::string> names;
        for (GKind k : c.g_sources) names.push_back(g_kind_name(k));
        cfg["g_sources"] = names;
    }
    cfg["master_seed"] = c.master_seed;
    j["config"] = cfg;

    ordered_json summaries = ordered_json::array();
    for (const auto& s : report.summaries) {
        ordered_json row;
        row["n"] = s.n;
        row["g_source"] = g_kind_name(s.source);
        row["bandwidth"] = s.bandwidth;
        row["replications_used"] = s.raw.size();
        row["mean_sup_error"] = s.mean_sup_error;
        row["median_sup_error"] = s.median_sup_error;
        row["max_sup_error"] = s.max_sup_error;
        row["mean_undefined"] = s.mean_undefined;
        row["censored_fraction"] = s.censored_fraction;
        summaries.push_back(row);
    }
    j["summaries"] = summaries;

    ordered_json rates = ordered_json::array();
    for (std::size_t i = 0; i < c.n_values.size(); ++i) {
        ordered_json row;
        row["n"] = c.n_values[i];
        row["optimal"] = report.optimal_rates[i];
        row["two_term"] = report.two_term_rates[i];
        rates.push_back(row);
    }
    j["rates"] = rates;

    if (report.rate_fit) {
        ordered_json fit;
        fit["g_source"] = g_kind_name(c.g_sources.front());
        fit["slope"] = report.rate_fit->slope;
        fit["intercept"] = report.rate_fit->intercept;
        fit["r_squared"] = report.rate_fit->r_squared;
        j["slope_fit"] = fit;
    } else {
        j["slope_fit"] = nullptr;
    }

    ordered_json failures = ordered_json::array();
    for (const auto& f : report.failures) {
        ordered_json row;
        row["n"] = f.n;
        row["replication"] = f.replication;
        row["seed"] = f.seed;
        row["reason"] = f.reason;
        failures.push_back(row);
    }
    j["failures"] = failures;

    return j.dump(2) + "\n";
}

std::string report_raw_csv(const ErrorReport& report) {
    std::string out = "n,rep,g_source,sup_error,undefined_count\n";
    for (const auto& s : report.summaries)
        for (const auto& r : s.raw) {
            out += std::to_string(s.n);
            out += ',';
            out += std::to_string(r.replication);
            out += ',';
            out += g_kind_name(s.source);
            out += ',';
            out += to_decimal_string(r.sup);
            out += ',';
            out += std::to_string(r.undefined_count);
            out += '\n';
        }
    return out;
}

} // namespace censreg
