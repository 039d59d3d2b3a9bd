#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "censreg/regression.hpp"
#include "censreg/sample.hpp"
#include "censreg/smoothing.hpp"
#include "censreg/synthetic.hpp"

namespace censreg {

enum class GKind { km, oracle };

std::string g_kind_name(GKind kind);

struct ExperimentConfig {
    ModelSpec model; // n and seed are per-replication, filled by the runner
    std::vector<std::size_t> n_values;
    std::size_t replications = 1;
    EvaluationGrid grid;
    KernelSpec kernel;
    BandwidthRule bandwidth;
    std::vector<GKind> g_sources = {GKind::km};
    std::uint64_t master_seed = 0;
};

// Throws std::invalid_argument on empty/descending n_values, zero
// replications, empty g_sources, or non-finite grid bounds.
void validate_config(const ExperimentConfig& config);

struct SupError {
    double sup = 0.0;
    std::size_t undefined_count = 0;
};

// Max over defined grid points of |m - truth(x)|, undefined points counted
// and excluded. Throws std::runtime_error("no defined estimates") when no
// point is defined.
SupError sup_error(const std::vector<PointEstimate>& estimates,
                   const std::function<double(double)>& truth);

struct RawError {
    std::size_t replication = 0;
    double sup = 0.0;
    std::size_t undefined_count = 0;
};

struct ReplicationFailure {
    std::size_t n = 0;
    std::size_t replication = 0;
    std::uint64_t seed = 0;
    std::string reason;
};

struct SourceSummary {
    std::size_t n = 0;
    GKind source = GKind::km;
    double bandwidth = 0.0;
    std::vector<RawError> raw; // successful replications, ascending index
    double mean_sup_error = 0.0;
    double median_sup_error = 0.0;
    double max_sup_error = 0.0;
    double mean_undefined = 0.0;
    double censored_fraction = 0.0; // mean over replications
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

struct ErrorReport {
    ExperimentConfig config;
    std::vector<SourceSummary> summaries; // by n, then declared source order
    std::vector<ReplicationFailure> failures;
    std::vector<double> optimal_rates;  // (log n / n)^{1/(d+2)} per n
    std::vector<double> two_term_rates; // max{sqrt(log n/(n h^d)), h} per n
    std::optional<RateFit> rate_fit;    // vs optimal_rates, first source, needs >= 3 n
};

double optimal_rate(std::size_t n, std::size_t d);
double two_term_rate(std::size_t n, std::size_t d, double h);

using ProgressFn = std::function<void(std::size_t n_value, std::size_t n_index,
                                      std::size_t n_count)>;

// Per n and replication: generate a dataset from a seed derived from
// (master_seed, n, replication), estimate on the grid with every g source,
// record sup errors. Failed replications are logged and excluded; more than
// 2% failures for any (n, source) throws std::runtime_error. The parallel
// runner distributes replications across OpenMP threads and returns the same
// report as the serial one bit for bit.
ErrorReport run_monte_carlo(const ExperimentConfig& config,
                            const ProgressFn& progress = {});
ErrorReport run_monte_carlo_serial(const ExperimentConfig& config,
                                   const ProgressFn& progress = {});

// OLS fit of log(values) on log(rates); slope near 1 means the errors scale
// like the rate sequence. Throws std::invalid_argument with fewer than 3
// points or non-positive entries.
RateFit rate_slope(const std::vector<double>& values, const std::vector<double>& rates);
RateFit rate_slope(const ErrorReport& report, const std::vector<double>& rates,
                   GKind source = GKind::km);

struct GapSummary {
    std::size_t n = 0;
    std::vector<double> gaps; // sup over grid |m_km - m_oracle| per replication
    double median_gap = 0.0;
};

// Plug-in versus known-divisor discrepancy per n; config must list both
// g sources.
std::vector<GapSummary> oracle_gap(const ExperimentConfig& config);

// Admissibility arithmetic for the convergence analysis.
struct AssumptionParams {
    std::size_t d = 1;
    double gamma = 1.0;
    double nu = 10.0;  // mixing decay exponent alpha(k) = O(k^-nu)
    double theta = 0.1;
    double mu = 0.5;
    double c1 = 1.0;
    double c2 = 1.0;
    double p() const; // (gamma (4+d) + d) / (2 gamma)
};

struct AssumptionCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AssumptionReport {
    double p = 0.0;
    double mixing_threshold = 0.0; // p + sqrt(p^2 + 3(d-1)); nu must exceed it
    double theta_lower = 0.0;      // 1 / (gamma(nu+1) + 2 gamma + 1)
    double theta_upper = 0.0;      // 1/(1-nu) - gamma(3-nu)/(d [gamma(nu+1)+2 gamma+1])
    bool theta_interval_empty = false;
    std::vector<AssumptionCheck> checks;
    bool all_pass() const;
};

// Three checks over n in [n_min, n_max] on a log-spaced grid:
//   bandwidth-limits: n h^d grows without bound and h^mu log log n has a
//     decreasing tail ending near 0;
//   mixing-exponent: nu exceeds the closed-form threshold;
//   bandwidth-window: c1 n^{gamma(3-nu)/(d[gamma(nu+1)+2 gamma+1]) + theta d}
//     <= h^d <= c2 n^{d/(1-nu)} at both endpoints, with the admissible theta
//     interval reported and flagged when empty.
AssumptionReport check_assumptions(const AssumptionParams& params,
                                   const BandwidthRule& rule, std::size_t n_min,
                                   std::size_t n_max);

// Stable-order JSON (config echo, summaries, rates, slope fit, failures);
// equal reports serialize byte-identically.
std::string report_to_json(const ErrorReport& report);

// Raw per-replication errors: header n,rep,g_source,sup_error,undefined_count.
std::string report_raw_csv(const ErrorReport& report);

} // namespace censreg
