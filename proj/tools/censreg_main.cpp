#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "censreg/harness.hpp"
#include "censreg/numfmt.hpp"
#include "censreg/regression.hpp"
#include "censreg/sample.hpp"
#include "censreg/smoothing.hpp"
#include "censreg/survival.hpp"
#include "censreg/synthetic.hpp"

namespace {

using namespace censreg;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw DataError("failed writing '" + path + "'");
}

CensoredSample load_sample(const std::string& path) {
    CensoredSample sample;
    try {
        sample = read_sample_csv_file(path);
    } catch (const CsvError& e) {
        if (e.row == 0) throw DataError(path + ": " + e.what());
        throw DataError(path + ": row " + std::to_string(e.row) + ": " + e.what());
    }
    if (sample.observations.empty()) throw DataError(path + ": empty sample");
    auto report = validate_sample(sample);
    if (!report.ok()) {
        const auto& v = report.violations.front();
        throw DataError(path + ": row " + std::to_string(v.index + 1) + ": " + v.rule);
    }
    return sample;
}

struct SimulateArgs {
    std::string model = "linear";
    double rho = 0.9;
    double lambda = 1.5;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string out;
};

int run_simulate(const SimulateArgs& a) {
    if (!(a.rho > 0.0 && a.rho < 1.0)) throw UsageError("--rho must lie in (0,1)");
    if (!(a.lambda > 0.0)) throw UsageError("--lambda must be positive");
    if (a.n < 2) throw UsageError("--n must be at least 2");

    ModelSpec spec;
    spec.family = family_from_name(a.model);
    spec.rho = a.rho;
    spec.lambda = a.lambda;
    spec.n = a.n;
    spec.seed = a.seed;
    CensoredSample sample = generate_dataset(spec);

    std::string echo = "censreg simulate model=" + a.model +
                       " rho=" + to_decimal_string(a.rho) +
                       " lambda=" + to_decimal_string(a.lambda) +
                       " n=" + std::to_string(a.n) + " seed=" + std::to_string(a.seed);
    write_file(a.out, sample_to_csv(sample, echo));
    return 0;
}

struct EstimateArgs {
    std::string in;
    std::string kernel = "gaussian";
    double bandwidth_const = 0.0;
    double bandwidth = 0.0;
    bool has_const = false;
    bool has_fixed = false;
    double grid_min = 0.0;
    double grid_max = 0.0;
    std::size_t grid_points = 61;
    std::string g = "km";
    std::string truth;
    double truth_rho = 0.9;
    std::string out;
};

int run_estimate(const EstimateArgs& a) {
    if (a.has_const == a.has_fixed)
        throw UsageError("give exactly one of --bandwidth-const or --bandwidth");
    if (a.has_const && !(a.bandwidth_const > 0.0))
        throw UsageError("--bandwidth-const must be positive");
    if (a.has_fixed && !(a.bandwidth > 0.0))
        throw UsageError("--bandwidth must be positive");
    if (!(a.grid_min < a.grid_max)) throw UsageError("--grid-min must be below --grid-max");
    if (a.grid_points < 2) throw UsageError("--grid-points must be at least 2");
    if (!a.truth.empty() && !(a.truth_rho > 0.0 && a.truth_rho < 1.0))
        throw UsageError("--truth-rho must lie in (0,1)");

    KernelSpec kernel{kernel_from_name(a.kernel), 1, 1.0};
    BandwidthRule rule = a.has_fixed ? BandwidthRule::fixed(a.bandwidth)
                                     : BandwidthRule::optimal(a.bandwidth_const);

    CensoredSample sample = load_sample(a.in);
    double h = bandwidth_for(rule, sample.size(), 1);
    EvaluationGrid grid = make_uniform_grid(a.grid_min, a.grid_max, a.grid_points, 1);

    GSource g;
    if (a.g == "km")
        g = km_censoring_survival(sample);
    else if (a.g == "none")
        g = std::monostate{};
    else
        throw UsageError("--g must be km or none");

    auto estimates = estimate_on_grid(sample, kernel, h, grid, g);

    std::string content = "# censreg estimate in=" + a.in + " kernel=" + a.kernel;
    if (a.has_fixed) content += " bandwidth=" + to_decimal_string(a.bandwidth);
    else content += " bandwidth-const=" + to_decimal_string(a.bandwidth_const);
    content += " h=" + to_decimal_string(h) + " grid-min=" + to_decimal_string(a.grid_min) +
               " grid-max=" + to_decimal_string(a.grid_max) +
               " grid-points=" + std::to_string(a.grid_points) + " g=" + a.g;
    if (!a.truth.empty())
        content += " truth=" + a.truth + " truth-rho=" + to_decimal_string(a.truth_rho);
    content += '\n';

    ModelSpec truth_spec;
    if (!a.truth.empty()) {
        truth_spec.family = family_from_name(a.truth);
        truth_spec.rho = a.truth_rho;
    }
    content += a.truth.empty() ? "x,ell_n,r1_n,m_n\n" : "x,ell_n,r1_n,m_n,m_true\n";
    for (const auto& est : estimates) {
        content += to_decimal_string(est.x[0]);
        content += ',';
        content += to_decimal_string(est.ell);
        content += ',';
        content += to_decimal_string(est.r1);
        content += ',';
        content += est.m ? to_decimal_string(*est.m) : "nan";
        if (!a.truth.empty()) {
            content += ',';
            content += to_decimal_string(true_regression(truth_spec, est.x[0]));
        }
        content += '\n';
    }
    write_file(a.out, content);
    return 0;
}

struct KmArgs {
    std::string in;
    std::string out;
};

int run_km(const KmArgs& a) {
    CensoredSample sample = load_sample(a.in);
    SurvivalCurve curve = km_censoring_survival(sample);

    std::string content =
        "# censreg km in=" + a.in + " n=" + std::to_string(sample.size()) + '\n';
    content += "t,value_right,value_left\n";
    for (std::size_t k = 0; k < curve.jump_times.size(); ++k) {
        double left = k == 0 ? 1.0 : curve.values_after_jump[k - 1];
        content += to_decimal_string(curve.jump_times[k]);
        content += ',';
        content += to_decimal_string(curve.values_after_jump[k]);
        content += ',';
        content += to_decimal_string(left);
        content += '\n';
    }
    write_file(a.out, content);
    return 0;
}

struct RateCheckArgs {
    std::string model = "linear";
    double rho = 0.9;
    double lambda = 1.5;
    std::vector<std::size_t> n_list;
    std::size_t reps = 200;
    double grid_min = -1.5;
    double grid_max = 1.5;
    std::size_t grid_points = 61;
    std::string kernel = "gaussian";
    double bandwidth_const = 1.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string raw_out;
    int threads = 0;
    bool quiet = false;
};

int run_rate_check(const RateCheckArgs& a) {
    if (!(a.rho > 0.0 && a.rho < 1.0)) throw UsageError("--rho must lie in (0,1)");
    if (!(a.lambda > 0.0)) throw UsageError("--lambda must be positive");
    if (a.n_list.empty()) throw UsageError("--n-list must be non-empty");
    for (std::size_t i = 0; i < a.n_list.size(); ++i) {
        if (a.n_list[i] < 2) throw UsageError("--n-list entries must be at least 2");
        if (i > 0 && a.n_list[i] <= a.n_list[i - 1])
            throw UsageError("--n-list must be strictly ascending");
    }
    if (a.reps < 1) throw UsageError("--reps must be at least 1");
    if (!(a.grid_min < a.grid_max)) throw UsageError("--grid-min must be below --grid-max");
    if (a.grid_points < 2) throw UsageError("--grid-points must be at least 2");
    if (!(a.bandwidth_const > 0.0)) throw UsageError("--bandwidth-const must be positive");
    if (a.threads < 0) throw UsageError("--threads must be positive");

#ifdef _OPENMP
    if (a.threads > 0) omp_set_num_threads(a.threads);
#endif

    ExperimentConfig config;
    config.model.family = family_from_name(a.model);
    config.model.rho = a.rho;
    config.model.lambda = a.lambda;
    config.n_values = a.n_list;
    config.replications = a.reps;
    config.grid = make_uniform_grid(a.grid_min, a.grid_max, a.grid_points, 1);
    config.kernel = KernelSpec{kernel_from_name(a.kernel), 1, 1.0};
    config.bandwidth = BandwidthRule::optimal(a.bandwidth_const);
    config.g_sources = {GKind::km, GKind::oracle};
    config.master_seed = a.seed;

    ProgressFn progress;
    if (!a.quiet)
        progress = [](std::size_t n, std::size_t i, std::size_t count) {
            std::fprintf(stderr, "completed n=%zu (%zu/%zu)\n", n, i + 1, count);
        };
    ErrorReport report = run_monte_carlo(config, progress);

    write_file(a.out, report_to_json(report));
    if (!a.raw_out.empty()) {
        std::string echo = "# censreg rate-check model=" + a.model +
                           " rho=" + to_decimal_string(a.rho) +
                           " lambda=" + to_decimal_string(a.lambda) + " n-list=";
        for (std::size_t i = 0; i < a.n_list.size(); ++i) {
            if (i) echo += ',';
            echo += std::to_string(a.n_list[i]);
        }
        echo += " reps=" + std::to_string(a.reps) +
                " grid-min=" + to_decimal_string(a.grid_min) +
                " grid-max=" + to_decimal_string(a.grid_max) +
                " grid-points=" + std::to_string(a.grid_points) + " kernel=" + a.kernel +
                " bandwidth-const=" + to_decimal_string(a.bandwidth_const) +
                " seed=" + std::to_string(a.seed) + '\n';
        write_file(a.raw_out, echo + report_raw_csv(report));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kernel regression for right-censored dependent data"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic sample CSV");
    simulate->add_option("--model", sim.model, "linear, sinus, or parabolic")
        ->check(CLI::IsMember({"linear", "sinus", "parabolic"}));
    simulate->add_option("--rho", sim.rho, "autoregression coefficient in (0,1)");
    simulate->add_option("--lambda", sim.lambda, "censoring rate");
    simulate->add_option("--n", sim.n, "sample size")->required();
    simulate->add_option("--seed", sim.seed, "RNG seed");
    simulate->add_option("--out", sim.out, "output CSV path")->required();

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Estimate the regression on a grid");
    estimate->add_option("--in", est.in, "input sample CSV")->required();
    estimate->add_option("--kernel", est.kernel, "gaussian or epanechnikov")
        ->check(CLI::IsMember({"gaussian", "epanechnikov"}));
    auto* opt_const = estimate->add_option("--bandwidth-const", est.bandwidth_const,
                                           "constant c in h = c (log n / n)^{1/3}");
    auto* opt_fixed = estimate->add_option("--bandwidth", est.bandwidth, "fixed h");
    estimate->add_option("--grid-min", est.grid_min, "grid lower bound")->required();
    estimate->add_option("--grid-max", est.grid_max, "grid upper bound")->required();
    estimate->add_option("--grid-points", est.grid_points, "grid size");
    estimate->add_option("--g", est.g, "censoring adjustment: km or none")
        ->check(CLI::IsMember({"km", "none"}));
    estimate->add_option("--truth", est.truth,
                         "append the closed-form m for this model family")
        ->check(CLI::IsMember({"linear", "sinus", "parabolic"}));
    estimate->add_option("--truth-rho", est.truth_rho, "rho used with --truth");
    estimate->add_option("--out", est.out, "output CSV path")->required();

    KmArgs km;
    auto* km_cmd = app.add_subcommand("km", "Export the censoring survival curve");
    km_cmd->add_option("--in", km.in, "input sample CSV")->required();
    km_cmd->add_option("--out", km.out, "output CSV path")->required();

    RateCheckArgs rate;
    auto* rate_cmd =
        app.add_subcommand("rate-check", "Monte Carlo uniform-error rate study");
    rate_cmd->add_option("--model", rate.model, "linear, sinus, or parabolic")
        ->check(CLI::IsMember({"linear", "sinus", "parabolic"}));
    rate_cmd->add_option("--rho", rate.rho, "autoregression coefficient in (0,1)");
    rate_cmd->add_option("--lambda", rate.lambda, "censoring rate");
    rate_cmd->add_option("--n-list", rate.n_list, "comma-separated sample sizes")
        ->required()
        ->delimiter(',');
    rate_cmd->add_option("--reps", rate.reps, "replications per sample size");
    rate_cmd->add_option("--grid-min", rate.grid_min, "evaluation lower bound");
    rate_cmd->add_option("--grid-max", rate.grid_max, "evaluation upper bound");
    rate_cmd->add_option("--grid-points", rate.grid_points, "evaluation grid size");
    rate_cmd->add_option("--kernel", rate.kernel, "gaussian or epanechnikov")
        ->check(CLI::IsMember({"gaussian", "epanechnikov"}));
    rate_cmd->add_option("--bandwidth-const", rate.bandwidth_const,
                         "constant c in h = c (log n / n)^{1/3}");
    rate_cmd->add_option("--seed", rate.seed, "master seed");
    rate_cmd->add_option("--out", rate.out, "output JSON path")->required();
    rate_cmd->add_option("--raw-out", rate.raw_out, "per-replication error CSV path");
    rate_cmd->add_option("--threads", rate.threads, "worker thread count");
    rate_cmd->add_flag("--quiet", rate.quiet, "suppress progress lines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 1;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (estimate->parsed()) {
            est.has_const = opt_const->count() > 0;
            est.has_fixed = opt_fixed->count() > 0;
            return run_estimate(est);
        }
        if (km_cmd->parsed()) return run_km(km);
        return run_rate_check(rate);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
