// Times the OpenMP grid and Monte Carlo paths against their serial
// references and verifies both produce identical output.
#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "censreg/harness.hpp"
#include "censreg/regression.hpp"
#include "censreg/synthetic.hpp"

using namespace censreg;

namespace {

template <typename F>
double best_of_three_ms(const F& f) {
    double best = 1e300;
    for (int i = 0; i < 3; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

bool same_estimates(const std::vector<PointEstimate>& a,
                    const std::vector<PointEstimate>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].ell != b[i].ell || a[i].r1 != b[i].r1) return false;
        if (a[i].m.has_value() != b[i].m.has_value()) return false;
        if (a[i].m && *a[i].m != *b[i].m) return false;
    }
    return true;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif

    ModelSpec model;
    model.n = 20000;
    model.seed = 7;
    CensoredSample sample = generate_dataset(model);
    KernelSpec kernel = KernelSpec::gaussian(1);
    EvaluationGrid grid = make_uniform_grid(-1.5, 1.5, 241, 1);
    double h = bandwidth_for(BandwidthRule::optimal(1.0), model.n, 1);
    GSource g = km_censoring_survival(sample);

    std::vector<PointEstimate> serial_out, parallel_out;
    double grid_serial = best_of_three_ms(
        [&] { serial_out = estimate_on_grid_serial(sample, kernel, h, grid, g); });
    double grid_parallel = best_of_three_ms(
        [&] { parallel_out = estimate_on_grid(sample, kernel, h, grid, g); });
    std::printf("grid n=%zu, %zu points: serial %.1f ms, parallel %.1f ms (%.2fx), %s\n",
                sample.size(), grid.size(), grid_serial, grid_parallel,
                grid_serial / grid_parallel,
                same_estimates(serial_out, parallel_out) ? "outputs identical"
                                                         : "OUTPUTS DIFFER");

    ExperimentConfig config;
    config.model = ModelSpec{};
    config.n_values = {200, 400};
    config.replications = 64;
    config.grid = make_uniform_grid(-1.5, 1.5, 61, 1);
    config.kernel = kernel;
    config.bandwidth = BandwidthRule::optimal(1.0);
    config.g_sources = {GKind::km, GKind::oracle};
    config.master_seed = 7;

    std::string json_serial, json_parallel;
    double mc_serial = best_of_three_ms(
        [&] { json_serial = report_to_json(run_monte_carlo_serial(config)); });
    double mc_parallel =
        best_of_three_ms([&] { json_parallel = report_to_json(run_monte_carlo(config)); });
    std::printf("monte carlo 2x64 reps: serial %.1f ms, parallel %.1f ms (%.2fx), %s\n",
                mc_serial, mc_parallel, mc_serial / mc_parallel,
                json_serial == json_parallel ? "reports identical" : "REPORTS DIFFER");

    bool ok = same_estimates(serial_out, parallel_out) && json_serial == json_parallel;
    return ok ? 0 : 1;
}
