#include "censreg/synthetic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "censreg/rng.hpp"

namespace censreg {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;

// Substream ids within one dataset seed.
enum : std::uint64_t { kStreamInit = 0, kStreamNoise = 1, kStreamCensor = 2 };

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace

void validate_model(const ModelSpec& spec) {
    if (!(spec.rho > 0.0 && spec.rho < 1.0))
        throw std::invalid_argument("rho must lie in (0,1)");
    if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda))
        throw std::invalid_argument("lambda must be positive");
    if (spec.n < 2) throw std::invalid_argument("n must be at least 2");
}

std::vector<double> generate_covariate_path(std::size_t n, double rho,
                                            std::uint64_t seed) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw std::invalid_argument("rho must lie in [0,1)");
    Rng init(Rng::derive_stream(seed, kStreamInit));
    Rng noise(Rng::derive_stream(seed, kStreamNoise));
    double scale = std::sqrt(1.0 - rho * rho);
    std::vector<double> path(n + 1);
    double x = init.normal(); // X_0, standard normal start keeps the chain stationary
    for (std::size_t i = 0; i <= n; ++i) {
        x = rho * x + scale * noise.normal();
        path[i] = x;
    }
    return path;
}

CensoredSample generate_dataset(const ModelSpec& spec) {
    validate_model(spec);
    auto path = generate_covariate_path(spec.n, spec.rho, spec.seed);
    Rng censor(Rng::derive_stream(spec.seed, kStreamCensor));

    CensoredSample sample;
    sample.d = 1;
    sample.observations.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        double xi = path[i];
        double y = 0.0;
        switch (spec.family) {
        case ModelFamily::linear: y = path[i + 1]; break;
        case ModelFamily::sinus: y = std::sin(kPi / 2.0 * xi); break;
        case ModelFamily::parabolic: y = 5.0 / 12.0 * path[i + 1] * path[i + 1] - 2.0; break;
        }
        double c = spec.censoring == CensoringMode::exponential
                       ? censor.exponential(spec.lambda)
                       : std::numeric_limits<double>::infinity();
        CensoredObservation obs;
        obs.x = {xi};
        obs.delta = y <= c ? 1 : 0;
        obs.t = y <= c ? y : c;
        obs.latent = LatentPair{y, c};
        sample.observations.push_back(std::move(obs));
    }
    return sample;
}

double true_regression(const ModelSpec& spec, double x) {
    switch (spec.family) {
    case ModelFamily::linear: return spec.rho * x;
    case ModelFamily::sinus: return std::sin(kPi / 2.0 * x);
    case ModelFamily::parabolic:
        return 5.0 / 12.0 * (spec.rho * spec.rho * x * x + 1.0 - spec.rho * spec.rho) -
               2.0;
    }
    throw std::invalid_argument("unknown model family");
}

double true_density(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double true_numerator(const ModelSpec& spec, double x) {
    return true_regression(spec, x) * true_density(x);
}

double true_censoring_survival(double lambda, double t) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    return t < 0.0 ? 1.0 : std::exp(-lambda * t);
}

std::function<double(double)> true_regression_fn(const ModelSpec& spec) {
    return [spec](double x) { return true_regression(spec, x); };
}

std::function<double(double)> true_censoring_survival_fn(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    return [lambda](double t) { return true_censoring_survival(lambda, t); };
}

double linear_censored_fraction(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    // P(C < Y) with Y standard normal, C ~ Exp(lambda):
    // integral over y > 0 of (1 - e^{-lambda y}) phi(y) dy.
    return 0.5 - std::exp(lambda * lambda / 2.0) * normal_cdf(-lambda);
}

std::string family_name(ModelFamily family) {
    switch (family) {
    case ModelFamily::linear: return "linear";
    case ModelFamily::sinus: return "sinus";
    case ModelFamily::parabolic: return "parabolic";
    }
    return "unknown";
}

ModelFamily family_from_name(const std::string& name) {
    if (name == "linear") return ModelFamily::linear;
    if (name == "sinus") return ModelFamily::sinus;
    if (name == "parabolic") return ModelFamily::parabolic;
    throw std::invalid_argument("unknown model '" + name + "'");
}

} // namespace censreg
