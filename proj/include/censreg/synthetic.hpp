#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "censreg/sample.hpp"

namespace censreg {

// Dependent regression designs driven by a stationary Gaussian AR(1) chain
// X_i = rho X_{i-1} + sqrt(1 - rho^2) eps_i:
//   linear     Y_i = X_{i+1}
//   sinus      Y_i = sin((pi/2) X_i)
//   parabolic  Y_i = (5/12) X_{i+1}^2 - 2
// with censoring times C_i ~ Exp(lambda) independent of the chain.
enum class ModelFamily { linear, sinus, parabolic };

enum class CensoringMode { exponential, none };

struct ModelSpec {
    ModelFamily family = ModelFamily::linear;
    double rho = 0.9;
    double lambda = 1.5;
    std::size_t n = 2;
    std::uint64_t seed = 0;
    CensoringMode censoring = CensoringMode::exponential;
};

// Throws std::invalid_argument unless 0 < rho < 1, lambda > 0, n >= 2.
void validate_model(const ModelSpec& spec);

// X_1..X_{n+1}, one element beyond n so responses indexed by i+1 are defined.
// rho = 0 is accepted (i.i.d. draws); rho outside [0, 1) throws.
std::vector<double> generate_covariate_path(std::size_t n, double rho,
                                            std::uint64_t seed);

// Full dataset with latent (y, c) recorded per observation.
CensoredSample generate_dataset(const ModelSpec& spec);

// Closed forms under the stationary N(0,1) marginal.
double true_regression(const ModelSpec& spec, double x);
double true_density(double x);
double true_numerator(const ModelSpec& spec, double x); // m(x) * density(x)
double true_censoring_survival(double lambda, double t); // e^{-lambda t}, 1 for t<0

std::function<double(double)> true_regression_fn(const ModelSpec& spec);
std::function<double(double)> true_censoring_survival_fn(double lambda);

// P(delta = 0) for the linear family: Phi(0) - e^{lambda^2/2} Phi(-lambda).
double linear_censored_fraction(double lambda);

std::string family_name(ModelFamily family);
ModelFamily family_from_name(const std::string& name);

} // namespace censreg
