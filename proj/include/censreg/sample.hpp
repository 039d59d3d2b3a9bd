#pragma once
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace censreg {

// Latent lifetime/censoring pair, carried only by synthetic data. Estimators
// never read it; it exists so a harness can compare against ground truth.
struct LatentPair {
    double y = 0.0;
    double c = 0.0;
};

// One observed triplet (x, t, delta) where t = min(y, c) and
// delta = 1 iff the lifetime was observed (y <= c).
struct CensoredObservation {
    std::vector<double> x;
    double t = 0.0;
    int delta = 1;
    std::optional<LatentPair> latent;
};

struct CensoredSample {
    std::vector<CensoredObservation> observations;
    std::size_t d = 1; // covariate dimension, shared by all observations

    std::size_t size() const { return observations.size(); }
};

struct Violation {
    std::size_t index = 0; // offending observation, 0-based
    std::string rule;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks every per-observation invariant; violations are data, not failures.
ValidationReport validate_sample(const CensoredSample& sample);

// Fraction of observations with delta == 0.
double censored_fraction(const CensoredSample& sample);

// Rectangular evaluation lattice over a compact box. For d = 1 this is just
// an ascending sequence of points. Points are enumerated row-major with the
// last axis fastest.
struct EvaluationGrid {
    std::vector<std::vector<double>> axes; // strictly increasing per axis
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dimension() const { return axes.size(); }
    std::size_t size() const;
    std::vector<double> point(std::size_t flat) const;
};

// Uniformly spaced grid on [lo, hi], replicated over `dim` axes.
EvaluationGrid make_uniform_grid(double lo, double hi, std::size_t count,
                                 std::size_t dim = 1);

// Throws std::invalid_argument if the grid violates its invariants.
void validate_grid(const EvaluationGrid& grid);

// CSV sample format: header `x1,...,xd,t,delta[,y,c]`, one row per
// observation, '.' decimal separator, delta written as 0/1. Lines starting
// with '#' are ignored (used for configuration echoes).
struct CsvError : std::runtime_error {
    std::size_t row; // 1-based data row, 0 for header problems
    CsvError(std::size_t row_, const std::string& what_)
        : std::runtime_error(what_), row(row_) {}
};

CensoredSample read_sample_csv(std::istream& in);
CensoredSample read_sample_csv_file(const std::string& path);
std::string sample_to_csv(const CensoredSample& sample,
                          const std::string& comment = {});

} // namespace censreg
