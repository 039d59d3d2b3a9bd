#include "censreg/sample.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "censreg/numfmt.hpp"

namespace censreg {

ValidationReport validate_sample(const CensoredSample& sample) {
    ValidationReport report;
    auto flag = [&](std::size_t i, const std::string& rule) {
        report.violations.push_back({i, rule});
    };
    for (std::size_t i = 0; i < sample.observations.size(); ++i) {
        const auto& obs = sample.observations[i];
        if (obs.delta != 0 && obs.delta != 1) flag(i, "delta not in {0,1}");
        if (!std::isfinite(obs.t)) flag(i, "t not finite");
        if (obs.x.size() != sample.d) flag(i, "x dimension != d");
        for (double xi : obs.x)
            if (!std::isfinite(xi)) {
                flag(i, "x coordinate not finite");
                break;
            }
        if (obs.latent) {
            double y = obs.latent->y;
            double c = obs.latent->c;
            if (obs.t != std::fmin(y, c)) flag(i, "t != min(y,c)");
            int want = y <= c ? 1 : 0;
            if (obs.delta != want) flag(i, "delta != 1{y<=c}");
        }
    }
    return report;
}

double censored_fraction(const CensoredSample& sample) {
    if (sample.observations.empty()) return 0.0;
    std::size_t censored = 0;
    for (const auto& obs : sample.observations)
        if (obs.delta == 0) ++censored;
    return static_cast<double>(censored) / static_cast<double>(sample.size());
}

std::size_t EvaluationGrid::size() const {
    std::size_t total = 1;
    for (const auto& axis : axes) total *= axis.size();
    return axes.empty() ? 0 : total;
}

std::vector<double> EvaluationGrid::point(std::size_t flat) const {
    std::vector<double> p(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
        p[k] = axes[k][flat % axes[k].size()];
        flat /= axes[k].size();
    }
    return p;
}

EvaluationGrid make_uniform_grid(double lo, double hi, std::size_t count,
                                 std::size_t dim) {
    if (!(lo < hi)) throw std::invalid_argument("grid bounds must satisfy lo < hi");
    if (count < 2) throw std::invalid_argument("grid needs at least 2 points");
    if (dim == 0) throw std::invalid_argument("grid dimension must be positive");
    std::vector<double> axis(count);
    for (std::size_t i = 0; i < count; ++i) {
        double f = static_cast<double>(i) / static_cast<double>(count - 1);
        axis[i] = lo + f * (hi - lo);
    }
    axis.back() = hi;
    EvaluationGrid grid;
    grid.axes.assign(dim, axis);
    grid.lower.assign(dim, lo);
    grid.upper.assign(dim, hi);
    return grid;
}

void validate_grid(const EvaluationGrid& grid) {
    if (grid.axes.empty()) throw std::invalid_argument("empty grid");
    if (grid.lower.size() != grid.axes.size() || grid.upper.size() != grid.axes.size())
        throw std::invalid_argument("grid bounds dimension mismatch");
    for (std::size_t k = 0; k < grid.axes.size(); ++k) {
        const auto& axis = grid.axes[k];
        if (axis.empty()) throw std::invalid_argument("empty grid axis");
        if (!std::isfinite(grid.lower[k]) || !std::isfinite(grid.upper[k]))
            throw std::invalid_argument("grid bounds not finite");
        for (std::size_t i = 0; i < axis.size(); ++i) {
            if (!std::isfinite(axis[i]))
                throw std::invalid_argument("grid point not finite");
            if (i > 0 && !(axis[i - 1] < axis[i]))
                throw std::invalid_argument("grid axis not strictly increasing");
            if (axis[i] < grid.lower[k] || axis[i] > grid.upper[k])
                throw std::invalid_argument("grid point outside bounds");
        }
    }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

CensoredSample read_sample_csv(std::istream& in) {
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        header = split_csv(t);
        break;
    }
    if (header.empty()) throw CsvError(0, "missing header");

    std::size_t d = 0;
    while (d < header.size() && trim(header[d]) == "x" + std::to_string(d + 1)) ++d;
    if (d == 0) throw CsvError(0, "header must start with x1");
    bool latent = false;
    std::vector<std::string> rest(header.begin() + d, header.end());
    for (auto& f : rest) f = trim(f);
    if (rest.size() == 2 && rest[0] == "t" && rest[1] == "delta") {
        latent = false;
    } else if (rest.size() == 4 && rest[0] == "t" && rest[1] == "delta" &&
               rest[2] == "y" && rest[3] == "c") {
        latent = true;
    } else {
        throw CsvError(0, "header must be x1,...,xd,t,delta[,y,c]");
    }

    CensoredSample sample;
    sample.d = d;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        ++row;
        auto fields = split_csv(t);
        if (fields.size() != header.size())
            throw CsvError(row, "expected " + std::to_string(header.size()) +
                                    " fields, got " + std::to_string(fields.size()));
        CensoredObservation obs;
        try {
            obs.x.resize(d);
            for (std::size_t k = 0; k < d; ++k) obs.x[k] = parse_double(trim(fields[k]));
            obs.t = parse_double(trim(fields[d]));
            obs.delta = static_cast<int>(parse_int(trim(fields[d + 1])));
            if (latent) {
                LatentPair pair;
                pair.y = parse_double(trim(fields[d + 2]));
                pair.c = parse_double(trim(fields[d + 3]));
                obs.latent = pair;
            }
        } catch (const std::invalid_argument& e) {
            throw CsvError(row, e.what());
        }
        sample.observations.push_back(std::move(obs));
    }
    return sample;
}

CensoredSample read_sample_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError(0, "cannot open '" + path + "'");
    return read_sample_csv(in);
}

std::string sample_to_csv(const CensoredSample& sample, const std::string& comment) {
    std::string out;
    if (!comment.empty()) {
        out += "# ";
        out += comment;
        out += '\n';
    }
    bool latent = !sample.observations.empty() &&
                  sample.observations.front().latent.has_value();
    for (std::size_t k = 1; k <= sample.d; ++k) {
        out += "x" + std::to_string(k);
        out += ',';
    }
    out += latent ? "t,delta,y,c" : "t,delta";
    out += '\n';
    for (const auto& obs : sample.observations) {
        for (double xi : obs.x) {
            out += to_decimal_string(xi);
            out += ',';
        }
        out += to_decimal_string(obs.t);
        out += ',';
        out += std::to_string(obs.delta);
        if (latent && obs.latent) {
            out += ',';
            out += to_decimal_string(obs.latent->y);
            out += ',';
            out += to_decimal_string(obs.latent->c);
        }
        out += '\n';
    }
    return out;
}

} // namespace censreg
