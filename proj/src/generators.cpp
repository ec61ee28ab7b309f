#include "minsum/generators.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace minsum {

std::string to_string(Family family) {
    switch (family) {
        case Family::Rings: return "rings";
        case Family::GaussianMixture: return "gauss";
        case Family::UniformBox: return "box";
        case Family::RandomMetric: return "metric";
    }
    return "unknown";
}

Family family_from_string(const std::string& text) {
    for (Family f : {Family::Rings, Family::GaussianMixture, Family::UniformBox, Family::RandomMetric}) {
        if (to_string(f) == text) {
            return f;
        }
    }
    throw InputError("unknown family '" + text + "'");
}

Instance generate(const GeneratorSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::vector<std::vector<double>> pts;

    switch (spec.family) {
        case Family::Rings: {
            if (spec.radii.empty() || spec.radii.size() != spec.counts.size()) {
                throw InputError("rings: need one count per radius");
            }
            std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
            std::normal_distribution<double> jitter(0.0, 1.0);
            for (std::size_t r = 0; r < spec.radii.size(); ++r) {
                if (spec.counts[r] == 0 || spec.radii[r] < 0.0) {
                    throw InputError("rings: counts must be positive and radii nonnegative");
                }
                for (std::size_t i = 0; i < spec.counts[r]; ++i) {
                    const double t = angle(rng);
                    const double rad = spec.radii[r] + spec.noise * jitter(rng);
                    pts.push_back({rad * std::cos(t), rad * std::sin(t)});
                }
            }
            break;
        }
        case Family::GaussianMixture: {
            if (spec.counts.empty() || spec.dim == 0) {
                throw InputError("gauss: need at least one component and dimension");
            }
            std::uniform_real_distribution<double> where(0.0, spec.extent);
            std::normal_distribution<double> jitter(0.0, spec.spread);
            for (std::size_t c : spec.counts) {
                if (c == 0) {
                    throw InputError("gauss: component counts must be positive");
                }
                std::vector<double> center(spec.dim);
                for (double& v : center) {
                    v = where(rng);
                }
                for (std::size_t i = 0; i < c; ++i) {
                    std::vector<double> p(spec.dim);
                    for (std::size_t a = 0; a < spec.dim; ++a) {
                        p[a] = center[a] + jitter(rng);
                    }
                    pts.push_back(std::move(p));
                }
            }
            break;
        }
        case Family::UniformBox:
        case Family::RandomMetric: {
            if (spec.n == 0 || spec.dim == 0) {
                throw InputError(to_string(spec.family) + ": n and dim must be positive");
            }
            std::uniform_real_distribution<double> where(0.0, spec.extent);
            for (std::size_t i = 0; i < spec.n; ++i) {
                std::vector<double> p(spec.dim);
                for (double& v : p) {
                    v = where(rng);
                }
                pts.push_back(std::move(p));
            }
            break;
        }
    }

    const std::size_t n_prime = spec.n_prime == 0 ? pts.size() : spec.n_prime;
    if (spec.family != Family::RandomMetric) {
        return Instance::from_points(std::move(pts), spec.k, n_prime, spec.epsilon);
    }
    const std::size_t n = pts.size();
    std::vector<std::vector<double>> matrix(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t a = 0; a < spec.dim; ++a) {
                const double diff = pts[i][a] - pts[j][a];
                s += diff * diff;
            }
            matrix[i][j] = matrix[j][i] = std::sqrt(s);
        }
    }
    return Instance::from_matrix(std::move(matrix), spec.k, n_prime, spec.epsilon);
}

}  // namespace minsum
