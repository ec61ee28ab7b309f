#ifndef MINSUM_TESTS_SUPPORT_HPP
#define MINSUM_TESTS_SUPPORT_HPP

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "minsum/generators.hpp"
#include "minsum/instance.hpp"

namespace minsum::testing {

inline Instance line(const std::vector<double>& xs, std::size_t k = 1, std::size_t n_prime = 0,
                     double epsilon = 1.0) {
    std::vector<std::vector<double>> pts;
    for (double x : xs) {
        pts.push_back({x});
    }
    return Instance::from_points(std::move(pts), k, n_prime == 0 ? xs.size() : n_prime, epsilon);
}

inline Instance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t dim, bool metric,
                                std::size_t k, std::size_t n_prime, double epsilon) {
    GeneratorSpec spec;
    spec.family = metric ? Family::RandomMetric : Family::UniformBox;
    spec.seed = rng();
    spec.n = n;
    spec.dim = dim;
    spec.k = k;
    spec.n_prime = n_prime;
    spec.epsilon = epsilon;
    return generate(spec);
}

/// Half the sum over ordered pairs, written out directly.
inline double naive_cost(const Instance& inst, const std::vector<std::size_t>& members) {
    double s = 0.0;
    for (std::size_t a : members) {
        for (std::size_t b : members) {
            s += inst.distance(a, b);
        }
    }
    return s / 2.0;
}

/// Optimum over every labeling in {outlier, 1..k}^n, costed from scratch.
inline double odometer_opt(const Instance& inst) {
    const std::size_t n = inst.size();
    const std::size_t k = inst.k();
    std::vector<std::size_t> label(n, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        std::size_t covered = 0;
        for (std::size_t l : label) {
            covered += l ? 1 : 0;
        }
        if (covered >= inst.n_prime()) {
            double cost = 0.0;
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = a + 1; b < n; ++b) {
                    if (label[a] && label[a] == label[b]) {
                        cost += inst.distance(a, b);
                    }
                }
            }
            best = std::min(best, cost);
        }
        std::size_t pos = 0;
        while (pos < n && ++label[pos] > k) {
            label[pos++] = 0;
        }
        if (pos == n) {
            return best;
        }
    }
}

}  // namespace minsum::testing

#endif
