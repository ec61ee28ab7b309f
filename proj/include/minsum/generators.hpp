#ifndef MINSUM_GENERATORS_HPP
#define MINSUM_GENERATORS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "minsum/instance.hpp"

namespace minsum {

enum class Family { Rings, GaussianMixture, UniformBox, RandomMetric };

std::string to_string(Family family);
Family family_from_string(const std::string& text);

/// Fields unused by a family are ignored. Identical specs give identical instances.
struct GeneratorSpec {
    Family family = Family::UniformBox;
    std::uint64_t seed = 0;

    /// Rings: one radius and one count per concentric circle around the origin.
    std::vector<double> radii;
    /// Rings and GaussianMixture: points per circle or per component.
    std::vector<std::size_t> counts;
    /// Rings: standard deviation of the radial noise.
    double noise = 0.0;

    /// GaussianMixture: component spread; centers are uniform in [0, extent]^dim.
    double spread = 1.0;
    /// UniformBox, GaussianMixture and RandomMetric: side of the sampling box.
    double extent = 10.0;
    /// UniformBox and RandomMetric: number of points.
    std::size_t n = 0;
    std::size_t dim = 2;

    std::size_t k = 2;
    /// 0 means all points.
    std::size_t n_prime = 0;
    double epsilon = 0.5;
};

/**
 * Rings, GaussianMixture and UniformBox yield squared-Euclidean point sets;
 * RandomMetric embeds uniform points and keeps their Euclidean distances.
 *
 * Throws InputError on empty or inconsistent parameters.
 */
Instance generate(const GeneratorSpec& spec);

}  // namespace minsum

#endif
