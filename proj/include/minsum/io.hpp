#ifndef MINSUM_IO_HPP
#define MINSUM_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "minsum/lagrange_search.hpp"

/**
 * @file io.hpp
 * @brief CSV instance files and the text result format.
 *
 * Result files start with the line "minsum-result v1" followed by
 * "key value..." lines. Reals are written with 17 significant digits so a
 * load reproduces every stored double exactly.
 */

namespace minsum {

/// Rows of comma-separated reals; blank lines and lines starting with '#' are skipped.
std::vector<std::vector<double>> parse_csv(std::istream& in);

Instance load_instance(const std::string& path, DistanceMode mode, std::size_t k, std::size_t n_prime,
                       double epsilon);

/// Points as CSV rows, or the full distance matrix in metric mode.
void write_instance(std::ostream& out, const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

void write_result(std::ostream& out, const Instance& inst, const ClusteringResult& result);
void save_result(const Instance& inst, const ClusteringResult& result, const std::string& path);

/// Header fields of a result file, so it can be checked against an instance.
struct ResultHeader {
    DistanceMode mode = DistanceMode::SqEuclidean;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t n_prime = 0;
    double epsilon = 0.0;
};

ClusteringResult read_result(std::istream& in, ResultHeader* header = nullptr);
ClusteringResult load_result(const std::string& path, ResultHeader* header = nullptr);

/// Formats a double with 17 significant digits.
std::string format_real(double value);

}  // namespace minsum

#endif
