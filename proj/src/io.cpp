#include "minsum/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace minsum {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_real(const std::string& token, std::size_t line) {
    double value = 0.0;
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw InputError("line " + std::to_string(line) + ": bad number '" + token + "'");
    }
    return value;
}

std::size_t parse_index(const std::string& token, std::size_t line) {
    std::size_t value = 0;
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw InputError("line " + std::to_string(line) + ": bad integer '" + token + "'");
    }
    return value;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write '" + path + "'");
    }
    return out;
}

void write_indices(std::ostream& out, const char* key, const IndexSet& s) {
    out << key;
    for (PointIndex x : s) {
        out << ' ' << x;
    }
    out << '\n';
}

}  // namespace

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::vector<std::vector<double>> parse_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string text = trim(raw);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const auto comma = text.find(',', start);
            const std::string cell = trim(std::string_view(text).substr(start, comma - start));
            if (cell.empty()) {
                throw InputError("line " + std::to_string(line) + ": empty field");
            }
            row.push_back(parse_real(cell, line));
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw InputError("line " + std::to_string(line) + ": inconsistent column count");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw InputError("no data rows");
    }
    return rows;
}

Instance load_instance(const std::string& path, DistanceMode mode, std::size_t k, std::size_t n_prime,
                       double epsilon) {
    auto in = open_in(path);
    auto rows = parse_csv(in);
    if (mode == DistanceMode::SqEuclidean) {
        return Instance::from_points(std::move(rows), k, n_prime, epsilon);
    }
    return Instance::from_matrix(rows, k, n_prime, epsilon);
}

void write_instance(std::ostream& out, const Instance& inst) {
    for (PointIndex i = 0; i < inst.size(); ++i) {
        if (inst.mode() == DistanceMode::SqEuclidean) {
            const auto p = inst.point(i);
            for (std::size_t a = 0; a < p.size(); ++a) {
                out << (a ? "," : "") << format_real(p[a]);
            }
        } else {
            for (PointIndex j = 0; j < inst.size(); ++j) {
                out << (j ? "," : "") << format_real(inst.distance(i, j));
            }
        }
        out << '\n';
    }
}

void save_instance(const Instance& inst, const std::string& path) {
    auto out = open_out(path);
    write_instance(out, inst);
}

void write_result(std::ostream& out, const Instance& inst, const ClusteringResult& r) {
    out << "minsum-result v1\n";
    out << "mode " << to_string(inst.mode()) << '\n';
    out << "n " << inst.size() << '\n';
    out << "k " << inst.k() << '\n';
    out << "nprime " << inst.n_prime() << '\n';
    out << "epsilon " << format_real(inst.epsilon()) << '\n';
    out << "branch " << to_string(r.branch) << '\n';
    out << "exact " << (r.exact ? 1 : 0) << '\n';
    out << "b " << r.base << '\n';
    out << "c_eps " << format_real(r.c_eps) << '\n';
    out << "total_cost " << format_real(r.total_cost) << '\n';
    out << "lambda_low " << format_real(r.lambda_low) << '\n';
    out << "lambda_high " << format_real(r.lambda_high) << '\n';
    out << "k_low " << r.k_low << '\n';
    out << "k_high " << r.k_high << '\n';
    out << "rho1 " << format_real(r.rho1) << '\n';
    out << "probes " << r.diagnostics.probes << '\n';
    out << "monotonicity_violations " << r.diagnostics.monotonicity_violations << '\n';
    out << "delta " << format_real(r.diagnostics.delta) << '\n';
    for (const auto& c : r.clusters) {
        write_indices(out, "cluster", c);
    }
    write_indices(out, "outliers", r.outliers);
    for (const auto& cert : r.certificates) {
        out << "certificate " << format_real(cert.lambda);
        for (double a : cert.alpha) {
            out << ' ' << format_real(a);
        }
        out << '\n';
    }
}

void save_result(const Instance& inst, const ClusteringResult& result, const std::string& path) {
    auto out = open_out(path);
    write_result(out, inst, result);
}

ClusteringResult read_result(std::istream& in, ResultHeader* header) {
    std::string raw;
    if (!std::getline(in, raw) || trim(raw) != "minsum-result v1") {
        throw InputError("not a minsum result file");
    }
    ClusteringResult r;
    ResultHeader h;
    std::size_t line = 1;
    while (std::getline(in, raw)) {
        ++line;
        std::istringstream fields(raw);
        std::string key;
        if (!(fields >> key)) {
            continue;
        }
        std::vector<std::string> values;
        for (std::string v; fields >> v;) {
            values.push_back(v);
        }
        auto one = [&]() -> const std::string& {
            if (values.size() != 1) {
                throw InputError("line " + std::to_string(line) + ": '" + key + "' takes one value");
            }
            return values.front();
        };
        auto indices = [&] {
            IndexSet s;
            for (const auto& v : values) {
                s.push_back(parse_index(v, line));
            }
            return s;
        };
        if (key == "mode") {
            const auto& m = one();
            if (m == "sqeuclid") {
                h.mode = DistanceMode::SqEuclidean;
            } else if (m == "metric") {
                h.mode = DistanceMode::ExplicitMetric;
            } else {
                throw InputError("line " + std::to_string(line) + ": unknown mode '" + m + "'");
            }
        } else if (key == "n") {
            h.n = parse_index(one(), line);
        } else if (key == "k") {
            h.k = parse_index(one(), line);
        } else if (key == "nprime") {
            h.n_prime = parse_index(one(), line);
        } else if (key == "epsilon") {
            h.epsilon = parse_real(one(), line);
        } else if (key == "branch") {
            r.branch = branch_from_string(one());
        } else if (key == "exact") {
            r.exact = parse_index(one(), line) != 0;
        } else if (key == "b") {
            r.base = parse_index(one(), line);
        } else if (key == "c_eps") {
            r.c_eps = parse_real(one(), line);
        } else if (key == "total_cost") {
            r.total_cost = parse_real(one(), line);
        } else if (key == "lambda_low") {
            r.lambda_low = parse_real(one(), line);
        } else if (key == "lambda_high") {
            r.lambda_high = parse_real(one(), line);
        } else if (key == "k_low") {
            r.k_low = static_cast<long>(parse_real(one(), line));
        } else if (key == "k_high") {
            r.k_high = static_cast<long>(parse_real(one(), line));
        } else if (key == "rho1") {
            r.rho1 = parse_real(one(), line);
        } else if (key == "probes") {
            r.diagnostics.probes = parse_index(one(), line);
        } else if (key == "monotonicity_violations") {
            r.diagnostics.monotonicity_violations = parse_index(one(), line);
        } else if (key == "delta") {
            r.diagnostics.delta = parse_real(one(), line);
        } else if (key == "cluster") {
            r.clusters.push_back(indices());
        } else if (key == "outliers") {
            r.outliers = indices();
        } else if (key == "certificate") {
            if (values.empty()) {
                throw InputError("line " + std::to_string(line) + ": empty certificate");
            }
            DualCertificate cert;
            cert.lambda = parse_real(values.front(), line);
            for (std::size_t i = 1; i < values.size(); ++i) {
                cert.alpha.push_back(parse_real(values[i], line));
            }
            r.certificates.push_back(std::move(cert));
        } else {
            throw InputError("line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
    }
    if (header) {
        *header = h;
    }
    return r;
}

ClusteringResult load_result(const std::string& path, ResultHeader* header) {
    auto in = open_in(path);
    return read_result(in, header);
}

}  // namespace minsum
