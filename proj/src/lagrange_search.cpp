#include "minsum/lagrange_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "minsum/geometry.hpp"

namespace minsum {

namespace {

/// Doublings tried when the initial upper multiplier still opens too many clusters.
constexpr int kMaxUpperDoublings = 64;

/// Indices of clusters by decreasing size, earlier clusters first on ties.
std::vector<std::size_t> by_size_desc(const std::vector<IndexSet>& clusters) {
    std::vector<std::size_t> order(clusters.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return clusters[a].size() > clusters[b].size();
    });
    return order;
}

std::vector<IndexSet> largest(const std::vector<IndexSet>& clusters, std::size_t k) {
    if (clusters.size() <= k) {
        return clusters;
    }
    const auto order = by_size_desc(clusters);
    std::vector<std::size_t> keep(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(keep.begin(), keep.end());
    std::vector<IndexSet> out;
    for (std::size_t i : keep) {
        out.push_back(clusters[i]);
    }
    return out;
}

/// Peels the highest index off the largest cluster until there are k clusters.
void split_to(std::vector<IndexSet>& clusters, std::size_t k) {
    while (clusters.size() < k) {
        const auto order = by_size_desc(clusters);
        if (order.empty() || clusters[order.front()].size() < 2) {
            return;
        }
        IndexSet& big = clusters[order.front()];
        const PointIndex x = big.back();
        big.pop_back();
        clusters.push_back({x});
    }
}

ClusteringResult degenerate(const Instance& inst) {
    ClusteringResult r;
    r.branch = Branch::Degenerate;
    r.base = scale_base(inst.epsilon());
    r.c_eps = c_epsilon(r.base);
    const std::size_t covered = inst.n_prime();
    IndexSet first(covered);
    std::iota(first.begin(), first.end(), 0);
    r.clusters = partition_evenly(first, std::min(inst.k(), covered));
    canonicalize(inst, r);
    return r;
}

}  // namespace

std::string to_string(Branch branch) {
    switch (branch) {
        case Branch::BipointHigh: return "BipointHigh";
        case Branch::BipointLow: return "BipointLow";
        case Branch::SmallK: return "SmallK";
        case Branch::Degenerate: return "Degenerate";
    }
    return "Unknown";
}

Branch branch_from_string(const std::string& text) {
    for (Branch b : {Branch::BipointHigh, Branch::BipointLow, Branch::SmallK, Branch::Degenerate}) {
        if (to_string(b) == text) {
            return b;
        }
    }
    throw InputError("unknown branch '" + text + "'");
}

std::uint64_t scale_base(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw std::invalid_argument("scale_base: epsilon must lie in (0, 1]");
    }
    const double raw = std::ceil((1.0 + epsilon) / epsilon - 1e-12);
    return std::max<std::uint64_t>(2, static_cast<std::uint64_t>(raw));
}

double c_epsilon(std::uint64_t base) {
    const double b = static_cast<double>(base);
    return 18.0 * b * b * b / (b - 1.0);
}

double approximation_factor(std::uint64_t base, double epsilon) {
    return 8.0 * (c_epsilon(base) + 1.0) / epsilon;
}

double bipoint_rho(long k, long k1, long k2) {
    if (!(k1 > k && k >= k2)) {
        throw std::invalid_argument("bipoint_rho: need k1 > k >= k2");
    }
    return static_cast<double>(k - k2) / static_cast<double>(k1 - k2);
}

bool prefers_low_side(double rho, double epsilon) {
    return rho >= 1.0 - epsilon / 4.0;
}

void canonicalize(const Instance& inst, ClusteringResult& result) {
    std::erase_if(result.clusters, [](const IndexSet& c) { return c.empty(); });
    for (auto& c : result.clusters) {
        std::sort(c.begin(), c.end());
    }
    std::sort(result.clusters.begin(), result.clusters.end());
    std::vector<char> used(inst.size(), 0);
    result.total_cost = 0.0;
    for (const auto& c : result.clusters) {
        for (PointIndex x : c) {
            used[x] = 1;
        }
        result.total_cost += cluster_cost(inst, c);
    }
    result.outliers.clear();
    for (PointIndex x = 0; x < inst.size(); ++x) {
        if (!used[x]) {
            result.outliers.push_back(x);
        }
    }
}

ProbeResult probe(const Instance& inst, double lambda, std::uint64_t base) {
    ProbeResult r;
    r.trace.lambda = lambda;
    r.trace.base = base;
    r.trace.phase1 = run_phase1(inst, lambda, base);
    r.trace.phase2 = run_phase2(inst, r.trace.phase1, inst.n_prime());
    r.trace.phase3 = run_phase3(r.trace.phase2.assignments, base);

    for (const auto& c : r.trace.phase3.clusters) {
        r.clusters.push_back(c.members);
    }
    r.k_prime = static_cast<long>(r.clusters.size()) - 1;
    if (!r.clusters.empty()) {
        std::size_t smallest = 0;
        for (std::size_t i = 1; i < r.clusters.size(); ++i) {
            if (r.clusters[i].size() < r.clusters[smallest].size()) {
                smallest = i;
            }
        }
        const double size = static_cast<double>(r.clusters[smallest].size());
        if (3.0 * size <= inst.epsilon() * static_cast<double>(inst.n_prime())) {
            r.clusters.erase(r.clusters.begin() + static_cast<std::ptrdiff_t>(smallest));
            r.removed_small = true;
        }
    }
    return r;
}

ClusteringResult min_sum_clustering(const Instance& inst, const SolverOptions& options) {
    const std::size_t k = inst.k();
    const double eps = inst.epsilon();
    if (k >= inst.n_prime()) {
        return degenerate(inst);
    }
    const double total = inst.total_pair_distance();
    if (total == 0.0) {
        return degenerate(inst);
    }
    if (options.delegate_small_k && static_cast<double>(k) <= 4.0 / eps) {
        return small_k_solver(inst, options.seed);
    }

    ClusteringResult result;
    result.base = scale_base(eps);
    result.c_eps = c_epsilon(result.base);
    const std::uint64_t b = result.base;
    const double n_plus_k = static_cast<double>(inst.size() + k);

    std::vector<std::pair<double, long>> history;
    auto run = [&](double lambda) {
        ProbeResult p = probe(inst, lambda, b);
        if (options.on_probe) {
            options.on_probe(inst, p.trace);
        }
        history.emplace_back(lambda, p.k_prime);
        return p;
    };
    auto finish = [&](ClusteringResult& r) {
        r.diagnostics.probes = history.size();
        for (const auto& [la, ka] : history) {
            for (const auto& [lb, kb] : history) {
                if (la < lb && ka < kb) {
                    ++r.diagnostics.monotonicity_violations;
                }
            }
        }
        canonicalize(inst, r);
    };
    auto certificate = [](const ProbeResult& p) {
        return DualCertificate{p.trace.lambda, p.trace.phase1.alpha};
    };

    ProbeResult low = run(0.0);
    if (low.k_prime <= static_cast<long>(k)) {
        result.branch = Branch::BipointHigh;
        result.clusters = largest(low.clusters, k);
        result.k_low = result.k_high = low.k_prime;
        result.rho1 = 0.0;
        result.certificates.push_back(certificate(low));
        finish(result);
        return result;
    }

    double lambda_high = total;
    ProbeResult high = run(lambda_high);
    for (int i = 0; i < kMaxUpperDoublings && high.k_prime > static_cast<long>(k); ++i) {
        lambda_high *= 2.0;
        high = run(lambda_high);
    }
    if (high.k_prime > static_cast<long>(k)) {
        throw std::logic_error("min_sum_clustering: no opening cost yields at most k clusters");
    }

    double lambda_low = 0.0;
    const double delta =
        std::min(2.0 / (n_plus_k * total), 2.0 * inst.min_positive_distance() / n_plus_k);
    result.diagnostics.delta = delta;

    while (lambda_high - lambda_low > delta) {
        const double mid = 0.5 * (lambda_low + lambda_high);
        if (!(mid > lambda_low && mid < lambda_high)) {
            break;
        }
        ProbeResult p = run(mid);
        if (p.k_prime == static_cast<long>(k) && p.clusters.size() <= k) {
            result.branch = Branch::BipointHigh;
            result.clusters = p.clusters;
            result.lambda_low = lambda_low;
            result.lambda_high = mid;
            result.k_low = low.k_prime;
            result.k_high = p.k_prime;
            result.rho1 = 1.0;
            result.certificates = {certificate(low), certificate(p)};
            finish(result);
            return result;
        }
        if (p.k_prime > static_cast<long>(k)) {
            lambda_low = mid;
            low = std::move(p);
        } else {
            lambda_high = mid;
            high = std::move(p);
        }
    }

    result.lambda_low = lambda_low;
    result.lambda_high = lambda_high;
    result.k_low = low.k_prime;
    result.k_high = high.k_prime;
    result.rho1 = bipoint_rho(static_cast<long>(k), low.k_prime, high.k_prime);
    result.certificates = {certificate(low), certificate(high)};
    if (prefers_low_side(result.rho1, eps)) {
        result.branch = Branch::BipointLow;
        result.clusters = largest(low.clusters, k);
    } else {
        result.branch = Branch::BipointHigh;
        result.clusters = largest(high.clusters, k);
        split_to(result.clusters, k);
    }
    finish(result);
    return result;
}

}  // namespace minsum
