#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "minsum/lagrange_search.hpp"
#include "minsum/oracle.hpp"

namespace minsum {

namespace {

constexpr int kRestarts = 20;

/// Depth-first branch and bound over canonical labelings with exactly n' clustered points.
class BranchAndBound {
public:
    explicit BranchAndBound(const Instance& inst)
        : inst_(inst),
          n_(inst.size()),
          k_(inst.k()),
          max_out_(inst.size() - inst.n_prime()),
          label_(n_, 0),
          members_(k_) {}

    std::vector<IndexSet> solve() {
        best_cost_ = std::numeric_limits<double>::infinity();
        recurse(0, 0, 0, 0.0);
        std::vector<IndexSet> out(k_);
        for (PointIndex x = 0; x < n_; ++x) {
            if (best_label_[x] > 0) {
                out[best_label_[x] - 1].push_back(x);
            }
        }
        std::erase_if(out, [](const IndexSet& c) { return c.empty(); });
        return out;
    }

private:
    void recurse(PointIndex x, std::size_t used, std::size_t outliers, double cost) {
        if (cost >= best_cost_) {
            return;
        }
        if (x == n_) {
            if (outliers != max_out_) {
                return;
            }
            best_cost_ = cost;
            best_label_ = label_;
            return;
        }
        for (std::size_t c = 0; c < used; ++c) {
            double add = 0.0;
            for (PointIndex y : members_[c]) {
                add += inst_.distance(x, y);
            }
            assign(x, c, used, outliers, cost + add);
        }
        if (used < k_) {
            assign(x, used, used + 1, outliers, cost);
        }
        if (outliers < max_out_) {
            label_[x] = 0;
            recurse(x + 1, used, outliers + 1, cost);
        }
    }

    void assign(PointIndex x, std::size_t c, std::size_t used, std::size_t outliers, double cost) {
        label_[x] = c + 1;
        members_[c].push_back(x);
        recurse(x + 1, used, outliers, cost);
        members_[c].pop_back();
        label_[x] = 0;
    }

    const Instance& inst_;
    std::size_t n_;
    std::size_t k_;
    std::size_t max_out_;
    std::vector<std::size_t> label_;
    std::vector<std::size_t> best_label_;
    std::vector<IndexSet> members_;
    double best_cost_ = 0.0;
};

/// First-improvement local search over relabelings and outlier swaps.
class LocalSearch {
public:
    LocalSearch(const Instance& inst, std::mt19937_64& rng)
        : inst_(inst), n_(inst.size()), k_(inst.k()), rng_(rng) {}

    std::pair<std::vector<IndexSet>, double> run() {
        start();
        const double eps = 1e-12 * std::max(1.0, inst_.max_distance());
        bool improved = true;
        while (improved) {
            improved = false;
            for (PointIndex x = 0; x < n_ && !improved; ++x) {
                if (label_[x] < 0) {
                    continue;
                }
                const auto a = static_cast<std::size_t>(label_[x]);
                for (std::size_t c = 0; c < k_; ++c) {
                    if (c != a && sum_[x][c] - sum_[x][a] < -eps) {
                        remove(x);
                        insert(x, c);
                        improved = true;
                        break;
                    }
                }
            }
            for (PointIndex o = 0; o < n_ && !improved; ++o) {
                if (label_[o] >= 0) {
                    continue;
                }
                for (PointIndex x = 0; x < n_ && !improved; ++x) {
                    if (label_[x] < 0) {
                        continue;
                    }
                    const auto a = static_cast<std::size_t>(label_[x]);
                    for (std::size_t c = 0; c < k_; ++c) {
                        const double gain =
                            (c == a ? sum_[o][c] - inst_.distance(o, x) : sum_[o][c]) - sum_[x][a];
                        if (gain < -eps) {
                            remove(x);
                            insert(o, c);
                            improved = true;
                            break;
                        }
                    }
                }
            }
        }
        std::vector<IndexSet> out(k_);
        double cost = 0.0;
        for (PointIndex x = 0; x < n_; ++x) {
            if (label_[x] >= 0) {
                const auto c = static_cast<std::size_t>(label_[x]);
                out[c].push_back(x);
                cost += 0.5 * sum_[x][c];
            }
        }
        std::erase_if(out, [](const IndexSet& c) { return c.empty(); });
        return {out, cost};
    }

private:
    void start() {
        label_.assign(n_, -1);
        sum_.assign(n_, std::vector<double>(k_, 0.0));
        std::vector<PointIndex> perm(n_);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng_);
        std::uniform_int_distribution<std::size_t> pick(0, k_ - 1);
        for (std::size_t i = 0; i < inst_.n_prime(); ++i) {
            insert(perm[i], i < k_ ? i : pick(rng_));
        }
    }

    void insert(PointIndex x, std::size_t c) {
        label_[x] = static_cast<long>(c);
        for (PointIndex y = 0; y < n_; ++y) {
            if (y != x) {
                sum_[y][c] += inst_.distance(x, y);
            }
        }
    }

    void remove(PointIndex x) {
        const auto c = static_cast<std::size_t>(label_[x]);
        label_[x] = -1;
        for (PointIndex y = 0; y < n_; ++y) {
            if (y != x) {
                sum_[y][c] -= inst_.distance(x, y);
            }
        }
    }

    const Instance& inst_;
    std::size_t n_;
    std::size_t k_;
    std::mt19937_64& rng_;
    std::vector<long> label_;
    /// sum_[y][c]: distance from y to the members of cluster c other than y.
    std::vector<std::vector<double>> sum_;
};

}  // namespace

ClusteringResult small_k_solver(const Instance& inst, std::uint64_t seed) {
    ClusteringResult result;
    result.branch = Branch::SmallK;
    result.base = scale_base(inst.epsilon());
    result.c_eps = c_epsilon(result.base);

    if (canonical_labeling_count(inst.size(), inst.k()) <= kExhaustiveLabelingLimit) {
        result.clusters = BranchAndBound(inst).solve();
        result.exact = true;
    } else {
        std::mt19937_64 rng(seed);
        double best = std::numeric_limits<double>::infinity();
        for (int r = 0; r < kRestarts; ++r) {
            auto [clusters, cost] = LocalSearch(inst, rng).run();
            if (cost < best) {
                best = cost;
                result.clusters = std::move(clusters);
            }
        }
        result.exact = false;
    }
    canonicalize(inst, result);
    return result;
}

}  // namespace minsum
