#include "minsum/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "minsum/geometry.hpp"

namespace minsum {

namespace {

class Enumerator {
public:
    explicit Enumerator(const Instance& inst)
        : inst_(inst), label_(inst.size(), 0), members_(inst.k()) {}

    OracleSolution run() {
        best_.cost = std::numeric_limits<double>::infinity();
        visit(0, 0, 0, 0.0);
        return best_;
    }

private:
    // Label 0 marks an outlier; cluster c is named c + 1 and opened in index order.
    void visit(PointIndex x, std::size_t opened, std::size_t covered, double cost) {
        const std::size_t n = inst_.size();
        if (covered + (n - x) < inst_.n_prime()) {
            return;
        }
        if (x == n) {
            if (cost < best_.cost) {
                best_.cost = cost;
                best_.clusters.assign(members_.begin(), members_.begin() + static_cast<std::ptrdiff_t>(opened));
            }
            return;
        }
        label_[x] = 0;
        visit(x + 1, opened, covered, cost);
        const std::size_t limit = std::min(opened + 1, inst_.k());
        for (std::size_t c = 0; c < limit; ++c) {
            double add = 0.0;
            for (PointIndex y : members_[c]) {
                add += inst_.distance(x, y);
            }
            label_[x] = c + 1;
            members_[c].push_back(x);
            visit(x + 1, c == opened ? opened + 1 : opened, covered + 1, cost + add);
            members_[c].pop_back();
        }
        label_[x] = 0;
    }

    const Instance& inst_;
    std::vector<std::size_t> label_;
    std::vector<IndexSet> members_;
    OracleSolution best_;
};

}  // namespace

double canonical_labeling_count(std::size_t n, std::size_t k) {
    double count = std::pow(static_cast<double>(k + 1), static_cast<double>(n));
    for (std::size_t i = 2; i <= k; ++i) {
        count /= static_cast<double>(i);
    }
    return count;
}

OracleSolution brute_force_opt(const Instance& inst) {
    if (canonical_labeling_count(inst.size(), inst.k()) > kExhaustiveLabelingLimit) {
        throw std::invalid_argument("brute_force_opt: instance too large to enumerate");
    }
    return Enumerator(inst).run();
}

double constraint_slack(const Instance& inst, std::span<const double> alpha, double lambda,
                        std::uint64_t base, std::span<const PointIndex> members, PointIndex center) {
    double lhs = 0.0;
    double dist = 0.0;
    for (PointIndex x : members) {
        lhs += alpha[x];
        dist += inst.distance(x, center);
    }
    return lhs - lambda - static_cast<double>(floor_pow(base, members.size())) * dist;
}

ExhaustiveScan exhaustive_scan(const Instance& inst, std::span<const double> alpha,
                               std::span<const char> active, double lambda, std::uint64_t base,
                               bool require_active, double margin) {
    const std::size_t n = inst.size();
    if (n > kExhaustiveSubsetLimit) {
        throw std::invalid_argument("exhaustive_scan: too many points");
    }
    if (require_active && active.size() != n) {
        throw std::invalid_argument("exhaustive_scan: activity flags required");
    }
    ExhaustiveScan scan;
    scan.max_slack = -std::numeric_limits<double>::infinity();
    IndexSet members;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        members.clear();
        bool has_active = false;
        for (PointIndex x = 0; x < n; ++x) {
            if (mask & (1u << x)) {
                members.push_back(x);
                has_active = has_active || (!active.empty() && active[x]);
            }
        }
        for (PointIndex y : members) {
            const double slack = constraint_slack(inst, alpha, lambda, base, members, y);
            if (slack > scan.max_slack) {
                scan.max_slack = slack;
                scan.argmax = TightSet{members, y, floor_log(base, members.size())};
            }
            if (slack >= margin && (has_active || !require_active)) {
                scan.qualifying = true;
            }
        }
    }
    return scan;
}

FeasibilityReport verify_dual_feasible(const Instance& inst, std::span<const double> alpha,
                                       double lambda, std::uint64_t base, bool exhaustive) {
    FeasibilityReport report;
    report.tolerance = tightness_tolerance(inst, lambda);
    report.exhaustive = exhaustive && inst.size() <= kExhaustiveSubsetLimit;
    report.worst_slack = report.exhaustive
                             ? exhaustive_scan(inst, alpha, {}, lambda, base, false, 0.0).max_slack
                             : max_constraint_slack(inst, alpha, lambda, base);
    report.feasible = report.worst_slack <= report.tolerance;
    return report;
}

}  // namespace minsum
