#include "minsum/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "minsum/geometry.hpp"
#include "minsum/oracle.hpp"

namespace minsum {

namespace {

std::string describe(const IndexSet& s) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << (i ? "," : "") << s[i];
    }
    out << '}';
    return out.str();
}

void check_feasible(AuditReport& report, const Instance& inst, std::span<const double> alpha,
                    double lambda, std::uint64_t base, bool exhaustive, const std::string& where) {
    if (alpha.size() != inst.size()) {
        report.fail(where + ".certificate", "alpha has the wrong length");
        report.dual_feasible = false;
        return;
    }
    const auto fr = verify_dual_feasible(inst, alpha, lambda, base, exhaustive);
    report.worst_constraint_slack = std::max(report.worst_constraint_slack, fr.worst_slack);
    if (!fr.feasible) {
        report.dual_feasible = false;
        std::ostringstream d;
        d << "lambda " << lambda << " worst slack " << fr.worst_slack << " > " << fr.tolerance;
        report.fail(where + ".dual_feasible", d.str());
    }
}

}  // namespace

AuditReport::AuditReport() : worst_constraint_slack(-std::numeric_limits<double>::infinity()) {}

bool AuditReport::ok() const {
    return dual_feasible && size_bound_violations.empty() && invariant_failures.empty() &&
           !cost_ratio_infinite && (!cost_ratio || *cost_ratio <= ratio_bound);
}

void AuditReport::fail(std::string check, std::string detail) {
    invariant_failures.push_back({std::move(check), std::move(detail)});
}

void AuditReport::merge(const AuditReport& other) {
    dual_feasible = dual_feasible && other.dual_feasible;
    worst_constraint_slack = std::max(worst_constraint_slack, other.worst_constraint_slack);
    size_bound_violations.insert(size_bound_violations.end(), other.size_bound_violations.begin(),
                                 other.size_bound_violations.end());
    invariant_failures.insert(invariant_failures.end(), other.invariant_failures.begin(),
                              other.invariant_failures.end());
    probes_audited += other.probes_audited;
}

AuditReport audit(const Instance& inst, const ClusteringResult& result,
                  std::optional<double> oracle_opt) {
    AuditReport report;
    const std::size_t n = inst.size();
    const double n_prime = static_cast<double>(inst.n_prime());

    if (result.clusters.size() > inst.k()) {
        report.fail("result.count", std::to_string(result.clusters.size()) + " clusters > k");
    }
    std::vector<int> seen(n, 0);
    std::size_t clustered = 0;
    double cost = 0.0;
    for (const auto& c : result.clusters) {
        if (c.empty()) {
            report.fail("result.empty_cluster", "cluster without members");
            continue;
        }
        bool valid = true;
        for (PointIndex x : c) {
            if (x >= n) {
                report.fail("result.index", "point " + std::to_string(x) + " out of range");
                valid = false;
            } else if (seen[x]++ > 0) {
                report.fail("result.disjoint", "point " + std::to_string(x) + " in two clusters");
            }
        }
        clustered += c.size();
        if (valid) {
            cost += cluster_cost(inst, c);
        }
    }
    for (PointIndex x : result.outliers) {
        if (x >= n) {
            report.fail("result.index", "outlier " + std::to_string(x) + " out of range");
        } else if (seen[x]++ > 0) {
            report.fail("result.outliers", "point " + std::to_string(x) + " both clustered and outlier");
        }
    }
    for (PointIndex x = 0; x < n; ++x) {
        if (seen[x] == 0) {
            report.fail("result.outliers", "point " + std::to_string(x) + " missing");
        }
    }

    report.outlier_bound = inst.epsilon() * n_prime;
    report.outlier_excess = clustered < inst.n_prime() ? inst.n_prime() - clustered : 0;
    if (static_cast<double>(clustered) > n_prime ||
        static_cast<double>(report.outlier_excess) > report.outlier_bound * (1 + kRelTolerance)) {
        report.fail("result.coverage", std::to_string(clustered) + " points clustered");
    }
    if (std::abs(cost - result.total_cost) > kRelTolerance * std::max(1.0, std::abs(cost))) {
        std::ostringstream d;
        d << "stored " << result.total_cost << " recomputed " << cost;
        report.fail("result.cost", d.str());
    }

    for (const auto& cert : result.certificates) {
        check_feasible(report, inst, cert.alpha, cert.lambda, result.base, false, "result");
    }

    report.ratio_bound = approximation_factor(result.base, inst.epsilon());
    if (oracle_opt) {
        if (*oracle_opt > 0.0) {
            report.cost_ratio = cost / *oracle_opt;
        } else if (cost <= kRelTolerance * std::max(1.0, inst.max_distance())) {
            report.cost_ratio = 1.0;
        } else {
            report.cost_ratio_infinite = true;
            report.fail("result.ratio", "positive cost against zero optimum");
        }
        if (report.cost_ratio && *report.cost_ratio > report.ratio_bound) {
            std::ostringstream d;
            d << "ratio " << *report.cost_ratio << " > " << report.ratio_bound;
            report.fail("result.ratio", d.str());
        }
    }
    return report;
}

AuditReport audit_probe(const Instance& inst, const ProbeTrace& trace, bool exhaustive_dual) {
    AuditReport report;
    report.probes_audited = 1;
    const std::size_t n = inst.size();
    const std::uint64_t b = trace.base;
    const auto& p1 = trace.phase1;
    const auto& alpha = p1.alpha;
    const double tol = p1.tolerance;

    check_feasible(report, inst, alpha, trace.lambda, b, exhaustive_dual, "phase1");
    if (alpha.size() != n) {
        return report;
    }

    // Phase 1: dual values, common value of the unclustered, coverage.
    std::vector<char> clustered(n, 0);
    std::size_t covered = 0;
    for (const auto& c : p1.pclusters) {
        for (PointIndex x : c.members) {
            if (alpha[x] < scaled_distance(inst, x, c, b) - tol) {
                report.fail("phase1.dual_values", "point " + std::to_string(x) + " below its distance");
            }
            if (!clustered[x]) {
                clustered[x] = 1;
                ++covered;
            }
        }
    }
    if (covered > inst.n_prime()) {
        report.fail("phase1.coverage", "collected clusters cover more than n' points");
    }
    std::size_t with_last = covered;
    if (p1.y_last) {
        for (PointIndex x : p1.y_last->members) {
            with_last += clustered[x] ? 0 : 1;
        }
    }
    if (with_last < inst.n_prime()) {
        report.fail("phase1.coverage", "fewer than n' points reachable");
    }
    double gamma = -std::numeric_limits<double>::infinity();
    for (PointIndex x = 0; x < n; ++x) {
        gamma = std::max(gamma, alpha[x]);
    }
    for (PointIndex x = 0; x < n; ++x) {
        if (!clustered[x] && std::abs(alpha[x] - gamma) > tol) {
            report.fail("phase1.gamma", "unclustered point " + std::to_string(x) + " below the top dual");
        }
    }

    // Phase 2: disjoint parts covering exactly n' points, independence, connection cost.
    const auto& p2 = trace.phase2;
    const double factor = inst.mode() == DistanceMode::SqEuclidean ? 1.0 / 9.0 : 1.0 / 3.0;
    std::vector<char> assigned(n, 0);
    std::size_t total = 0;
    for (const auto& m : p2.assignments) {
        if (m.part_scale > m.anchor_scale) {
            report.fail("phase2.scale", "part scale above its anchor's");
        }
        for (PointIndex x : m.part) {
            if (assigned[x]++) {
                report.fail("phase2.disjoint", "point " + std::to_string(x) + " in two parts");
            }
            ++total;
            const double reach = static_cast<double>(int_pow(b, m.part_scale)) * inst.distance(x, m.part_ctr);
            if (alpha[x] < factor * reach - tol) {
                std::ostringstream d;
                d << "point " << x << " alpha " << alpha[x] << " reach " << reach;
                report.fail("phase2.connection", d.str());
            }
        }
    }
    if (total != inst.n_prime()) {
        report.fail("phase2.total", std::to_string(total) + " points assigned, n' = " +
                                        std::to_string(inst.n_prime()));
    }
    const auto& pcl = p1.pclusters;
    for (std::size_t i = 0; i < p2.anchors.size(); ++i) {
        for (std::size_t j = i + 1; j < p2.anchors.size(); ++j) {
            if (conflict_edge(inst, pcl[p2.anchors[i]], pcl[p2.anchors[j]], alpha, b, tol)) {
                report.fail("phase2.independent", "anchors " + std::to_string(p2.anchors[i]) + " and " +
                                                      std::to_string(p2.anchors[j]) + " conflict");
            }
        }
    }
    for (const auto& blk : p2.blocked) {
        if (!conflict_edge(inst, pcl[blk.cluster], pcl[blk.anchor], alpha, b, tol) ||
            pcl[blk.anchor].scale < pcl[blk.cluster].scale) {
            report.fail("phase2.blocking", "cluster " + std::to_string(blk.cluster) + " wrongly blocked");
        }
    }

    // Phase 3: size windows, discards, union-disjointness.
    const auto& p3 = trace.phase3;
    std::vector<char> placed(n, 0);
    auto place = [&](PointIndex x) {
        if (placed[x]++) {
            report.fail("phase3.disjoint", "point " + std::to_string(x) + " placed twice");
        }
        if (!assigned[x]) {
            report.fail("phase3.union", "point " + std::to_string(x) + " not from phase 2");
        }
    };
    for (const auto& c : p3.clusters) {
        for (PointIndex x : c.members) {
            place(x);
        }
        const double size = static_cast<double>(c.members.size());
        const double unit = static_cast<double>(int_pow(b, c.scale + 2));
        bool bad = false;
        if (c.bucket == Bucket::Top) {
            bad = size > 2.0 * unit ||
                  (c.anchor != kOverflowAnchor && size < static_cast<double>(int_pow(b, c.scale)));
        } else {
            bad = size < unit || size >= 2.0 * unit;
        }
        if (bad) {
            std::ostringstream d;
            d << (c.bucket == Bucket::Top ? "top" : "low") << " cluster at scale " << c.scale
              << " anchor " << (c.anchor == kOverflowAnchor ? std::string("overflow") : std::to_string(c.anchor))
              << " has " << c.members.size() << " points " << describe(c.members);
            report.size_bound_violations.push_back(d.str());
        }
    }
    for (const auto& d : p3.discards) {
        for (PointIndex x : d.points) {
            place(x);
        }
        if (d.points.size() >= int_pow(b, d.scale + 2)) {
            report.size_bound_violations.push_back("discarded bucket at scale " + std::to_string(d.scale) +
                                                   " could have opened a cluster");
        }
    }
    for (PointIndex x = 0; x < n; ++x) {
        if (assigned[x] && !placed[x]) {
            report.fail("phase3.union", "point " + std::to_string(x) + " lost");
        }
    }
    const double discard_bound = static_cast<double>(inst.n_prime()) / static_cast<double>(b - 1);
    if (static_cast<double>(p3.discarded.size()) >= discard_bound) {
        report.size_bound_violations.push_back(std::to_string(p3.discarded.size()) +
                                               " points discarded, bound n'/(b-1)");
    }
    return report;
}

std::string format_report(const AuditReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << "audit: " << (r.ok() ? "ok" : "FAILED") << '\n';
    out << "dual_feasible: " << (r.dual_feasible ? "true" : "false") << '\n';
    out << "worst_constraint_slack: " << r.worst_constraint_slack << '\n';
    out << "outlier_excess: " << r.outlier_excess << " (bound " << r.outlier_bound << ")\n";
    if (r.cost_ratio_infinite) {
        out << "cost_ratio: inf\n";
    } else if (r.cost_ratio) {
        out << "cost_ratio: " << *r.cost_ratio << " (bound " << r.ratio_bound << ")\n";
    }
    out << "probes_audited: " << r.probes_audited << '\n';
    out << "size_bound_violations: " << r.size_bound_violations.size() << '\n';
    for (const auto& v : r.size_bound_violations) {
        out << "  " << v << '\n';
    }
    out << "invariant_failures: " << r.invariant_failures.size() << '\n';
    for (const auto& f : r.invariant_failures) {
        out << "  " << f.check << ": " << f.detail << '\n';
    }
    return out.str();
}

}  // namespace minsum
