#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "minsum/audit.hpp"
#include "minsum/generators.hpp"
#include "minsum/io.hpp"
#include "minsum/lagrange_search.hpp"
#include "minsum/oracle.hpp"

namespace {

using namespace minsum;

constexpr int kExitOk = 0;
constexpr int kExitAudit = 1;
constexpr int kExitInput = 2;

struct InstanceArgs {
    std::string input;
    std::string mode = "sqeuclid";
    std::size_t k = 0;
    std::size_t n_prime = 0;
    double epsilon = 0.5;
};

void add_instance_options(CLI::App* cmd, InstanceArgs& a, bool need_targets) {
    cmd->add_option("--input", a.input, "CSV points or distance matrix")->required();
    cmd->add_option("--mode", a.mode, "distance mode")
        ->check(CLI::IsMember({"sqeuclid", "metric"}));
    auto* k = cmd->add_option("--k", a.k, "number of clusters");
    auto* np = cmd->add_option("--nprime", a.n_prime, "points to cluster (0 = all)");
    if (need_targets) {
        k->required();
        np->required();
    }
}

DistanceMode parse_mode(const std::string& mode) {
    return mode == "metric" ? DistanceMode::ExplicitMetric : DistanceMode::SqEuclidean;
}

Instance load(const InstanceArgs& a) {
    // Targets are validated against the point count after loading.
    Instance probe = load_instance(a.input, parse_mode(a.mode), 1, 1, 1.0);
    const std::size_t n_prime = a.n_prime == 0 ? probe.size() : a.n_prime;
    return probe.with_targets(a.k, n_prime, a.epsilon);
}

ClusteringResult solve_and_audit(const Instance& inst, const SolverOptions& base_options,
                                 AuditReport& report) {
    SolverOptions options = base_options;
    options.on_probe = [&](const Instance& in, const ProbeTrace& trace) {
        report.merge(audit_probe(in, trace, false));
    };
    ClusteringResult result = min_sum_clustering(inst, options);
    std::optional<double> opt;
    if (canonical_labeling_count(inst.size(), inst.k()) <= kExhaustiveLabelingLimit) {
        opt = brute_force_opt(inst).cost;
    }
    AuditReport top = audit(inst, result, opt);
    top.merge(report);
    report = std::move(top);
    return result;
}

void write_plot_data(const Instance& inst, const ClusteringResult& r, const std::string& path) {
    if (inst.mode() != DistanceMode::SqEuclidean || inst.dimension() != 2) {
        throw InputError("--emit-plot-data needs two-dimensional points");
    }
    std::vector<long> label(inst.size(), -1);
    for (std::size_t c = 0; c < r.clusters.size(); ++c) {
        for (PointIndex x : r.clusters[c]) {
            label[x] = static_cast<long>(c);
        }
    }
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write '" + path + "'");
    }
    out << "x,y,label\n";
    for (PointIndex i = 0; i < inst.size(); ++i) {
        const auto p = inst.point(i);
        out << format_real(p[0]) << ',' << format_real(p[1]) << ',' << label[i] << '\n';
    }
}

int run_cluster(const InstanceArgs& a, std::uint64_t seed, bool force, const std::string& output,
                const std::string& plot) {
    const Instance inst = load(a);
    SolverOptions options;
    options.seed = seed;
    options.delegate_small_k = !force;
    AuditReport report;
    const ClusteringResult result = solve_and_audit(inst, options, report);
    if (output.empty()) {
        write_result(std::cout, inst, result);
    } else {
        save_result(inst, result, output);
    }
    if (!plot.empty()) {
        write_plot_data(inst, result, plot);
    }
    std::cerr << format_report(report);
    return report.ok() ? kExitOk : kExitAudit;
}

int run_oracle(const InstanceArgs& a) {
    const Instance inst = load(a);
    const OracleSolution sol = brute_force_opt(inst);
    std::cout << "opt " << format_real(sol.cost) << '\n';
    for (const auto& c : sol.clusters) {
        std::cout << "cluster";
        for (PointIndex x : c) {
            std::cout << ' ' << x;
        }
        std::cout << '\n';
    }
    return kExitOk;
}

int run_verify(const InstanceArgs& a, const std::string& result_path) {
    ResultHeader header;
    const ClusteringResult result = load_result(result_path, &header);
    InstanceArgs loaded = a;
    loaded.mode = to_string(header.mode);
    loaded.k = header.k;
    loaded.n_prime = header.n_prime;
    loaded.epsilon = header.epsilon;
    const Instance inst = load(loaded);
    if (inst.size() != header.n) {
        throw InputError("result was computed for a different number of points");
    }
    std::optional<double> opt;
    if (canonical_labeling_count(inst.size(), inst.k()) <= kExhaustiveLabelingLimit) {
        opt = brute_force_opt(inst).cost;
    }
    const AuditReport report = audit(inst, result, opt);
    std::cout << format_report(report);
    return report.ok() ? kExitOk : kExitAudit;
}

int run_bench(const std::string& suite, std::size_t seeds) {
    if (suite != "small") {
        throw InputError("unknown suite '" + suite + "'");
    }
    std::mt19937_64 rng(20240601);
    std::size_t failures = 0;
    double worst = 0.0;
    double sum = 0.0;
    std::printf("%-6s %-7s %3s %3s %3s %5s %-12s %14s %14s %10s\n", "seed", "mode", "n", "k", "n'",
                "eps", "branch", "cost", "opt", "ratio");
    for (std::size_t s = 0; s < seeds; ++s) {
        GeneratorSpec spec;
        spec.seed = rng();
        spec.family = s % 2 ? Family::RandomMetric : Family::UniformBox;
        spec.n = 6 + rng() % 7;
        spec.dim = 1 + rng() % 2;
        spec.k = 2 + rng() % 2;
        spec.n_prime = spec.n - rng() % 3;
        spec.epsilon = rng() % 2 ? 0.5 : 1.0;
        const Instance inst = generate(spec);
        SolverOptions options;
        options.delegate_small_k = false;
        AuditReport report;
        const ClusteringResult r = solve_and_audit(inst, options, report);
        const double opt = brute_force_opt(inst).cost;
        const double ratio = opt > 0 ? r.total_cost / opt : 1.0;
        worst = std::max(worst, ratio);
        sum += ratio;
        failures += report.ok() ? 0 : 1;
        std::printf("%-6zu %-7s %3zu %3zu %3zu %5.2f %-12s %14.6g %14.6g %10.4f%s\n", s,
                    to_string(inst.mode()).c_str(), inst.size(), inst.k(), inst.n_prime(),
                    inst.epsilon(), to_string(r.branch).c_str(), r.total_cost, opt, ratio,
                    report.ok() ? "" : "  AUDIT FAILED");
    }
    std::printf("instances %zu  audit failures %zu  mean ratio %.4f  worst ratio %.4f\n", seeds,
                failures, seeds ? sum / static_cast<double>(seeds) : 0.0, worst);
    return failures == 0 ? kExitOk : kExitAudit;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Min-sum k-clustering with outliers"};
    app.require_subcommand(1);

    InstanceArgs cluster_args;
    std::uint64_t seed = 0;
    bool force = false;
    std::string output;
    std::string plot;
    auto* cluster = app.add_subcommand("cluster", "cluster an instance and audit the run");
    add_instance_options(cluster, cluster_args, true);
    cluster->add_option("--epsilon", cluster_args.epsilon, "outlier slack in (0, 1]");
    cluster->add_option("--seed", seed, "seed for the small-k local search");
    cluster->add_option("--output", output, "result file (stdout when omitted)");
    cluster->add_option("--emit-plot-data", plot, "CSV of 2D coordinates with cluster labels");
    cluster->add_flag("--force-primal-dual", force, "skip the small-k solver");

    InstanceArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle", "exact optimum by enumeration");
    add_instance_options(oracle, oracle_args, true);

    InstanceArgs verify_args;
    std::string result_path;
    auto* verify = app.add_subcommand("verify", "re-audit a saved result against its instance");
    verify->add_option("--input", verify_args.input, "instance file")->required();
    verify->add_option("--result", result_path, "result file")->required();

    GeneratorSpec spec;
    std::string family = "box";
    std::string gen_output;
    auto* gen = app.add_subcommand("gen", "generate a seeded instance");
    gen->add_option("--family", family, "instance family")
        ->check(CLI::IsMember({"rings", "gauss", "box", "metric"}));
    gen->add_option("--seed", spec.seed, "generator seed");
    gen->add_option("--n", spec.n, "points (box, metric)");
    gen->add_option("--dim", spec.dim, "dimension (gauss, box, metric)");
    gen->add_option("--radii", spec.radii, "ring radii")->delimiter(',');
    gen->add_option("--counts", spec.counts, "points per ring or component")->delimiter(',');
    gen->add_option("--noise", spec.noise, "radial noise (rings)");
    gen->add_option("--spread", spec.spread, "component spread (gauss)");
    gen->add_option("--extent", spec.extent, "side of the sampling box");
    gen->add_option("--output", gen_output, "CSV file (stdout when omitted)");

    std::string suite = "small";
    std::size_t seeds = 20;
    auto* bench = app.add_subcommand("bench", "oracle comparison on seeded small instances");
    bench->add_option("--suite", suite, "benchmark suite")->check(CLI::IsMember({"small"}));
    bench->add_option("--seeds", seeds, "number of instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*cluster) {
            return run_cluster(cluster_args, seed, force, output, plot);
        }
        if (*oracle) {
            return run_oracle(oracle_args);
        }
        if (*verify) {
            return run_verify(verify_args, result_path);
        }
        if (*gen) {
            spec.family = family_from_string(family);
            const Instance inst = generate(spec);
            if (gen_output.empty()) {
                write_instance(std::cout, inst);
            } else {
                save_instance(inst, gen_output);
            }
            return kExitOk;
        }
        if (*bench) {
            return run_bench(suite, seeds);
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::out_of_range& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitOk;
}
