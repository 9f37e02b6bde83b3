// Copyright 2026 The flcu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "flcu/flcu.hpp"

namespace fs = std::filesystem;
using namespace flcu;

namespace {

struct InstanceArgs {
    std::string file;
    std::string generator = "regular";
    int n = 12;
    int degree = 3;
    double p = 0.5;
    int k = 4;
    std::uint64_t graph_seed = 1;
};

void add_instance_options(CLI::App* app, InstanceArgs& a) {
    app->add_option("--instance", a.file, "Instance file (overrides the generator)")->check(CLI::ExistingFile);
    app->add_option("--generator", a.generator, "regular or er")->check(CLI::IsMember({"regular", "er"}));
    app->add_option("--n", a.n, "Number of nodes")->check(CLI::Range(1, 64));
    app->add_option("--degree", a.degree, "Degree for regular graphs");
    app->add_option("--p", a.p, "Edge probability for er graphs")->check(CLI::Range(0.0, 1.0));
    app->add_option("--k", a.k, "Subgraph size");
    app->add_option("--graph-seed", a.graph_seed, "Graph generator seed");
}

DksInstance load_instance(const InstanceArgs& a) {
    if (!a.file.empty()) {
        std::ifstream in(a.file);
        const auto f = read_instance(in);
        return build_dks(f.graph, f.k);
    }
    const Graph g = a.generator == "regular" ? random_regular_graph(a.n, a.degree, a.graph_seed)
                                             : erdos_renyi_graph(a.n, a.p, a.graph_seed);
    return build_dks(g, a.k);
}

class Outputs {
  public:
    Outputs(std::string dir, std::string hash) : dir_(std::move(dir)), hash_(std::move(hash)) {
        fs::create_directories(dir_);
    }

    /// Opens `name` in the output directory with the standard header written.
    std::ofstream open(const std::string& name, const std::string& kind) {
        const auto path = fs::path(dir_) / name;
        std::ofstream os(path);
        if (!os) {
            throw std::runtime_error("cannot write " + path.string());
        }
        write_header(os, kind, hash_);
        std::cout << "wrote " << path.string() << "\n";
        return os;
    }

    const std::string& hash() const {
        return hash_;
    }

  private:
    std::string dir_;
    std::string hash_;
};

std::vector<int> parse_modes(const std::string& s, int max_mode) {
    std::vector<int> out;
    if (s == "all") {
        for (int m = 1; m <= max_mode; ++m) {
            out.push_back(m);
        }
        return out;
    }
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        out.push_back(std::stoi(tok));
    }
    return out;
}

void write_params(std::ostream& os, const ParamMap& params) {
    for (const auto& [k, v] : params) {
        os << k << " " << format_double(v) << "\n";
    }
}

std::string mode_stem(const ModeResult& r) {
    return std::string(family_name(r.family)) + "-mode" + std::to_string(r.mode);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier LCU decompositions and LCU-QAOA experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML/INI config file; flags override its values");
    app.set_version_flag("--version", std::string(kVersion));

    std::string out_dir = ".";
    int workers = 1;
    std::uint64_t seed = 1;
    app.add_option("--output-dir", out_dir, "Output directory")->envname("FLCU_OUTPUT_DIR")->configurable(false);
    app.add_option("--workers", workers, "Worker threads (part of the config hash)")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Master seed");

    // decompose
    auto* decompose = app.add_subcommand("decompose", "Build a diagonal or XY LCU and report its cost");
    std::string kind;
    int dn = 12, db = 4;
    double dgamma = 0.5, dbeta = 0.3;
    std::vector<double> fvals;
    std::size_t pool = 100000, circuits = 1000, gamma_samples = 100000;
    decompose->add_option("kind", kind, "diagonal or xy")->required()->check(CLI::IsMember({"diagonal", "xy"}));
    decompose->add_option("--n", dn, "Qubits")->check(CLI::Range(1, 64));
    decompose->add_option("--b", db, "Penalty target weight: f(k) = (k-b)^2");
    decompose->add_option("--f", fvals, "Explicit f(0..m) values, replacing --n/--b")->delimiter(',');
    decompose->add_option("--gamma", dgamma, "Diagonal angle");
    decompose->add_option("--beta", dbeta, "XY mixer angle");
    decompose->add_option("--pool", pool, "XY pool size");
    decompose->add_option("--circuits", circuits, "Branches drawn from the pool");
    decompose->add_option("--gamma-samples", gamma_samples, "Independent samples for Gamma");

    // run / optimize
    InstanceArgs inst_args;
    ExperimentConfig cfg;
    std::string family = "all", modes = "all", evaluator = "exact";
    auto add_experiment_options = [&](CLI::App* sub) {
        add_instance_options(sub, inst_args);
        sub->add_option("--grid-2d", cfg.grid_2d, "Grid points per axis for 1-2 parameters");
        sub->add_option("--grid-nd", cfg.grid_nd, "Grid points per axis for 3+ parameters");
        sub->add_option("--refine-budget", cfg.refine_budget, "Nelder-Mead evaluations");
        sub->add_option("--trotter-steps", cfg.trotter_steps, "Second-order Trotter steps for the XY mixer");
        sub->add_option("--xy-pool", cfg.xy_pool, "XY Haar pool size");
        sub->add_option("--xy-circuits", cfg.xy_circuits, "XY branches drawn from the pool");
        sub->add_option("--xy-gamma-samples", cfg.xy_gamma_samples, "Independent samples for the XY Gamma");
        sub->add_option("--evaluator", evaluator, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
        sub->add_option("--shots", cfg.shots, "Shots per distribution for the sampled evaluator");
        sub->add_option("--family", family, "penalty, xy or all");
    };
    auto* run = app.add_subcommand("run", "Run experiment modes and write reports and histograms");
    add_experiment_options(run);
    run->add_option("--modes", modes, "Comma-separated mode numbers or 'all'");
    auto* optimize = app.add_subcommand("optimize", "Optimize one experiment mode and write its trace");
    int opt_mode = 1;
    add_experiment_options(optimize);
    optimize->add_option("--mode", opt_mode, "Mode number")->required();

    // verify
    auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
    std::string filter;
    std::vector<int> warm;
    verify->add_option("--filter", filter, "Groups (lcu, qpd, su2, qaoa, experiments, heavy-hex) or check ids");
    verify->add_option("--warm-start", warm, "Only print P(wt = k) of the warm start for n,k")
        ->delimiter(',')
        ->expected(2);

    // graph-gen
    auto* graph_gen = app.add_subcommand("graph-gen", "Generate a problem instance");
    std::string gkind = "regular";
    int rows = 5, cols = 3, swap_layers = 3;
    bool emit_circuit = false;
    InstanceArgs gen_args;
    graph_gen->add_option("--kind", gkind, "regular, er or heavy-hex")
        ->check(CLI::IsMember({"regular", "er", "heavy-hex"}));
    graph_gen->add_option("--n", gen_args.n, "Nodes");
    graph_gen->add_option("--degree", gen_args.degree, "Degree for regular graphs");
    graph_gen->add_option("--p", gen_args.p, "Edge probability for er graphs");
    graph_gen->add_option("--k", gen_args.k, "Subgraph size");
    graph_gen->add_option("--graph-seed", gen_args.graph_seed, "Generator seed");
    graph_gen->add_option("--rows", rows, "Heavy-hex rows");
    graph_gen->add_option("--cols", cols, "Heavy-hex columns");
    graph_gen->add_option("--swap-layers", swap_layers, "SWAP layers for heavy-hex");
    graph_gen->add_flag("--emit-circuit", emit_circuit, "Also write the heavy-hex SWAP-network cost layer");

    // solve-exact
    auto* solve = app.add_subcommand("solve-exact", "Exact densest-k-subgraph optimum by enumeration");
    InstanceArgs solve_args;
    bool feasible_only = false;
    add_instance_options(solve, solve_args);
    solve->add_flag("--feasible-only", feasible_only, "Enumerate weight-k strings of the objective only");

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string hash = config_hash(app.config_to_str(true, false));
        Outputs out(out_dir, hash);
        cfg.seed = seed;
        cfg.workers = workers;

        if (*decompose) {
            if (kind == "diagonal") {
                const auto f = fvals.empty() ? hamming_penalty_values(dn, db) : fvals;
                const auto lcu = build_diagonal_lcu(f, dgamma);
                auto os = out.open("decomposition-diagonal.csv", "diagonal-lcu");
                write_diagonal_lcu_csv(os, lcu);
                std::printf("Gamma %.12g (bound m+1 = %d)\nreconstruction error %.3e\n", lcu.gamma_cost,
                            lcu.m + 1, lcu.reconstruction_error());
            } else {
                const auto p = build_su2_pool(dn, dbeta, pool, circuits, gamma_samples, seed, workers);
                auto os = out.open("decomposition-xy.csv", "xy-pool");
                write_pool_csv(os, p);
                std::printf("Gamma_hat %.6g +- %.3g (bound %.0f)\npool alpha %.6g\n", p.gamma_hat, p.gamma_sigma,
                            su2_gamma_bound(dn), p.pool_alpha);
                if (dn <= 3) {
                    const auto rec = mc_reconstruct_xy(dn, dbeta, pool, seed, workers);
                    std::printf("reconstruction error (Frobenius) %.3e\n", rec.frobenius_error);
                }
            }
            return 0;
        }

        if (*verify) {
            if (!warm.empty()) {
                std::printf("P(wt = %d) at n = %d: %.4f\n", warm[1], warm[0],
                            warm_start_feasible_probability(warm[0], warm[1]));
                return 0;
            }
            acceptance::Options o;
            o.seed = app.get_option("--seed")->count() > 0 ? seed : o.seed;
            o.workers = workers;
            int failed = 0;
            acceptance::run(filter, o, [&](const acceptance::CheckResult& r) {
                std::printf("%s\n", acceptance::format_line(r).c_str());
                std::fflush(stdout);
                failed += r.passed ? 0 : 1;
            });
            return failed == 0 ? 0 : 1;
        }

        if (*graph_gen) {
            if (gkind == "heavy-hex") {
                const auto hh = heavy_hex_swap_graph(rows, cols, swap_layers);
                auto os = out.open("instance.txt", "instance");
                write_instance(os, hh.graph, gen_args.k);
                std::printf("heavy-hex %dx%d: %d nodes, edges per layer", rows, cols, hh.graph.num_nodes());
                for (auto c : hh.edge_counts) {
                    std::printf(" %zu", c);
                }
                std::printf("\n");
                if (emit_circuit) {
                    const auto ising = ising_from_qubo(objective_qubo(hh.graph));
                    const auto sw = swap_network_cost_layer(hh, ising);
                    auto cs = out.open("cost-layer.circuit", "circuit");
                    write_circuit(cs, sw.circuit);
                    std::printf("cost layer: %zu RZZ, %zu SWAP\n", sw.rzz_count, sw.swap_count);
                }
            } else {
                gen_args.generator = gkind;
                const auto inst = load_instance(gen_args);
                auto os = out.open("instance.txt", "instance");
                write_instance(os, inst.graph, inst.k);
                std::printf("%d nodes, %zu edges\n", inst.n(), inst.graph.num_edges());
            }
            return 0;
        }

        if (*solve) {
            const auto inst = load_instance(solve_args);
            const auto r = feasible_only ? solve_exact(objective_qubo(inst.graph), SolveMode::FeasibleOnly, inst.k)
                                         : solve_exact(inst.qubo);
            auto os = out.open("solution.txt", "solution");
            os << "objective " << (feasible_only ? "edges-in-subgraph" : "penalty-qubo") << "\n";
            os << "best_value " << format_double(r.best_value) << "\n";
            os << "evaluated " << r.evaluated << "\n";
            for (const auto& b : r.best) {
                os << "optimum " << b.to_string(inst.n()) << "\n";
            }
            std::printf("best value %s, %zu optimal strings\n", format_double(r.best_value).c_str(), r.best.size());
            return 0;
        }

        // run / optimize
        cfg.evaluator = evaluator == "exact" ? Evaluator::Exact : Evaluator::Sampled;
        ExperimentSession session(load_instance(inst_args), cfg);
        std::vector<std::pair<Family, int>> todo;
        const std::vector<Family> families = family == "all" ? std::vector<Family>{Family::Penalty, Family::Xy}
                                                             : std::vector<Family>{parse_family(family)};
        for (Family f : families) {
            for (int m : *optimize ? std::vector<int>{opt_mode} : parse_modes(modes, family_modes(f))) {
                todo.emplace_back(f, m);
            }
        }
        for (auto [f, m] : todo) {
            const auto& r = session.run(f, m);
            const auto stem = mode_stem(r);
            std::printf("%s (%s): E %.6g  CVaR_up %.6g  Gamma %.6g  eta %.6g\n", stem.c_str(), r.label.c_str(),
                        r.report.expectation, r.report.cvar_upper, r.gamma, r.eta);
            if (!r.trace.log.empty()) {
                auto ts = out.open(stem + "-trace.csv", "trace");
                write_trace_csv(ts, r.trace);
            }
            auto ps = out.open(stem + "-params.txt", "params");
            write_params(ps, r.params);
            if (*optimize) {
                continue;
            }
            auto rs = out.open(stem + "-report.txt", "metric-report");
            rs << "label " << r.label << "\n";
            write_metric_report(rs, r.report);
            auto hs = out.open(stem + "-histogram.csv", "histogram");
            write_histogram_csv(hs, session.instance(), r.distribution,
                                r.coherent_reference.empty() ? nullptr : &r.coherent_reference, r.gamma);
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
