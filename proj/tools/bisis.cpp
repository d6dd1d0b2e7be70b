// Command-line driver for the bi-SIS analysis library.

#include "bisis/bounds.hpp"
#include "bisis/generators.hpp"
#include "bisis/serialize.hpp"
#include "bisis/sweep.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNonConvergence = 2;
constexpr int kExitBoundViolation = 3;

struct InstanceArgs {
    std::string graph_a, graph_b;
    double tau1 = 0.0, tau2 = 0.0;
    double delta1 = 1.0, delta2 = 1.0;
    double tol = 1e-12;
};

void add_instance_flags(CLI::App* cmd, InstanceArgs& a) {
    cmd->add_option("--graph-a", a.graph_a, "edge-list file for Virus 1's graph")
        ->required();
    cmd->add_option("--graph-b", a.graph_b, "edge-list file for Virus 2's graph")
        ->required();
    cmd->add_option("--tau1", a.tau1, "effective infection rate of Virus 1")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tau2", a.tau2, "effective infection rate of Virus 2")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--delta1", a.delta1, "recovery rate of Virus 1 (beta1 = tau1*delta1)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--delta2", a.delta2, "recovery rate of Virus 2 (beta2 = tau2*delta2)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", a.tol, "equilibrium solve tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bi-SIS competing-epidemic analysis"};
    app.require_subcommand(1);

    // regime
    InstanceArgs regime_args;
    std::string regime_format = "text";
    auto* regime_cmd =
        app.add_subcommand("regime", "classify the (tau1, tau2) parameter regime");
    add_instance_flags(regime_cmd, regime_args);
    regime_cmd->add_option("--format", regime_format, "output format: text|json")
        ->capture_default_str()
        ->check(CLI::IsMember({"text", "json"}));

    // equilibria
    InstanceArgs eq_args;
    int eq_starts = 50;
    std::uint64_t eq_seed = 0;
    int eq_jobs = 1;
    std::string eq_output;
    auto* eq_cmd = app.add_subcommand(
        "equilibria", "enumerate coexistence equilibria and write JSON");
    add_instance_flags(eq_cmd, eq_args);
    eq_cmd->add_option("--starts", eq_starts, "multi-start trajectory count")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    eq_cmd->add_option("--seed", eq_seed, "seed for random interior starts")
        ->capture_default_str();
    eq_cmd->add_option("--jobs", eq_jobs, "worker threads for multi-start")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    eq_cmd->add_option("--output,-o", eq_output, "output JSON path (default stdout)");

    // sweep
    std::string sweep_config, sweep_output;
    std::string sweep_format = "csv";
    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep from a config file");
    sweep_cmd->add_option("--config", sweep_config, "sweep config file")->required();
    sweep_cmd->add_option("--output,-o", sweep_output, "output path (default stdout)");
    sweep_cmd->add_option("--format", sweep_format, "output format: csv|json")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    int sweep_jobs = 0;
    sweep_cmd->add_option("--jobs", sweep_jobs, "override config worker threads")
        ->check(CLI::PositiveNumber);

    // bounds
    InstanceArgs bounds_args;
    int bounds_starts = 50;
    std::uint64_t bounds_seed = 0;
    std::string bounds_output;
    auto* bounds_cmd = app.add_subcommand(
        "bounds", "evaluate every bound and monotone-consequence check on one instance");
    add_instance_flags(bounds_cmd, bounds_args);
    bounds_cmd->add_option("--starts", bounds_starts, "multi-start trajectory count")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    bounds_cmd->add_option("--seed", bounds_seed, "seed for random interior starts")
        ->capture_default_str();
    bounds_cmd->add_option("--output,-o", bounds_output, "output JSON path (default stdout)");

    // simulate
    InstanceArgs sim_args;
    double sim_x0 = 0.3, sim_y0 = 0.3;
    std::uint64_t sim_seed = 0;
    bool sim_random_init = false;
    std::string sim_log;
    double sim_tol = 1e-10, sim_max_time = 1e6;
    auto* sim_cmd = app.add_subcommand("simulate", "integrate one bi-SIS trajectory");
    add_instance_flags(sim_cmd, sim_args);
    sim_cmd->add_option("--x0", sim_x0, "uniform initial Virus-1 probability")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sim_cmd->add_option("--y0", sim_y0, "uniform initial Virus-2 probability")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sim_cmd->add_flag("--random-init", sim_random_init,
                      "random interior initial state instead of uniform");
    sim_cmd->add_option("--seed", sim_seed, "seed for --random-init")
        ->capture_default_str();
    sim_cmd->add_option("--log", sim_log, "write sampled trajectory CSV to this path");
    sim_cmd->add_option("--conv-tol", sim_tol, "field sup-norm convergence tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--max-time", sim_max_time, "model-time ceiling")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    // gen-graphs
    std::string gen_dir = ".";
    std::uint64_t gen_seed = 1;
    auto* gen_cmd =
        app.add_subcommand("gen-graphs", "write seeded graph fixtures as edge lists");
    gen_cmd->add_option("--out-dir", gen_dir, "output directory")
        ->capture_default_str();
    gen_cmd->add_option("--seed", gen_seed, "generator seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*regime_cmd) {
            auto gA = bisis::load_graph(regime_args.graph_a);
            auto gB = bisis::load_graph(regime_args.graph_b);
            auto p1 = bisis::VirusParams::from_tau(regime_args.tau1, regime_args.delta1);
            auto p2 = bisis::VirusParams::from_tau(regime_args.tau2, regime_args.delta2);
            auto rep = bisis::classify_regime(p1, p2, gA, gB, regime_args.tol);
            if (regime_format == "json") {
                std::cout << bisis::regime_to_json(rep).dump(2) << "\n";
            } else {
                std::cout << "tau1*lambda(A)              = " << rep.t1_lambdaA << "\n"
                          << "tau2*lambda(B)              = " << rep.t2_lambdaB << "\n"
                          << "tau1*lambda(diag(1-y*)A)    = " << rep.t1_lambda_scaledA << "\n"
                          << "tau2*lambda(diag(1-x*)B)    = " << rep.t2_lambda_scaledB << "\n"
                          << "classification              = "
                          << bisis::to_string(rep.classification) << "\n"
                          << "margin                      = " << rep.margin << "\n";
            }
            return kExitOk;
        }

        if (*eq_cmd) {
            auto gA = bisis::load_graph(eq_args.graph_a);
            auto gB = bisis::load_graph(eq_args.graph_b);
            auto p1 = bisis::VirusParams::from_tau(eq_args.tau1, eq_args.delta1);
            auto p2 = bisis::VirusParams::from_tau(eq_args.tau2, eq_args.delta2);
            auto rep = bisis::classify_regime(p1, p2, gA, gB, eq_args.tol);
            bisis::EquilibriumSet set;
            if (rep.classification == bisis::Regime::Coexist) {
                bisis::MultiStartConfig ms;
                ms.starts = eq_starts;
                ms.seed = eq_seed;
                ms.jobs = eq_jobs;
                set = bisis::find_coexistence_equilibria(p1, p2, gA, gB, rep, ms);
                if (set.ce.empty()) {
                    std::cerr << "no coexistence equilibrium found ("
                              << set.failed_starts << " failed starts)\n";
                    return kExitNonConvergence;
                }
            }
            write_or_print(eq_output,
                           bisis::equilibria_to_json(set, rep, gA).dump(2) + "\n");
            return kExitOk;
        }

        if (*sweep_cmd) {
            auto spec = bisis::load_sweep_config(sweep_config);
            if (sweep_jobs > 0) spec.jobs = sweep_jobs;
            auto records = bisis::run_sweep(spec);
            std::ostringstream os;
            if (sweep_format == "csv")
                bisis::emit_csv(records, os);
            else
                bisis::emit_json(records, os);
            write_or_print(sweep_output, os.str());
            return kExitOk;
        }

        if (*bounds_cmd) {
            auto gA = bisis::load_graph(bounds_args.graph_a);
            auto gB = bisis::load_graph(bounds_args.graph_b);
            auto p1 = bisis::VirusParams::from_tau(bounds_args.tau1, bounds_args.delta1);
            auto p2 = bisis::VirusParams::from_tau(bounds_args.tau2, bounds_args.delta2);
            auto rep = bisis::classify_regime(p1, p2, gA, gB, bounds_args.tol);
            if (rep.classification != bisis::Regime::Coexist) {
                std::cerr << "bounds requires a COEXIST instance; got "
                          << bisis::to_string(rep.classification) << "\n";
                return kExitValidation;
            }
            bisis::MultiStartConfig ms;
            ms.starts = bounds_starts;
            ms.seed = bounds_seed;
            auto set = bisis::find_coexistence_equilibria(p1, p2, gA, gB, rep, ms);
            if (set.ce.empty()) {
                std::cerr << "no coexistence equilibrium found\n";
                return kExitNonConvergence;
            }
            nlohmann::json out = nlohmann::json::array();
            bool all_ok = true;
            for (const auto& ce : set.ce) {
                auto b = bisis::evaluate_bounds(ce, rep, gA, gB, p1, p2);
                all_ok = all_ok && b.all_satisfied;
                out.push_back(bisis::bounds_to_json(b));
            }
            write_or_print(bounds_output, out.dump(2) + "\n");
            if (!all_ok) {
                std::cerr << "bound violation detected; investigate the solver\n";
                return kExitBoundViolation;
            }
            return kExitOk;
        }

        if (*sim_cmd) {
            auto gA = bisis::load_graph(sim_args.graph_a);
            auto gB = bisis::load_graph(sim_args.graph_b);
            auto p1 = bisis::VirusParams::from_tau(sim_args.tau1, sim_args.delta1);
            auto p2 = bisis::VirusParams::from_tau(sim_args.tau2, sim_args.delta2);
            const int n = gA.node_count();
            bisis::BiState init;
            if (sim_random_init) {
                std::mt19937_64 rng(sim_seed);
                std::uniform_real_distribution<double> unif(0.0, 1.0);
                init.x.resize(n);
                init.y.resize(n);
                for (int i = 0; i < n; ++i) {
                    double a = unif(rng), b = unif(rng);
                    if (a + b > 1.0) {
                        a = 1.0 - a;
                        b = 1.0 - b;
                    }
                    init.x[i] = a;
                    init.y[i] = b;
                }
            } else {
                if (sim_x0 + sim_y0 > 1.0) {
                    std::cerr << "--x0 + --y0 must not exceed 1\n";
                    return kExitValidation;
                }
                init.x = bisis::Vector::Constant(n, sim_x0);
                init.y = bisis::Vector::Constant(n, sim_y0);
            }
            bisis::IntegratorConfig cfg;
            cfg.convergence_tol = sim_tol;
            cfg.max_time = sim_max_time;
            cfg.keep_log = !sim_log.empty();
            auto res = bisis::integrate(init, p1, p2, gA, gB, cfg);
            if (!sim_log.empty()) {
                std::ofstream lf(sim_log);
                if (!lf) throw std::runtime_error("cannot write log: " + sim_log);
                bisis::write_trajectory_csv(*res.log, lf);
            }
            std::cout << "converged          = " << (res.converged ? "true" : "false")
                      << "\n"
                      << "elapsed_model_time = " << res.elapsed_model_time << "\n"
                      << "sup(x)             = " << res.final.x.maxCoeff() << "\n"
                      << "sup(y)             = " << res.final.y.maxCoeff() << "\n"
                      << "avg_infected       = "
                      << (res.final.x.sum() + res.final.y.sum()) / n << "\n";
            return res.converged ? kExitOk : kExitNonConvergence;
        }

        if (*gen_cmd) {
            namespace fs = std::filesystem;
            fs::create_directories(gen_dir);
            auto out = [&](const char* name) {
                return (fs::path(gen_dir) / name).string();
            };
            bisis::write_edge_list(bisis::complete_graph(4), out("k4.edges"));
            bisis::write_edge_list(bisis::path_graph(3), out("p3.edges"));
            bisis::write_edge_list(bisis::cycle_graph(3), out("c3.edges"));
            bisis::write_edge_list(bisis::star_graph(9), out("star10.edges"));
            std::mt19937_64 rng(gen_seed);
            bisis::write_edge_list(bisis::as_style_graph(103, 616, rng),
                                   out("as-a.edges"));
            bisis::write_edge_list(bisis::as_style_graph(103, 267, rng),
                                   out("as-b.edges"));
            bisis::write_edge_list(bisis::as_style_graph(103, 297, rng),
                                   out("as-c.edges"));
            auto multi_ce = bisis::multi_ce_fixture();
            bisis::write_edge_list(multi_ce.gA, out("multi-ce-a.edges"));
            bisis::write_edge_list(multi_ce.gB, out("multi-ce-b.edges"));
            std::cout << "wrote fixtures to " << gen_dir << "\n";
            return kExitOk;
        }
    } catch (const bisis::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const bisis::DynamicsError& e) {
        std::cerr << "integration error: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
