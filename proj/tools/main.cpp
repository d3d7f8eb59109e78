#include "elastinet/core.hpp"
#include "elastinet/experiments.hpp"
#include "elastinet/io.hpp"
#include "elastinet/param_rules.hpp"
#include "elastinet/problem_gen.hpp"
#include "elastinet/reference.hpp"
#include "elastinet/rfss.hpp"
#include "elastinet/rssn.hpp"
#include "elastinet/types.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace elastinet;

std::uint64_t env_seed() {
    if (const char* raw = std::getenv("ELASTINET_SEED")) {
        try {
            return std::stoull(raw);
        } catch (const std::exception&) {
            throw InvalidArgument("ELASTINET_SEED is not a valid unsigned integer");
        }
    }
    return 1;
}

struct OutputOptions {
    std::string out;          // empty = stdout
    std::string format = "csv";
};

// Tables can be rendered as CSV or JSON; single-result records are always
// JSON, so `solve` and `discrepancy` only get the --out flag.
void add_output_flags(CLI::App* cmd, OutputOptions& opts, bool with_format = true) {
    cmd->add_option("--out", opts.out, "Write results to this file instead of stdout");
    if (with_format) {
        cmd->add_option("--format", opts.format, "Table output format")
            ->check(CLI::IsMember({"csv", "json"}));
    }
}

void emit_table(const io::Table& table, const OutputOptions& opts) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!opts.out.empty()) {
        file.open(opts.out);
        if (!file) throw io::ParseError(opts.out + ": cannot open for writing");
        out = &file;
    }
    if (opts.format == "json") {
        io::write_table_json(*out, table);
    } else {
        io::write_table_csv(*out, table);
    }
}

void emit_json(const nlohmann::json& record, const OutputOptions& opts) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!opts.out.empty()) {
        file.open(opts.out);
        if (!file) throw io::ParseError(opts.out + ": cannot open for writing");
        out = &file;
    }
    *out << record.dump(2) << '\n';
}

// Problem source shared by `solve` and `discrepancy`: either a pair of CSV
// files or a named generator.
struct ProblemSpec {
    std::string op_file;
    std::string data_file;
    std::string exact_data_file;
    std::string exact_solution_file;
    double noise_level = 0.0;

    std::string generator; // "gaussian" or "blur"
    Eigen::Index m = 120;
    Eigen::Index s = 120;
    Eigen::Index spike_period = 10;
    Eigen::Index n = 20;
    Eigen::Index band = 5;
    double sigma = 0.7;
    double noise_rel = 0.0;
    std::uint64_t seed = env_seed();
};

void add_problem_flags(CLI::App* cmd, ProblemSpec& spec) {
    cmd->add_option("--op", spec.op_file, "Operator matrix CSV (one row per line)");
    cmd->add_option("--data", spec.data_file, "Data vector file (one value per line)");
    cmd->add_option("--exact-data", spec.exact_data_file, "Exact data vector file");
    cmd->add_option("--exact-solution", spec.exact_solution_file,
                    "Exact solution vector file");
    cmd->add_option("--noise-level", spec.noise_level,
                    "Noise level ||data - exact_data|| for file input");
    cmd->add_option("--gen", spec.generator, "Generate the instance instead")
        ->check(CLI::IsMember({"gaussian", "blur"}));
    cmd->add_option("--m", spec.m, "Rows of the random operator");
    cmd->add_option("--s", spec.s, "Columns of the random operator");
    cmd->add_option("--spike-period", spec.spike_period,
                    "Every spike-period-th entry of the exact solution is 1");
    cmd->add_option("--n", spec.n, "Blur image side length");
    cmd->add_option("--band", spec.band, "Blur kernel bandwidth");
    cmd->add_option("--sigma", spec.sigma, "Blur kernel standard deviation");
    cmd->add_option("--noise", spec.noise_rel, "Relative noise level to add");
    cmd->add_option("--seed", spec.seed, "PRNG seed (default $ELASTINET_SEED or 1)");
}

Problem build_problem(const ProblemSpec& spec) {
    if (!spec.generator.empty()) {
        Problem p = spec.generator == "blur"
                        ? gen_blur(spec.n, spec.band, spec.sigma)
                        : gen_gaussian(spec.m, spec.s, spec.spike_period, spec.seed);
        if (spec.noise_rel > 0.0) p = add_noise(p, spec.noise_rel, spec.seed + 1);
        return p;
    }
    if (spec.op_file.empty() || spec.data_file.empty()) {
        throw InvalidArgument("either --gen or both --op and --data are required");
    }
    Matrix op = io::read_matrix_csv(spec.op_file);
    Vector data = io::read_vector(spec.data_file);
    std::optional<Vector> exact_data;
    std::optional<Vector> exact_solution;
    if (!spec.exact_data_file.empty()) exact_data = io::read_vector(spec.exact_data_file);
    if (!spec.exact_solution_file.empty()) {
        exact_solution = io::read_vector(spec.exact_solution_file);
    }
    return Problem(std::move(op), std::move(data), std::move(exact_data),
                   std::move(exact_solution), spec.noise_level);
}

SolverChoice parse_solver(const std::string& name) {
    if (name == "rssn") return SolverChoice::Rssn;
    if (name == "rfss") return SolverChoice::Rfss;
    return SolverChoice::Ista;
}

int cmd_solve(const ProblemSpec& spec, const std::string& solver_name, double alpha,
              double beta, const OutputOptions& out) {
    const Problem p = build_problem(spec);
    const RegParams r(alpha, beta);

    const auto start = std::chrono::steady_clock::now();
    const SolveResult result = solve_with(parse_solver(solver_name), p, r);
    const auto stop = std::chrono::steady_clock::now();

    nlohmann::json record;
    record["solver"] = solver_name;
    record["alpha"] = alpha;
    record["beta"] = beta;
    record["status"] = to_string(result.status);
    record["converged"] = result.converged();
    record["iterations"] = result.iterations;
    record["active_size"] = result.active_set.size();
    record["objective"] = result.objective;
    record["kkt_residual_norm"] = result.kkt_residual_norm;
    record["wall_ms"] = std::chrono::duration<double, std::milli>(stop - start).count();
    record["solution"] = std::vector<double>(result.solution.begin(),
                                             result.solution.end());
    emit_json(record, out);
    return result.converged() ? 0 : 2;
}

int cmd_discrepancy(const ProblemSpec& spec, double eta, DiscrepancyOptions opts,
                    const std::string& solver_name, const OutputOptions& out) {
    const Problem p = build_problem(spec);
    opts.solver = parse_solver(solver_name);
    const DiscrepancyResult result = discrepancy_solve(p, eta, opts);

    nlohmann::json record;
    record["eta"] = eta;
    record["tau"] = opts.tau;
    record["noise_level"] = p.noise_level;
    record["target"] = opts.tau * p.noise_level;
    record["beta_star"] = result.beta_star;
    record["alpha_star"] = eta * result.beta_star;
    record["residual"] = result.residual;
    record["unique_warning"] = result.unique_warning;
    record["active_size"] = ActiveSet::support_of(result.x_star).size();
    record["solution"] = std::vector<double>(result.x_star.begin(), result.x_star.end());
    emit_json(record, out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Elastic-net solvers and experiments for linear inverse problems"};
    app.require_subcommand(1);

    // solve
    ProblemSpec solve_spec;
    std::string solver_name = "rssn";
    double alpha = 1e-5;
    double beta = 1e-6;
    OutputOptions solve_out;
    CLI::App* solve = app.add_subcommand("solve", "Solve one instance");
    add_problem_flags(solve, solve_spec);
    solve->add_option("--solver", solver_name, "rssn, rfss, or ista")
        ->check(CLI::IsMember({"rssn", "rfss", "ista"}));
    solve->add_option("--alpha", alpha, "l1 weight")->required();
    solve->add_option("--beta", beta, "l2 weight")->required();
    add_output_flags(solve, solve_out, false);

    // test1/2/3 share the grid options
    experiments::GridOptions grid;
    OutputOptions grid_out;
    bool grid_full = false;
    bool test3_rank_deficient = false;
    std::vector<double> beta_override;
    int repeats_override = -1;

    const auto add_grid_flags = [&](CLI::App* cmd, bool noisy) {
        cmd->add_option("--m", grid.m, "Operator rows");
        cmd->add_option("--s", grid.s, "Operator columns");
        if (!noisy) cmd->add_option("--alpha", grid.alpha, "l1 weight");
        cmd->add_option("--beta", beta_override, "Override the beta grid")
            ->expected(-1);
        cmd->add_option("--seed", grid.seed, "PRNG seed (default $ELASTINET_SEED or 1)");
        cmd->add_option("--repeats", repeats_override, "Instances to average over");
        cmd->add_flag("--full", grid_full, "Run at the full published scale");
        add_output_flags(cmd, grid_out);
    };

    CLI::App* test1 = app.add_subcommand(
        "test1", "Well-conditioned random operator, exact data");
    CLI::App* test2 =
        app.add_subcommand("test2", "Rank-deficient random operator, exact data");
    CLI::App* test3 = app.add_subcommand("test3", "Random operator with 5% noise");
    add_grid_flags(test1, false);
    add_grid_flags(test2, false);
    add_grid_flags(test3, true);
    test3->add_flag("--rank-deficient", test3_rank_deficient,
                    "Use the duplicated-column operator");
    test3->add_option("--noise", grid.noise_rel, "Relative noise level");

    // test4
    experiments::Test4Options t4;
    OutputOptions t4_out;
    bool t4_full = false;
    CLI::App* test4 = app.add_subcommand("test4", "Blur-operator convergence rates");
    test4->add_option("--n", t4.n, "Image side length");
    test4->add_option("--band", t4.band, "Blur kernel bandwidth");
    test4->add_option("--sigma", t4.sigma, "Blur kernel standard deviation");
    test4->add_option("--delta", t4.deltas, "Relative noise levels")->expected(-1);
    test4->add_option("--beta-factor", t4.beta_factors, "beta = factor * alpha rows")
        ->expected(-1);
    test4->add_option("--seed", t4.seed, "PRNG seed (default $ELASTINET_SEED or 1)");
    test4->add_option("--split-delta", t4.split_delta,
                      "High/low noise split (absolute delta; default geometric midpoint)");
    test4->add_flag("--full", t4_full, "Run at the full published scale (n = 50)");
    add_output_flags(test4, t4_out);

    // discrepancy
    ProblemSpec disc_spec;
    double disc_eta = 0.0;
    DiscrepancyOptions disc_opts;
    std::string disc_solver = "rssn";
    OutputOptions disc_out;
    CLI::App* disc = app.add_subcommand(
        "discrepancy", "Select beta by the discrepancy principle");
    add_problem_flags(disc, disc_spec);
    disc->add_option("--eta", disc_eta, "Coupling alpha = eta * beta");
    disc->add_option("--tau", disc_opts.tau, "Discrepancy factor");
    disc->add_option("--rel-tol", disc_opts.rel_tol, "Relative residual tolerance");
    disc->add_option("--bracket-lo", disc_opts.bracket_lo, "Initial lower beta bracket");
    disc->add_option("--bracket-hi", disc_opts.bracket_hi, "Initial upper beta bracket");
    disc->add_option("--solver", disc_solver, "rssn, rfss, or ista")
        ->check(CLI::IsMember({"rssn", "rfss", "ista"}));
    add_output_flags(disc, disc_out, false);

    try {
        app.parse(argc, argv);

        if (solve->parsed()) {
            return cmd_solve(solve_spec, solver_name, alpha, beta, solve_out);
        }
        if (test1->parsed() || test2->parsed() || test3->parsed()) {
            experiments::GridOptions opts;
            if (test1->parsed()) opts = experiments::test1_options(grid_full);
            if (test2->parsed()) opts = experiments::test2_options(grid_full);
            if (test3->parsed()) {
                opts = experiments::test3_options(grid_full, test3_rank_deficient);
                if (test3->count("--noise") > 0) opts.noise_rel = grid.noise_rel;
            }
            CLI::App* active = test1->parsed() ? test1 : test2->parsed() ? test2 : test3;
            if (active->count("--m") > 0) opts.m = grid.m;
            if (active->count("--s") > 0) opts.s = grid.s;
            // test3 has no --alpha flag; its alpha comes from the noise level.
            if (!test3->parsed() && active->count("--alpha") > 0) {
                opts.alpha = grid.alpha;
            }
            if (active->count("--seed") > 0) opts.seed = grid.seed;
            if (!beta_override.empty()) opts.betas = beta_override;
            if (repeats_override > 0) opts.repeats = repeats_override;
            emit_table(experiments::run_grid(opts), grid_out);
            return 0;
        }
        if (test4->parsed()) {
            if (t4_full) t4.n = 50;
            const experiments::Test4Output result = experiments::run_test4(t4);
            emit_table(result.table, t4_out);
            // The slope summary always goes to stdout so it stays visible when
            // the main table was redirected to a file.
            if (t4_out.format == "json") {
                io::write_table_json(std::cout, result.slopes);
            } else {
                io::write_table_csv(std::cout, result.slopes);
            }
            return 0;
        }
        if (disc->parsed()) {
            return cmd_discrepancy(disc_spec, disc_eta, disc_opts, disc_solver, disc_out);
        }
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const io::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
