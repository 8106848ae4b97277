#include "spchain/report.hpp"
#include "spchain/suite.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace spchain;

// exit codes: 0 ok, 2 invalid network, 3 not series-parallel,
//             4 infeasible parameters, 5 internal invariant violation

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_out(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw validation_error("cannot write '" + out_path + "'");
    out << text;
}

Rat rat_flag(const std::string& text, const std::string& flag) {
    auto r = try_parse_rat(text);
    if (!r) throw validation_error(flag + ": not a rational literal: '" + text + "'");
    return *r;
}

struct Common {
    std::string format = "table";
    std::string out_path;
    bool decimal = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "output format: table|csv|json");
    cmd->add_option("-o,--out", c.out_path, "write the report to a file instead of stdout");
    cmd->add_flag("--decimal", c.decimal, "render numbers as 12-significant-digit decimals");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sequential supply-chain equilibria on series-parallel networks"};
    app.require_subcommand(1);

    std::string input;
    Common common;
    // default output format; per-command --format still wins
    if (const char* env = std::getenv("SPCHAIN_FORMAT")) common.format = env;

    auto* validate = app.add_subcommand("validate", "check structure, shortcuts, merge sets");
    validate->add_option("network", input, "network document")->required();
    Common c_validate = common;
    add_common(validate, c_validate);

    auto* solve_cmd = app.add_subcommand("solve", "compute the equilibrium");
    solve_cmd->add_option("network", input, "network document")->required();
    Common c_solve = common;
    add_common(solve_cmd, c_solve);
    std::string emit = "equilibrium";
    solve_cmd->add_option("--emit", emit, "equilibrium|prices|both");

    auto* analyze = app.add_subcommand("analyze", "utilities, welfare, component factor");
    analyze->add_option("network", input, "network document")->required();
    Common c_analyze = common;
    add_common(analyze, c_analyze);

    auto* swap = app.add_subcommand("swap", "swap a series composition and compare invariants");
    swap->add_option("network", input, "network document")->required();
    int swap_node = -1;
    swap->add_option("--node", swap_node, "pre-order index of the series node")->required();
    Common c_swap = common;
    add_common(swap, c_swap);

    auto* sweep = app.add_subcommand("sweep", "demand / cost comparative-statics table");
    sweep->add_option("network", input, "network document")->required();
    std::string sweep_param = "a_t";
    std::string sweep_values, sweep_from, sweep_to, sweep_step;
    sweep->add_option("--param", sweep_param, "a_t or a_s");
    sweep->add_option("--values", sweep_values, "comma-separated rational grid");
    sweep->add_option("--from", sweep_from, "grid start (with --to/--step)");
    sweep->add_option("--to", sweep_to, "grid end");
    sweep->add_option("--step", sweep_step, "grid step");
    Common c_sweep = common;
    add_common(sweep, c_sweep);

    auto* oracle_cmd = app.add_subcommand("oracle", "run the randomized property suite");
    std::uint64_t seed = 1;
    int count = 100, max_nodes = 12, swaps = 50;
    oracle_cmd->add_option("--seed", seed, "first seed");
    oracle_cmd->add_option("--count", count, "number of networks");
    oracle_cmd->add_option("--max-nodes", max_nodes, "node budget per network");
    oracle_cmd->add_option("--swaps", swaps, "series-swap checks among the networks");

    auto* two = app.add_subcommand("two-market", "high/low price strategy analysis");
    std::string tm_cost, tm_a1, tm_b1 = "1", tm_a2, tm_b2 = "1", tm_sweep;
    two->add_option("--cost", tm_cost, "production cost a_s")->required();
    two->add_option("--a1", tm_a1, "market 1 demand")->required();
    two->add_option("--b1", tm_b1, "market 1 slope");
    two->add_option("--a2", tm_a2, "market 2 demand")->required();
    two->add_option("--b2", tm_b2, "market 2 slope");
    two->add_option("--sweep", tm_sweep, "a1=lo:hi:step grid");
    Common c_two = common;
    add_common(two, c_two);

    auto* smspg = app.add_subcommand("smspg", "solve a uniform-demand multi-market network");
    smspg->add_option("network", input, "network document")->required();
    Common c_smspg = common;
    add_common(smspg, c_smspg);

    auto* demo = app.add_subcommand("demo", "worked extension examples");
    demo->require_subcommand(1);
    auto* demo_msspg = demo->add_subcommand("msspg", "two-source best-response descent");
    std::string d_p1 = "3/2", d_p2 = "2", d_eps = "1/100";
    int d_rounds = 20;
    demo_msspg->add_option("--p1", d_p1, "initial price of source 1");
    demo_msspg->add_option("--p2", d_p2, "initial price of source 2");
    demo_msspg->add_option("--eps", d_eps, "undercut step");
    demo_msspg->add_option("--rounds", d_rounds, "rounds to simulate");
    Common c_msspg = common;
    add_common(demo_msspg, c_msspg);
    auto* demo_dag = demo->add_subcommand("dag", "general-DAG worked equilibrium");
    Common c_dag = common;
    add_common(demo_dag, c_dag);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            Network net = parse_network(slurp(input));
            if (net.kind == NetworkKind::GeneralDag) {
                std::cerr << "not series-parallel\n";
                write_out(render_validate(net, parse_format(c_validate.format)),
                          c_validate.out_path);
                return 3;
            }
            write_out(render_validate(net, parse_format(c_validate.format)), c_validate.out_path);
        } else if (*solve_cmd) {
            Network net = parse_network(slurp(input));
            auto sol = solve(net);
            const bool prices = emit == "prices" || emit == "both";
            const bool equil = emit == "equilibrium" || emit == "both";
            if (!prices && !equil) throw validation_error("--emit must be equilibrium|prices|both");
            write_out(render_solution(net, sol, parse_format(c_solve.format), c_solve.decimal,
                                      prices, equil),
                      c_solve.out_path);
        } else if (*analyze) {
            Network net = parse_network(slurp(input));
            auto sol = solve(net);
            write_out(render_analysis(net, sol, parse_format(c_analyze.format), c_analyze.decimal),
                      c_analyze.out_path);
        } else if (*swap) {
            Network net = parse_network(slurp(input));
            write_out(render_swap(net, swap_node, parse_format(c_swap.format), c_swap.decimal),
                      c_swap.out_path);
        } else if (*sweep) {
            Network net = parse_network(slurp(input));
            std::vector<Rat> values;
            if (!sweep_values.empty()) {
                std::stringstream ss(sweep_values);
                std::string item;
                while (std::getline(ss, item, ',')) values.push_back(rat_flag(item, "--values"));
            } else if (!sweep_from.empty()) {
                Rat lo = rat_flag(sweep_from, "--from");
                Rat hi = rat_flag(sweep_to, "--to");
                Rat st = rat_flag(sweep_step, "--step");
                if (st <= 0) throw validation_error("--step must be positive");
                for (Rat v = lo; v <= hi; v += st) values.push_back(v);
            } else {
                throw validation_error("sweep needs --values or --from/--to/--step");
            }
            std::string param = sweep_param == "at" ? "a_t" : sweep_param == "as" ? "a_s"
                                                                                  : sweep_param;
            auto table = demand_sweep(net, param, values);
            if (!table.monotone)
                throw internal_error("sweep lost monotonicity; solver invariant broken");
            write_out(render_sweep(table, parse_format(c_sweep.format), c_sweep.decimal),
                      c_sweep.out_path);
        } else if (*oracle_cmd) {
            auto result = run_property_suite(seed, count, max_nodes, swaps);
            std::cout << "checked " << result.checked << " networks (" << result.swaps_checked
                      << " series swaps): " << (result.ok() ? "all passed" : "FAILURES") << "\n";
            for (const auto& f : result.failures) std::cout << "failure: " << f << "\n";
            if (!result.ok()) return 5;
        } else if (*two) {
            TwoMarketScenario sc{rat_flag(tm_cost, "--cost"), rat_flag(tm_a1, "--a1"),
                                 rat_flag(tm_b1, "--b1"), rat_flag(tm_a2, "--a2"),
                                 rat_flag(tm_b2, "--b2")};
            if (!tm_sweep.empty()) {
                auto eq_pos = tm_sweep.find('=');
                std::string spec = eq_pos == std::string::npos ? tm_sweep
                                                               : tm_sweep.substr(eq_pos + 1);
                auto c1 = spec.find(':');
                auto c2 = spec.find(':', c1 + 1);
                if (c1 == std::string::npos || c2 == std::string::npos)
                    throw validation_error("--sweep wants a1=lo:hi:step");
                Rat lo = rat_flag(spec.substr(0, c1), "--sweep");
                Rat hi = rat_flag(spec.substr(c1 + 1, c2 - c1 - 1), "--sweep");
                Rat st = rat_flag(spec.substr(c2 + 1), "--sweep");
                write_out(render_two_market_sweep(sc.a_s, sc.b1, sc.a2, sc.b2, lo, hi, st,
                                                  parse_format(c_two.format), c_two.decimal),
                          c_two.out_path);
            } else {
                auto out = two_market_analyze(sc);
                write_out(render_two_market(sc, out, parse_format(c_two.format), c_two.decimal),
                          c_two.out_path);
            }
        } else if (*smspg) {
            Network net = parse_network(slurp(input));
            auto sol = smspg_equal_demand_solve(net);
            write_out(render_smspg(net, sol, parse_format(c_smspg.format), c_smspg.decimal),
                      c_smspg.out_path);
        } else if (*demo_msspg) {
            auto trace = msspg_nonexistence_demo(rat_flag(d_p1, "--p1"), rat_flag(d_p2, "--p2"),
                                                 d_rounds, rat_flag(d_eps, "--eps"));
            write_out(render_msspg(trace, parse_format(c_msspg.format), c_msspg.decimal),
                      c_msspg.out_path);
        } else if (*demo_dag) {
            auto rep = dag_example_check();
            write_out(render_dag(rep, parse_format(c_dag.format), c_dag.decimal), c_dag.out_path);
        }
    } catch (const not_series_parallel& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const infeasible_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 5;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
