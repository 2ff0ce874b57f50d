// Command line driver: analytic expectations, lower bounds, the exact DP,
// Monte-Carlo simulation, and reproduction of the published reference tables.
//
// Exit codes: 0 success, 1 I/O failure, 2 validation error, 3 state budget
// exceeded, 4 reference-tolerance failure in reproduce-tables.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "covdep/analytic.hpp"
#include "covdep/exactdp.hpp"
#include "covdep/montecarlo.hpp"
#include "covdep/report.hpp"

namespace {

using namespace covdep;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;
constexpr int kExitTolerance = 4;

long long state_budget_from_env() {
    const char* env = std::getenv("COVERAGE_BUDGET_STATES");
    if (env == nullptr || *env == '\0') return kDefaultStateBudget;
    char* end = nullptr;
    long long value = std::strtoll(env, &end, 10);
    if (end == env || *end != '\0' || value < 1)
        throw std::invalid_argument("COVERAGE_BUDGET_STATES must be a positive integer");
    return value;
}

struct SchemeArgs {
    std::string scheme_name;
    long n = 0, k = 0, m = 0, a = 1;
    long slack = 0;
    bool slack_given = false;

    Scheme scheme() const {
        if (scheme_name != "pmds" && slack_given)
            throw std::invalid_argument("slack is a pmds-only parameter");
        if (scheme_name == "local") return Scheme::local_mds();
        if (scheme_name == "global") return Scheme::global_mds();
        if (scheme_name == "pmds") return Scheme::pmds(slack);
        throw std::invalid_argument("unknown scheme '" + scheme_name + "'");
    }
    SystemParams params() const { return SystemParams{n, k, m, a}; }
};

void add_param_flags(CLI::App* cmd, SchemeArgs& args, bool with_scheme) {
    if (with_scheme)
        cmd->add_option("--scheme", args.scheme_name, "coding scheme")
            ->required()
            ->check(CLI::IsMember({"local", "global", "pmds"}));
    cmd->add_option("--n", args.n, "encoded strands per file")->required();
    cmd->add_option("--k", args.k, "information strands per file")->required();
    cmd->add_option("--m", args.m, "number of stored files")->required();
    cmd->add_option("--a", args.a, "number of requested files");
    if (with_scheme) {
        auto* slack_opt = cmd->add_option("--s", args.slack, "pmds slack (pmds only)");
        cmd->parse_complete_callback(
            [&args, slack_opt]() { args.slack_given = slack_opt->count() > 0; });
    }
}

std::vector<double> parse_levels(const std::string& csv) {
    std::vector<double> levels;
    std::stringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ',')) {
        size_t pos = 0;
        double value = std::stod(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("bad quantile level '" + item + "'");
        levels.push_back(value);
    }
    if (levels.empty()) throw std::invalid_argument("quantile list must not be empty");
    return levels;
}

int run(int argc, char** argv) {
    CLI::App app{"coverage-depth statistics for coded DNA storage under random access"};
    app.require_subcommand(1);

    std::string format_name = "text";
    auto add_format_flag = [&format_name](CLI::App* cmd) {
        cmd->add_option("--format", format_name, "output format")
            ->check(CLI::IsMember({"text", "json", "csv"}));
    };

    SchemeArgs expect_args;
    auto* expect_cmd = app.add_subcommand("expect", "analytic expectation, variance, confidence sizes");
    add_param_flags(expect_cmd, expect_args, true);
    add_format_flag(expect_cmd);

    SchemeArgs sim_args;
    uint64_t sim_trials = 1'000'000;
    uint64_t sim_seed = 42;
    int sim_workers = 1;
    std::string sim_quantiles = "0.9,0.95,0.99";
    std::string ecdf_out;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo draw-count distribution");
    add_param_flags(sim_cmd, sim_args, true);
    sim_cmd->add_option("--trials", sim_trials, "number of trials");
    sim_cmd->add_option("--seed", sim_seed, "RNG seed");
    sim_cmd->add_option("--workers", sim_workers, "worker count");
    sim_cmd->add_option("--quantiles", sim_quantiles, "comma-separated quantile levels");
    sim_cmd->add_option("--ecdf-out", ecdf_out, "write the ECDF as CSV (r,cdf)");
    add_format_flag(sim_cmd);

    SchemeArgs bounds_args;
    auto* bounds_cmd = app.add_subcommand("bounds", "lower bounds on the optimal expectation");
    add_param_flags(bounds_cmd, bounds_args, false);
    add_format_flag(bounds_cmd);

    SchemeArgs exact_args;
    std::optional<long> exact_rmax;
    std::string tail_out = "tail.csv";
    auto* exact_cmd = app.add_subcommand("exact", "exact chain expectation and tail distribution");
    add_param_flags(exact_cmd, exact_args, true);
    exact_cmd->add_option("--rmax", exact_rmax, "also evolve Pr[draws > r] for r = 0..rmax");
    exact_cmd->add_option("--tail-out", tail_out, "tail CSV path (with --rmax)");
    add_format_flag(exact_cmd);

    uint64_t rep_trials = 10'000'000;
    uint64_t rep_seed = 42;
    int rep_workers = 1;
    std::string out_dir = ".";
    auto* rep_cmd = app.add_subcommand("reproduce-tables",
                                       "rerun the reference configuration and check every cell");
    rep_cmd->add_option("--trials", rep_trials, "trials per scheme");
    rep_cmd->add_option("--seed", rep_seed, "RNG seed");
    rep_cmd->add_option("--workers", rep_workers, "worker count");
    rep_cmd->add_option("--out-dir", out_dir, "directory for table1.csv / table2.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitValidation;
    }

    const OutputFormat format = parse_format(format_name);
    const long long budget = state_budget_from_env();

    if (expect_cmd->parsed()) {
        const double levels[] = {0.90, 0.95, 0.99};
        AnalyticReport report =
            analyze(expect_args.scheme(), expect_args.params(), std::span<const double>(levels), budget);
        std::cout << render_expect(report, format);
        return kExitOk;
    }

    if (sim_cmd->parsed()) {
        ExperimentConfig config;
        config.scheme = sim_args.scheme();
        config.params = sim_args.params();
        config.trials = sim_trials;
        config.seed = sim_seed;
        config.workers = sim_workers;
        config.quantile_levels = parse_levels(sim_quantiles);
        DistributionSummary summary = run_experiment(config);
        std::cout << render_simulate(config, summary, format);
        if (!ecdf_out.empty()) {
            std::ofstream out(ecdf_out);
            if (!out) {
                std::cerr << "error: cannot open '" << ecdf_out << "' for writing\n";
                return kExitIo;
            }
            write_ecdf_csv(out, summary);
            if (!out.good()) return kExitIo;
        }
        return kExitOk;
    }

    if (bounds_cmd->parsed()) {
        std::cout << render_bounds(bounds_args.params(), format);
        return kExitOk;
    }

    if (exact_cmd->parsed()) {
        ChainModel chain = build_chain(exact_args.scheme(), exact_args.params(), budget);
        Rational expectation = exact_expectation(chain);
        std::optional<TailResult> tail;
        if (exact_rmax.has_value()) {
            tail = exact_tail(chain, *exact_rmax);
            std::ofstream out(tail_out);
            if (!out) {
                std::cerr << "error: cannot open '" << tail_out << "' for writing\n";
                return kExitIo;
            }
            write_tail_csv(out, *tail);
            if (!out.good()) return kExitIo;
        }
        std::cout << render_exact(exact_args.scheme(), exact_args.params(), expectation,
                                  tail.has_value() ? &*tail : nullptr, format);
        return kExitOk;
    }

    // reproduce-tables
    TableReproduction tables = reproduce_tables(rep_trials, rep_seed, rep_workers);
    for (const auto& [name, path_suffix] :
         {std::pair<const std::string*, const char*>{&tables.table1_csv, "/table1.csv"},
          std::pair<const std::string*, const char*>{&tables.table2_csv, "/table2.csv"}}) {
        std::string path = out_dir + path_suffix;
        std::ofstream out(path);
        if (!out) {
            std::cerr << "error: cannot open '" << path << "' for writing\n";
            return kExitIo;
        }
        out << *name;
        if (!out.good()) return kExitIo;
    }
    int failures = 0;
    for (const TableCheck& check : tables.checks) {
        std::cout << (check.pass ? "PASS " : "FAIL ") << check.cell << ": produced "
                  << format_double(check.produced) << " reference " << format_double(check.reference)
                  << " tolerance " << format_double(check.tolerance) << "\n";
        if (!check.pass) ++failures;
    }
    if (failures > 0) {
        std::cout << failures << " cell(s) outside tolerance\n";
        return kExitTolerance;
    }
    std::cout << "all cells within tolerance\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const covdep::StateBudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
