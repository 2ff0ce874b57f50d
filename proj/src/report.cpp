#include "covdep/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace covdep {

using nlohmann::json;

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw std::runtime_error("float formatting failed");
    return std::string(buf, ptr);
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

OutputFormat parse_format(const std::string& name) {
    if (name == "text") return OutputFormat::kText;
    if (name == "json") return OutputFormat::kJson;
    if (name == "csv") return OutputFormat::kCsv;
    throw std::invalid_argument("unknown format '" + name + "' (expected text, json or csv)");
}

namespace {

json params_json(const Scheme& scheme, const SystemParams& params) {
    json j{{"n", params.n}, {"k", params.k}, {"m", params.m}, {"a", params.a}};
    if (scheme.kind == SchemeKind::kPmds) j["s"] = scheme.slack;
    return j;
}

std::string params_text(const Scheme& scheme, const SystemParams& params) {
    std::ostringstream out;
    out << "n=" << params.n << " k=" << params.k << " m=" << params.m << " a=" << params.a;
    if (scheme.kind == SchemeKind::kPmds) out << " s=" << scheme.slack;
    return out.str();
}

}  // namespace

std::string render_expect(const AnalyticReport& report, OutputFormat format) {
    const double expectation = to_double(report.expectation);
    const double variance = to_double(report.variance);
    switch (format) {
        case OutputFormat::kJson: {
            json sizes = json::array();
            for (const auto& [level, size] : report.confidence_sizes)
                sizes.push_back(json{{"level", level}, {"size", size}});
            json j{{"command", "expect"},
                   {"scheme", std::string(report.scheme.name())},
                   {"params", params_json(report.scheme, report.params)},
                   {"provenance", "analytic"},
                   {"expectation", expectation},
                   {"expectation_exact", to_string(report.expectation)},
                   {"variance", variance},
                   {"variance_method", report.variance_method},
                   {"std", report.std_dev},
                   {"z_convention", "two-sided"},
                   {"confidence_sizes", sizes}};
            return j.dump() + "\n";
        }
        case OutputFormat::kCsv: {
            std::ostringstream out;
            out << "scheme,n,k,m,a,s,expectation,variance,std";
            for (const auto& [level, size] : report.confidence_sizes)
                out << ",size_" << format_double(level);
            out << "\n";
            out << report.scheme.name() << "," << report.params.n << "," << report.params.k << ","
                << report.params.m << "," << report.params.a << "," << report.scheme.slack << ","
                << format_double(expectation) << "," << format_double(variance) << ","
                << format_double(report.std_dev);
            for (const auto& [level, size] : report.confidence_sizes)
                out << "," << format_double(size);
            out << "\n";
            return out.str();
        }
        case OutputFormat::kText: {
            std::ostringstream out;
            out << "scheme " << report.scheme.name() << " ("
                << params_text(report.scheme, report.params) << ")\n";
            out << "  expectation      " << format_double(expectation) << "  (exact "
                << to_string(report.expectation) << ") [analytic]\n";
            out << "  variance         " << format_double(variance) << "  ["
                << report.variance_method << "]\n";
            out << "  std              " << format_double(report.std_dev) << "\n";
            out << "  confidence sizes (two-sided z):\n";
            for (const auto& [level, size] : report.confidence_sizes)
                out << "    " << format_double(level) << " -> " << format_double(size) << "\n";
            return out.str();
        }
    }
    throw std::logic_error("unreachable");
}

std::string render_bounds(const SystemParams& params, OutputFormat format) {
    Rational simple = lower_bound_simple(params);
    Rational harmonic = lower_bound_harmonic(params);
    Rational multi = lower_bound_multi(params);
    bool chain_ok = simple <= harmonic && (params.a != 1 || multi == harmonic);
    const Scheme scheme = Scheme::local_mds();
    switch (format) {
        case OutputFormat::kJson: {
            json j{{"command", "bounds"},
                   {"params", params_json(scheme, params)},
                   {"provenance", "analytic"},
                   {"simple", to_double(simple)},
                   {"harmonic", to_double(harmonic)},
                   {"multi", to_double(multi)},
                   {"chain_ok", chain_ok}};
            return j.dump() + "\n";
        }
        case OutputFormat::kCsv: {
            std::ostringstream out;
            out << "n,k,m,a,simple,harmonic,multi,chain_ok\n"
                << params.n << "," << params.k << "," << params.m << "," << params.a << ","
                << format_double(to_double(simple)) << "," << format_double(to_double(harmonic))
                << "," << format_double(to_double(multi)) << "," << (chain_ok ? "true" : "false")
                << "\n";
            return out.str();
        }
        case OutputFormat::kText: {
            std::ostringstream out;
            out << "lower bounds (" << params_text(scheme, params) << ")\n";
            out << "  simple    " << format_double(to_double(simple)) << "  (exact "
                << to_string(simple) << ")\n";
            out << "  harmonic  " << format_double(to_double(harmonic)) << "  (exact "
                << to_string(harmonic) << ")\n";
            out << "  multi     " << format_double(to_double(multi)) << "  (exact "
                << to_string(multi) << ")\n";
            out << "  chain order " << (chain_ok ? "ok" : "VIOLATED") << "\n";
            return out.str();
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

json config_json(const ExperimentConfig& config, const DistributionSummary& summary) {
    json requested = json::array();
    for (long f : (config.requested.empty() ? default_requested(config.params) : config.requested))
        requested.push_back(f);
    json levels = json::array();
    for (double level : config.quantile_levels) levels.push_back(level);
    return json{{"scheme", std::string(config.scheme.name())},
                {"params", params_json(config.scheme, config.params)},
                {"requested", requested},
                {"trials", config.trials},
                {"seed", config.seed},
                {"workers", config.workers},
                {"quantile_levels", levels},
                {"ecdf_max", summary.ecdf_max}};
}

}  // namespace

std::string render_simulate(const ExperimentConfig& config, const DistributionSummary& summary,
                            OutputFormat format) {
    switch (format) {
        case OutputFormat::kJson: {
            json quantiles = json::array();
            for (const auto& [level, draws] : summary.quantiles)
                quantiles.push_back(json{{"level", level}, {"draws", draws}});
            json j{{"command", "simulate"},
                   {"config", config_json(config, summary)},
                   {"provenance", "simulated"},
                   {"mean", summary.mean},
                   {"sample_variance", summary.sample_variance},
                   {"min", summary.min_draws},
                   {"max", summary.max_draws},
                   {"overflow", summary.overflow},
                   {"quantiles", quantiles}};
            return j.dump() + "\n";
        }
        case OutputFormat::kCsv: {
            std::ostringstream out;
            out << "scheme,n,k,m,a,s,trials,seed,workers,mean,sample_variance,min,max,overflow";
            for (const auto& [level, draws] : summary.quantiles)
                out << ",q_" << format_double(level);
            out << "\n";
            out << config.scheme.name() << "," << config.params.n << "," << config.params.k << ","
                << config.params.m << "," << config.params.a << "," << config.scheme.slack << ","
                << config.trials << "," << config.seed << "," << config.workers << ","
                << format_double(summary.mean) << "," << format_double(summary.sample_variance)
                << "," << summary.min_draws << "," << summary.max_draws << "," << summary.overflow;
            for (const auto& [level, draws] : summary.quantiles) out << "," << draws;
            out << "\n";
            return out.str();
        }
        case OutputFormat::kText: {
            std::ostringstream out;
            out << "simulation " << config.scheme.name() << " ("
                << params_text(config.scheme, config.params) << ") trials=" << config.trials
                << " seed=" << config.seed << " workers=" << config.workers
                << " ecdf_max=" << summary.ecdf_max << "\n";
            out << "  mean             " << format_double(summary.mean) << " [simulated]\n";
            out << "  sample variance  " << format_double(summary.sample_variance) << "\n";
            out << "  min / max        " << summary.min_draws << " / " << summary.max_draws << "\n";
            out << "  overflow         " << summary.overflow << "\n";
            out << "  quantiles:\n";
            for (const auto& [level, draws] : summary.quantiles)
                out << "    " << format_double(level) << " -> " << draws << "\n";
            return out.str();
        }
    }
    throw std::logic_error("unreachable");
}

std::string render_exact(const Scheme& scheme, const SystemParams& params,
                         const Rational& expectation, const TailResult* tail,
                         OutputFormat format) {
    const double value = to_double(expectation);
    switch (format) {
        case OutputFormat::kJson: {
            json j{{"command", "exact"},
                   {"scheme", std::string(scheme.name())},
                   {"params", params_json(scheme, params)},
                   {"provenance", "dp"},
                   {"expectation", value},
                   {"expectation_exact", to_string(expectation)}};
            if (tail != nullptr) {
                j["tail"] = json{{"r_max", static_cast<long>(tail->survival.size()) - 1},
                                 {"residual", tail->residual},
                                 {"converged", tail->converged}};
            }
            return j.dump() + "\n";
        }
        case OutputFormat::kCsv: {
            std::ostringstream out;
            out << "scheme,n,k,m,a,s,expectation\n";
            out << scheme.name() << "," << params.n << "," << params.k << "," << params.m << ","
                << params.a << "," << scheme.slack << "," << format_double(value) << "\n";
            return out.str();
        }
        case OutputFormat::kText: {
            std::ostringstream out;
            out << "exact expectation " << scheme.name() << " (" << params_text(scheme, params)
                << ")\n";
            out << "  value " << format_double(value) << "  (exact " << to_string(expectation)
                << ") [dp]\n";
            if (tail != nullptr)
                out << "  tail: r_max=" << tail->survival.size() - 1
                    << " residual=" << format_double(tail->residual)
                    << " converged=" << (tail->converged ? "yes" : "no") << "\n";
            return out.str();
        }
    }
    throw std::logic_error("unreachable");
}

void write_ecdf_csv(std::ostream& out, const DistributionSummary& summary) {
    out << "r,cdf\n";
    auto cdf = ecdf(summary);
    for (size_t r = 0; r < cdf.size(); ++r)
        out << r << "," << format_double(cdf[r]) << "\n";
}

void write_tail_csv(std::ostream& out, const TailResult& tail) {
    out << "r,survival\n";
    for (size_t r = 0; r < tail.survival.size(); ++r)
        out << r << "," << format_double(tail.survival[r]) << "\n";
}

Scheme reference_scheme(const ReferenceRow& row) {
    std::string name = row.scheme;
    if (name == "local") return Scheme::local_mds();
    if (name == "global") return Scheme::global_mds();
    return Scheme::pmds(kReferenceSlack);
}

TableReproduction reproduce_tables(uint64_t trials, uint64_t seed, int workers) {
    TableReproduction result;
    std::ostringstream table1, table2;
    table1 << "scheme,simulated_mean,analytic_expectation\n";
    table2 << "scheme,level,empirical_size,normal_approx_size\n";

    auto check = [&result](std::string cell, double produced, double reference, double tolerance) {
        bool pass = std::abs(produced - reference) <= tolerance;
        result.checks.push_back({std::move(cell), produced, reference, tolerance, pass});
        result.all_pass = result.all_pass && pass;
    };

    for (const ReferenceRow& row : kReferenceRows) {
        Scheme scheme = reference_scheme(row);
        AnalyticReport analytic =
            analyze(scheme, kReferenceParams, std::span<const double>(kReferenceLevels, 3));

        ExperimentConfig config;
        config.scheme = scheme;
        config.params = kReferenceParams;
        config.trials = trials;
        config.seed = seed;
        config.workers = workers;
        config.quantile_levels.assign(std::begin(kReferenceLevels), std::end(kReferenceLevels));
        DistributionSummary summary = run_experiment(config);

        double expectation = to_double(analytic.expectation);
        table1 << row.scheme << "," << format_double(summary.mean) << ","
               << format_double(expectation) << "\n";
        check(std::string(row.scheme) + "/analytic", expectation, row.analytic_expectation,
              kAnalyticTolerance);
        check(std::string(row.scheme) + "/simulated-mean", summary.mean, row.simulated_mean,
              kSimulatedMeanTolerance);

        for (int i = 0; i < 3; ++i) {
            long empirical = summary.quantiles[static_cast<size_t>(i)].second;
            double normal = analytic.confidence_sizes[static_cast<size_t>(i)].second;
            table2 << row.scheme << "," << format_double(kReferenceLevels[i]) << "," << empirical
                   << "," << format_double(normal) << "\n";
            std::string level = format_double(kReferenceLevels[i]);
            check(std::string(row.scheme) + "/normal-approx@" + level, normal,
                  row.normal_approx_size[i], kNormalApproxTolerance);
            check(std::string(row.scheme) + "/empirical@" + level,
                  static_cast<double>(empirical), static_cast<double>(row.empirical_size[i]),
                  static_cast<double>(kEmpiricalQuantileTolerance));
        }
    }

    result.table1_csv = table1.str();
    result.table2_csv = table2.str();
    return result;
}

}  // namespace covdep
