#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "covdep/analytic.hpp"
#include "covdep/exactdp.hpp"
#include "covdep/montecarlo.hpp"

namespace covdep {

// Locale-free float rendering: shortest round-trip, '.' decimal point.
std::string format_double(double value);

// RFC-4180-style field quoting (only when the field needs it).
std::string csv_field(const std::string& value);

enum class OutputFormat { kText, kJson, kCsv };
OutputFormat parse_format(const std::string& name);

std::string render_expect(const AnalyticReport& report, OutputFormat format);
std::string render_bounds(const SystemParams& params, OutputFormat format);
std::string render_simulate(const ExperimentConfig& config, const DistributionSummary& summary,
                            OutputFormat format);
std::string render_exact(const Scheme& scheme, const SystemParams& params,
                         const Rational& expectation, const TailResult* tail,
                         OutputFormat format);

void write_ecdf_csv(std::ostream& out, const DistributionSummary& summary);
void write_tail_csv(std::ostream& out, const TailResult& tail);

// Published reference figures for the n=35, k=20, m=2 (s=2) configuration,
// used by the reproduce-tables command and the acceptance gates.
struct ReferenceRow {
    const char* scheme;
    double analytic_expectation;
    double simulated_mean;
    long empirical_size[3];        // levels 0.90 / 0.95 / 0.99
    double normal_approx_size[3];  // same levels
};

inline constexpr double kReferenceLevels[3] = {0.90, 0.95, 0.99};

inline constexpr ReferenceRow kReferenceRows[3] = {
    {"local", 57.998, 57.998, {72, 77, 88}, {76.019, 79.470, 86.218}},
    {"global", 58.649, 58.650, {66, 69, 74}, {68.026, 69.821, 73.333}},
    {"pmds", 58.323, 58.322, {67, 70, 77}, {69.530, 71.676, 75.872}},
};

inline constexpr SystemParams kReferenceParams = {35, 20, 2, 1};
inline constexpr long kReferenceSlack = 2;

inline constexpr double kAnalyticTolerance = 0.0005;
inline constexpr double kSimulatedMeanTolerance = 0.05;
inline constexpr double kNormalApproxTolerance = 0.01;
inline constexpr long kEmpiricalQuantileTolerance = 1;

Scheme reference_scheme(const ReferenceRow& row);

struct TableCheck {
    std::string cell;
    double produced;
    double reference;
    double tolerance;
    bool pass;
};

struct TableReproduction {
    std::string table1_csv;
    std::string table2_csv;
    std::vector<TableCheck> checks;
    bool all_pass = true;
};

// Reruns the reference configuration (analytic + simulation at the given
// trial count) and compares every cell against the reference figures.
TableReproduction reproduce_tables(uint64_t trials, uint64_t seed, int workers);

}  // namespace covdep
