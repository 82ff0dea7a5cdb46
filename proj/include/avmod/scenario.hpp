#pragma once

#include <optional>
#include <string>
#include <vector>

#include "avmod/atlas.hpp"
#include "avmod/rational.hpp"

namespace avmod {

/// One named verification job: a subject (module expression, atlas, or
/// representation expression) and the checks to run against it.
///
/// Check names: smash, diff-order, gauge-compat, gm-reparam, glue,
/// obstruction, obstruction-catalog, casimir, casimir-table,
/// casimir-invariance, local-iso, intertwiner, gk.
struct Scenario {
    std::string name;
    std::vector<std::string> checks;

    std::string module;  // module expression
    std::string atlas;   // atlas name
    std::string rep;     // representation expression
    std::string rule;    // transition rule for glue checks
    std::string frame = "default";

    int nmax = 4;    // differentiability probe bound / table size
    int degree = 3;  // polynomial degree bound for exhaustive identities
    int lmax = 24;   // growth series length
    int k = 2;       // casimir depth
    Rational lambda; // charge

    std::string expect;                 // exact expected value, when not empty
    std::optional<double> expect_value; // numeric expectation (growth exponents)
    double tol = 0.15;
    bool expect_fail = false;  // negative controls: the scenario must fail
};

struct CheckResult {
    std::string check;
    bool pass = true;
    std::string value;
    std::vector<std::string> witnesses;
    double seconds = 0.0;
};

struct Report {
    std::string scenario;
    bool pass = true;           // every check passed
    bool expect_fail = false;   // copied from the scenario
    std::vector<CheckResult> results;
    std::string error;          // set when the scenario aborted early

    /// A report is in order when its outcome matches the expectation.
    bool ok() const { return pass != expect_fail; }
};

struct RunOptions {
    unsigned long seed = 0;
    int samples = 64;
    bool timings = false;
    std::string filter;
    int threads = 0;  // 0 = hardware concurrency
};

/// The embedded suite: every acceptance-level identity plus the negative
/// controls, one scenario per subject.
std::vector<Scenario> builtin_scenarios();

/// Reads one scenario from a JSON file; unknown keys are rejected.
Scenario scenario_from_json_file(const std::string& path);

Report run_scenario(const Scenario& s, const RunOptions& opt);

/// Runs scenarios matching opt.filter (substring; empty = all) concurrently
/// and returns the reports sorted by scenario name.
std::vector<Report> run_all(const std::vector<Scenario>& list, const RunOptions& opt);

/// Deterministic JSON rendering (timings only when opt.timings is set).
std::string report_json(const std::vector<Report>& reports, const RunOptions& opt);

bool all_ok(const std::vector<Report>& reports);

}  // namespace avmod
