#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <set>

#include "avmod/scenario.hpp"

using namespace avmod;

namespace {

Scenario by_name(const std::string& name) {
    for (const Scenario& s : builtin_scenarios())
        if (s.name == name) return s;
    FAIL("no builtin scenario named " << name);
    return Scenario{};
}

}  // namespace

TEST_CASE("builtin suite is well formed") {
    auto list = builtin_scenarios();
    CHECK(list.size() >= 40);
    std::set<std::string> names;
    static const std::set<std::string> known_checks = {
        "smash",          "diff-order",          "gauge-compat", "gm-reparam",
        "glue",           "obstruction",         "obstruction-catalog",
        "casimir",        "casimir-table",       "casimir-invariance",
        "local-iso",      "intertwiner",         "gk"};
    int negatives = 0;
    for (const Scenario& s : list) {
        CHECK(!s.name.empty());
        CHECK(names.insert(s.name).second);  // unique names
        CHECK(!s.checks.empty());
        for (const std::string& c : s.checks) CHECK(known_checks.count(c) == 1);
        if (s.expect_fail) ++negatives;
    }
    CHECK(negatives >= 3);
}

TEST_CASE("single scenarios run clean") {
    RunOptions opt;
    for (const char* name : {"elliptic-gauge", "casimir-table", "obstruction-catalog",
                             "p1-sections", "gm-intertwiner-zero", "diff-poly-line"}) {
        Report r = run_scenario(by_name(name), opt);
        CHECK(r.pass);
        CHECK(r.ok());
        CHECK(r.error.empty());
        for (const CheckResult& c : r.results) CHECK(c.pass);
    }
}

TEST_CASE("negative controls fail and are expected to") {
    RunOptions opt;
    Report r = run_scenario(by_name("fixture-charged"), opt);
    CHECK(!r.pass);
    CHECK(r.expect_fail);
    CHECK(r.ok());
    bool saw_witness = false;
    for (const CheckResult& c : r.results)
        if (!c.witnesses.empty()) saw_witness = true;
    CHECK(saw_witness);

    Report half = run_scenario(by_name("p1-det-lambda-half"), opt);
    CHECK(!half.pass);
    CHECK(half.ok());
}

TEST_CASE("broken subjects abort with an error message") {
    Scenario s;
    s.name = "broken";
    s.module = "mystery(1)";
    s.checks = {"smash"};
    Report r = run_scenario(s, RunOptions{});
    CHECK(!r.pass);
    CHECK(!r.ok());
    bool mentioned = !r.error.empty();
    for (const CheckResult& c : r.results)
        if (!c.pass && !c.witnesses.empty()) mentioned = true;
    CHECK(mentioned);

    Scenario unknown;
    unknown.name = "unknown-check";
    unknown.module = "k[x]";
    unknown.checks = {"levitate"};
    CHECK(!run_scenario(unknown, RunOptions{}).pass);
}

TEST_CASE("filtered concurrent runs") {
    RunOptions opt;
    opt.filter = "gm-intertwiner";
    opt.threads = 2;
    auto reports = run_all(builtin_scenarios(), opt);
    CHECK(reports.size() == 4);
    for (size_t i = 1; i < reports.size(); ++i)
        CHECK(reports[i - 1].scenario < reports[i].scenario);  // name order
    CHECK(all_ok(reports));
}

TEST_CASE("reports serialize deterministically") {
    RunOptions opt;
    opt.filter = "smash-poly";
    opt.threads = 2;
    auto first = run_all(builtin_scenarios(), opt);
    auto second = run_all(builtin_scenarios(), opt);
    CHECK(report_json(first, opt) == report_json(second, opt));
    CHECK(report_json(first, opt).find("\"seed\"") != std::string::npos);
}

TEST_CASE("scenario files") {
    const char* path = "scenario_tmp_test.json";
    {
        std::ofstream out(path);
        out << R"json({"name": "file-diff", "module": "tensor(k[x], det(1/2))",
                   "checks": ["diff-order"], "nmax": 4, "degree": 4, "expect": "2"})json";
    }
    Scenario s = scenario_from_json_file(path);
    CHECK(s.name == "file-diff");
    CHECK(s.expect == "2");
    Report r = run_scenario(s, RunOptions{});
    CHECK(r.pass);
    std::remove(path);

    {
        std::ofstream out(path);
        out << R"({"name": "x", "modull": "k[x]"})";
    }
    CHECK_THROWS_AS(scenario_from_json_file(path), AvError);
    {
        std::ofstream out(path);
        out << "{not json";
    }
    CHECK_THROWS_AS(scenario_from_json_file(path), ParseError);
    std::remove(path);
    CHECK_THROWS_AS(scenario_from_json_file("no_such_file.json"), AvError);
}

TEST_CASE("lambda values parse from scenario files") {
    const char* path = "scenario_tmp_lambda.json";
    {
        std::ofstream out(path);
        out << R"({"name": "file-glue", "atlas": "p1", "rule": "det:2",
                   "checks": ["glue"], "degree": 2, "lambda": "-1/2"})";
    }
    Scenario s = scenario_from_json_file(path);
    CHECK(s.lambda == Rational(-1, 2));
    CHECK(run_scenario(s, RunOptions{}).pass);
    std::remove(path);
}
