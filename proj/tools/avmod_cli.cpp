#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "avmod/errors.hpp"
#include "avmod/expr.hpp"
#include "avmod/gkdim.hpp"
#include "avmod/scenario.hpp"

using namespace avmod;

namespace {

int print_reports(const std::vector<Report>& reports, const RunOptions& opt,
                  const std::string& json_path) {
    for (const Report& r : reports) {
        const char* tag = r.ok() ? (r.expect_fail ? "xfail" : "ok  ") : "FAIL";
        std::cout << "[" << tag << "] " << r.scenario;
        for (const CheckResult& c : r.results) {
            std::cout << "  " << c.check;
            if (!c.pass) std::cout << "!";
        }
        std::cout << "\n";
        if (!r.ok()) {
            if (!r.error.empty()) std::cout << "       " << r.error << "\n";
            for (const CheckResult& c : r.results)
                for (const std::string& w : c.witnesses) std::cout << "       " << w << "\n";
        }
    }
    size_t good = 0;
    for (const Report& r : reports)
        if (r.ok()) ++good;
    std::cout << good << "/" << reports.size() << " scenarios in order\n";
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) {
            std::cerr << "cannot write " << json_path << "\n";
            return 2;
        }
        out << report_json(reports, opt);
    }
    return all_ok(reports) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact computer algebra for modules over rings of differential-operator type"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    RunOptions opt;
    std::string json_path;
    app.add_option("--json", json_path, "Write a JSON report to this path");
    app.add_option("--seed", opt.seed, "Seed for randomized property checks");
    app.add_option("--samples", opt.samples, "Sample count for randomized property checks");
    app.add_flag("--timings", opt.timings, "Include wall-clock timings in reports");
    app.add_option("--threads", opt.threads, "Worker threads (0 = hardware)");

    auto* verify = app.add_subcommand("verify", "Run the full built-in scenario suite");
    verify->add_option("--filter", opt.filter, "Only run scenarios whose name contains this");

    auto* scenario_cmd = app.add_subcommand("scenario", "Run one scenario from a JSON file");
    std::string scenario_path;
    scenario_cmd->add_option("file", scenario_path, "Scenario JSON file")->required();

    auto* diff_cmd = app.add_subcommand("diff-order", "Minimal differentiability order");
    std::string module_expr;
    int nmax = 4, degree = 4;
    diff_cmd->add_option("--module", module_expr, "Module expression")->required();
    diff_cmd->add_option("--nmax", nmax, "Largest order to probe");
    diff_cmd->add_option("--degree", degree, "Polynomial degree bound");

    auto* gk_cmd = app.add_subcommand("gk", "Growth series and exponent");
    std::string gk_module, frame_spec = "default", csv_path;
    int lmax = 24;
    double tail = 0.25;
    gk_cmd->add_option("--module", gk_module, "Module expression")->required();
    gk_cmd->add_option("--frame", frame_spec, "default or jets(s)");
    gk_cmd->add_option("--lmax", lmax, "Series length");
    gk_cmd->add_option("--tail", tail, "Tail fraction used for the slope fit");
    gk_cmd->add_option("--csv", csv_path, "Write the series as CSV to this path");

    auto* rep_cmd = app.add_subcommand("rep", "Representation diagnostics");
    std::string rep_expr;
    int casimirs = 2, rep_n = 1;
    rep_cmd->add_option("--expr", rep_expr, "Representation expression")->required();
    rep_cmd->add_option("--casimirs", casimirs, "Casimir depth");
    rep_cmd->add_option("--n", rep_n, "Rank used when the expression leaves it open");

    auto* glue_cmd = app.add_subcommand("glue", "Overlap consistency for an atlas");
    std::string atlas_name, rule_spec = "section";
    int glue_degree = 3;
    glue_cmd->add_option("--atlas", atlas_name, "p1, gm, circle or elliptic-affine")->required();
    glue_cmd->add_option("--rule", rule_spec, "section, det:<q>, rep:<R>, charged:<q>, jet:<s>");
    glue_cmd->add_option("--degree", glue_degree, "Monomial degree bound");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            return print_reports(run_all(builtin_scenarios(), opt), opt, json_path);
        }

        if (scenario_cmd->parsed()) {
            Scenario s = scenario_from_json_file(scenario_path);
            return print_reports({run_scenario(s, opt)}, opt, json_path);
        }

        if (diff_cmd->parsed()) {
            AVModulePtr m = parse_module_expr(module_expr);
            std::optional<int> order = minimal_differentiability(*m, nmax, degree);
            nlohmann::json j;
            j["module"] = m->describe();
            if (order)
                j["order"] = *order;
            else
                j["order"] = nullptr;
            std::cout << m->describe() << ": order "
                      << (order ? std::to_string(*order) : std::string("none")) << "\n";
            if (!json_path.empty()) std::ofstream(json_path) << j.dump(2) << "\n";
            return order ? 0 : 1;
        }

        if (gk_cmd->parsed()) {
            AVModulePtr m = parse_module_expr(gk_module);
            std::vector<FrameOp> frame = parse_frame_spec(frame_spec, m->chart());
            std::vector<ModElem> seed;
            for (int a = 0; a < m->rank(); ++a) seed.push_back(m->gen(a));
            GrowthResult g = growth_series(*m, frame, seed, lmax);
            double residual = 0.0;
            double gamma = growth_exponent(g.dims, tail, &residual);
            std::ostream* csv = &std::cout;
            std::ofstream csv_file;
            if (!csv_path.empty()) {
                csv_file.open(csv_path);
                if (!csv_file) {
                    std::cerr << "cannot write " << csv_path << "\n";
                    return 2;
                }
                csv = &csv_file;
            }
            *csv << "l,dim,log_l,log_dim\n";
            for (size_t l = 0; l < g.dims.size(); ++l) {
                *csv << l << "," << g.dims[l] << ",";
                if (l >= 1 && g.dims[l] > 0)
                    *csv << std::log(static_cast<double>(l)) << ","
                         << std::log(static_cast<double>(g.dims[l]));
                else
                    *csv << ",";
                *csv << "\n";
            }
            nlohmann::json j;
            j["module"] = m->describe();
            j["lmax"] = lmax;
            j["exponent"] = gamma;
            j["residual"] = residual;
            std::cout << "exponent " << gamma << " residual " << residual << "\n";
            if (!json_path.empty()) std::ofstream(json_path) << j.dump(2) << "\n";
            return 0;
        }

        if (rep_cmd->parsed()) {
            Rep r = rep_build(parse_rep_expr(rep_expr, rep_n));
            std::cout << r.expr->str() << ": dim " << r.dim;
            auto cc = try_central_character(r, casimirs);
            nlohmann::json j;
            j["expr"] = r.expr->str();
            j["dim"] = r.dim;
            if (cc) {
                std::cout << ", casimirs";
                j["casimirs"] = nlohmann::json::array();
                for (const Rational& c : *cc) {
                    std::cout << " " << c.str();
                    j["casimirs"].push_back(c.str());
                }
            } else {
                std::cout << ", no central character";
                j["casimirs"] = nullptr;
            }
            std::optional<int> k = exterior_power_type(r);
            std::cout << ", exterior type " << (k ? std::to_string(*k) : std::string("none"))
                      << "\n";
            if (k)
                j["exterior_type"] = *k;
            else
                j["exterior_type"] = nullptr;
            if (!json_path.empty()) std::ofstream(json_path) << j.dump(2) << "\n";
            return 0;
        }

        if (glue_cmd->parsed()) {
            Atlas at = atlas_by_name(atlas_name);
            int n = at.transitions.empty() ? 1
                                           : at.transitions.begin()->second.from_overlap->dim;
            TransitionRule rule = parse_transition_rule(rule_spec, n);
            CheckReport r = glue_check(at, rule, glue_degree);
            std::cout << at.name << " " << rule.str() << ": " << r.checks << " round trips, "
                      << (r.pass ? "all consistent" : "INCONSISTENT") << "\n";
            for (const std::string& w : r.witnesses) std::cout << "  " << w << "\n";
            nlohmann::json j;
            j["atlas"] = at.name;
            j["rule"] = rule.str();
            j["checks"] = r.checks;
            j["pass"] = r.pass;
            j["witnesses"] = r.witnesses;
            if (!json_path.empty()) std::ofstream(json_path) << j.dump(2) << "\n";
            return r.pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
