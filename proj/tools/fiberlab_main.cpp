#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fiberlab/curvescan.hpp"
#include "fiberlab/looplab.hpp"
#include "fiberlab/parser.hpp"
#include "fiberlab/report.hpp"
#include "fiberlab/scenarios.hpp"

namespace {

constexpr int kUsageExit = 64;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split(s, ',')) {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw fiberlab::UsageError("malformed number: " + item);
    }
    return out;
}

void write_json(const nlohmann::ordered_json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream os(path);
        if (!os) throw fiberlab::UsageError("cannot open output file: " + path);
        os << j.dump(2) << "\n";
    }
}

int cmd_verify(const std::string& name, const std::vector<std::string>& sets,
               const std::string& out) {
    std::map<std::string, std::string> overrides;
    for (const auto& kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw fiberlab::UsageError("--set expects key=value, got \"" + kv + "\"");
        overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    fiberlab::Report rep = fiberlab::run_scenario(name, overrides);
    write_json(fiberlab::report_to_json(rep), out);
    return fiberlab::exit_code_for(rep);
}

int cmd_list() {
    for (const auto& info : fiberlab::list_scenarios()) {
        std::cout << info.name << "\n  " << info.description << "\n  defaults:";
        for (const auto& [k, v] : info.default_params) std::cout << " " << k << "=" << v;
        std::cout << "\n";
    }
    return 0;
}

int cmd_scan(const std::string& expr, const std::string& vars_csv, const std::string& ts_csv,
             const std::string& box_csv, int res, const std::string& prefix) {
    auto vars = split(vars_csv, ',');
    if (vars.size() != 2) throw fiberlab::UsageError("--vars expects exactly two names");
    fiberlab::ExactPoly p =
        fiberlab::parse_expression({expr, vars, fiberlab::Field::Real});
    std::vector<double> ts = parse_doubles(ts_csv);
    std::vector<double> box = parse_doubles(box_csv);
    if (box.size() != 4) throw fiberlab::UsageError("--box expects xmin,xmax,ymin,ymax");
    fiberlab::GridSpec g;
    g.xmin = box[0];
    g.xmax = box[1];
    g.ymin = box[2];
    g.ymax = box[3];
    g.resolution = res;

    std::vector<fiberlab::FiberScanReport> reports;
    nlohmann::ordered_json j;
    j["poly"] = expr;
    j["vars"] = vars;
    j["box"] = box;
    j["resolution"] = res;
    j["levels"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < ts.size(); ++k) {
        fiberlab::FiberScanReport rep = fiberlab::extract_level_set(p, ts[k], g);
        nlohmann::ordered_json lev;
        lev["t"] = rep.t;
        lev["t_effective"] = rep.t_effective;
        lev["perturbed"] = rep.perturbed;
        lev["components"] = rep.components.size();
        lev["chi"] = rep.chi;
        lev["singular_cell_warnings"] = rep.singular_cell_warnings;
        nlohmann::ordered_json kinds = nlohmann::ordered_json::array();
        for (const auto& c : rep.components)
            kinds.push_back(c.boundedness ==
                                    fiberlab::CurveComponent::Boundedness::ClosedLoop
                                ? "closed-loop"
                                : "boundary-arc");
        lev["kinds"] = kinds;
        std::string csv_path = prefix + "_t" + std::to_string(k) + ".csv";
        std::ofstream csv(csv_path);
        if (!csv) throw fiberlab::UsageError("cannot open output file: " + csv_path);
        fiberlab::write_components_csv(csv, rep);
        lev["csv"] = csv_path;
        j["levels"].push_back(lev);
        reports.push_back(std::move(rep));
    }
    if (reports.size() >= 2) {
        fiberlab::ChiConstancy cc = fiberlab::chi_constancy(reports);
        j["chi_constant"] = cc.constant;
        fiberlab::SequenceDiagnosis diag = fiberlab::track_components(reports);
        nlohmann::ordered_json flags = nlohmann::ordered_json::array();
        for (const auto& f : diag.flags)
            flags.push_back({{"kind", f.kind == fiberlab::TrackFlag::Kind::Vanishing
                                          ? "vanishing"
                                          : "splitting"},
                             {"step", f.step},
                             {"detail", f.detail}});
        j["track_flags"] = flags;
        fiberlab::BifurcationVerdict v = fiberlab::diagnose_bifurcation(diag, cc);
        j["verdict"] = v.verdict;
        j["rationale"] = v.rationale;
    }
    write_json(j, prefix + "_report.json");
    return 0;
}

int cmd_loops(const std::string& kase, const std::string& lambdas_csv,
              const std::string& out) {
    using namespace fiberlab;
    nlohmann::ordered_json j;
    j["case"] = kase;
    j["entries"] = nlohmann::ordered_json::array();
    if (kase == "real") {
        ExactPoly f = particular_f();
        DiscreteLoop g = sample_model_loop(ModelLoopKind::Gamma);
        DiscreteLoop gt = sample_model_loop(ModelLoopKind::GammaTilde);
        for (double lam : parse_doubles(lambdas_csv)) {
            std::vector<C> punct{C(0)};
            for (double a0 : puncture_heights(lam, f).heights)
                punct.push_back(cylinder_to_plane({0, 1, a0}));
            HomotopyVerdict v = homotopy_verdict(punct, g, gt, 0.1);
            nlohmann::ordered_json e;
            e["lambda"] = lam;
            e["verdict"] = v.kind == HomotopyVerdict::Kind::Equivalent ? "equivalent"
                           : v.kind == HomotopyVerdict::Kind::Distinct ? "distinct"
                                                                       : "inconclusive";
            if (v.kind == HomotopyVerdict::Kind::Equivalent) e["margin"] = v.margin;
            if (v.kind == HomotopyVerdict::Kind::Distinct) {
                e["invariant"] = v.invariant;
                e["windings"] = {v.value_a, v.value_b};
            }
            j["entries"].push_back(e);
        }
    } else if (kase == "complex") {
        for (double lam : parse_doubles(lambdas_csv)) {
            nlohmann::ordered_json e;
            e["lambda"] = lam;
            for (int idx : {1, 2}) {
                DiscreteLoop img =
                    pushforward_loop_complex(complex_model_loop(idx), C(lam, 0), C(1));
                e["sup_distance_to_limit_loop" + std::to_string(idx)] =
                    sup_distance(img, complex_limit_loop(idx, C(1)));
            }
            j["entries"].push_back(e);
        }
    } else {
        throw UsageError("--case must be real or complex");
    }
    write_json(j, out);
    return 0;
}

int cmd_eval(const std::string& expr, const std::string& vars_csv, const std::string& at_csv,
             bool complex_field) {
    auto vars = split(vars_csv, ',');
    fiberlab::ExactPoly p = fiberlab::parse_expression(
        {expr, vars, complex_field ? fiberlab::Field::Complex : fiberlab::Field::Real});
    std::vector<double> at = parse_doubles(at_csv);
    std::cout.precision(17);
    if (complex_field) {
        // --at lists re,im pairs, one pair per variable
        if (at.size() != 2 * vars.size())
            throw fiberlab::UsageError("--at expects re,im pairs, one per variable");
        std::vector<std::complex<double>> pt;
        for (std::size_t k = 0; k < vars.size(); ++k) pt.emplace_back(at[2 * k], at[2 * k + 1]);
        std::complex<double> v = p.evaluate_complex(pt);
        std::cout << v.real() << (v.imag() < 0 ? " - " : " + ") << std::abs(v.imag())
                  << "i\n";
    } else {
        if (at.size() != vars.size())
            throw fiberlab::UsageError("--at expects one value per variable");
        std::cout << p.evaluate_real(at) << "\n";
    }
    return 0;
}

int cmd_parse(const std::string& expr, const std::string& vars_csv, bool complex_field) {
    fiberlab::ExactPoly p = fiberlab::parse_expression(
        {expr, split(vars_csv, ','),
         complex_field ? fiberlab::Field::Complex : fiberlab::Field::Real});
    std::cout << p.to_string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fiberlab: checks for regular bifurcation values of polynomial maps"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "run a named scenario and emit its report");
    std::string scenario, verify_out;
    std::vector<std::string> sets;
    verify->add_option("scenario", scenario, "scenario name (see `fiberlab list`)")
        ->required();
    verify->add_option("--set", sets, "override a scenario parameter, key=value");
    verify->add_option("--out", verify_out, "write the JSON report here (default stdout)");

    app.add_subcommand("list", "list scenarios with descriptions and defaults");

    auto* scan = app.add_subcommand("scan", "trace level sets of a two-variable polynomial");
    std::string scan_poly, scan_vars = "x,y", scan_ts, scan_box = "-20,20,-20,20";
    std::string scan_prefix = "scan";
    int scan_res = 2048;
    scan->add_option("--poly", scan_poly, "polynomial expression")->required();
    scan->add_option("--vars", scan_vars, "two comma-separated variable names");
    scan->add_option("--t", scan_ts, "comma-separated levels")->required();
    scan->add_option("--box", scan_box, "xmin,xmax,ymin,ymax");
    scan->add_option("--res", scan_res, "grid resolution (cells per axis)");
    scan->add_option("--out-prefix", scan_prefix, "prefix for the JSON report and CSVs");

    auto* loops = app.add_subcommand("loops", "loop homotopy and limit diagnostics");
    std::string loops_case, loops_lambdas, loops_out;
    loops->add_option("--case", loops_case, "real or complex")->required();
    loops->add_option("--lambda", loops_lambdas, "comma-separated parameter values")
        ->required();
    loops->add_option("--out", loops_out, "write the JSON report here (default stdout)");

    auto* eval = app.add_subcommand("eval", "evaluate a polynomial at a point");
    std::string eval_poly, eval_vars, eval_at;
    bool eval_complex = false;
    eval->add_option("--poly", eval_poly, "polynomial expression")->required();
    eval->add_option("--vars", eval_vars, "comma-separated variable names")->required();
    eval->add_option("--at", eval_at,
                     "comma-separated coordinates (re,im pairs with --complex)")
        ->required();
    eval->add_flag("--complex", eval_complex, "parse and evaluate over C");

    auto* parse = app.add_subcommand("parse", "print the canonical form of an expression");
    std::string parse_poly, parse_vars;
    bool parse_complex = false;
    parse->add_option("--poly", parse_poly, "polynomial expression")->required();
    parse->add_option("--vars", parse_vars, "comma-separated variable names")->required();
    parse->add_flag("--complex", parse_complex, "parse over C");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsageExit;
    }

    try {
        if (verify->parsed()) return cmd_verify(scenario, sets, verify_out);
        if (app.got_subcommand("list")) return cmd_list();
        if (scan->parsed())
            return cmd_scan(scan_poly, scan_vars, scan_ts, scan_box, scan_res, scan_prefix);
        if (loops->parsed()) return cmd_loops(loops_case, loops_lambdas, loops_out);
        if (eval->parsed()) return cmd_eval(eval_poly, eval_vars, eval_at, eval_complex);
        if (parse->parsed()) return cmd_parse(parse_poly, parse_vars, parse_complex);
    } catch (const fiberlab::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsageExit;
    } catch (const fiberlab::ParseError& e) {
        std::cerr << "parse error at offset " << e.offset << ": " << e.what() << "\n";
        return kUsageExit;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsageExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return kUsageExit;
}
