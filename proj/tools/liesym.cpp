// Command-line front end: model checks, reductions, integration and the
// built-in case suite. Exit codes: 0 pass, 1 a case failed, 2 usage or input error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "liesym/cases.hpp"
#include "liesym/error.hpp"
#include "liesym/suite.hpp"

using namespace liesym;

namespace {

struct Output {
    std::string json_path;
    bool quiet = false;
};

int emit(Report& report, const Output& out) {
    if (!out.json_path.empty()) {
        std::ofstream f(out.json_path);
        if (!f) throw Error(ErrorKind::Declaration, "cannot write " + out.json_path);
        f << report.to_json().dump(2) << "\n";
    }
    if (!out.quiet) std::cout << report.to_text();
    return report.exit_code();
}

std::vector<double> parse_numbers(const std::vector<std::string>& items) {
    std::vector<double> out;
    for (const auto& s : items) {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw CLI::ValidationError("not a number: " + s);
        out.push_back(v);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lie point symmetry checks, reductions and reduced-ODE integration"};
    app.require_subcommand(1);
    app.fallthrough();
    Output out;
    app.add_option("--json", out.json_path, "Write the machine-readable report to this path");
    app.add_flag("-q,--quiet", out.quiet, "Suppress the text report");

    std::string model, field, pde, ansatz, printed, eq, candidate, solution, ode, method, csv, svg, dir = "fig1", grouping = "default";
    std::vector<std::string> fields, ic_text, span_text;
    bool serial = false;

    auto* sym = app.add_subcommand("check-symmetry", "Symmetry residual of FIELD on PDE");
    sym->add_option("model", model, "Model file or 'builtin'")->required();
    sym->add_option("field", field)->required();
    sym->add_option("pde", pde)->required();

    auto* com = app.add_subcommand("commutators", "Pairwise commutators of the fields");
    com->add_option("model", model)->required();
    com->add_option("fields", fields)->required()->expected(2, -1);

    auto* clo = app.add_subcommand("closure", "Closure table of the fields");
    clo->add_option("model", model)->required();
    clo->add_option("fields", fields)->required()->expected(1, -1);

    auto* det = app.add_subcommand("determining", "Determining equations of PDE");
    det->add_option("model", model)->required();
    det->add_option("pde", pde)->required();
    std::string generic;
    det->add_option("--generic", generic, "Field to substitute into every equation");

    auto* red = app.add_subcommand("reduce", "Pull PDE back under ANSATZ");
    red->add_option("model", model)->required();
    red->add_option("pde", pde)->required();
    red->add_option("ansatz", ansatz)->required();
    red->add_option("--printed", printed, "Equation to compare against");

    auto* fi = app.add_subcommand("first-integral", "Check CANDIDATE as a first integral of EQ");
    fi->add_option("model", model)->required();
    fi->add_option("eq", eq)->required();
    fi->add_option("candidate", candidate)->required();

    auto* sol = app.add_subcommand("solution-check", "Substitute SOLUTION into EQ");
    sol->add_option("model", model)->required();
    sol->add_option("eq", eq)->required();
    sol->add_option("solution", solution)->required();

    auto* integ = app.add_subcommand("integrate", "Integrate an ODE block");
    integ->add_option("model", model)->required();
    integ->add_option("ode", ode)->required();
    integ->add_option("--ic", ic_text, "Initial state")->required()->expected(1, -1)->allow_extra_args(false);
    integ->add_option("--span", span_text, "Start and end")->required()->expected(2);
    integ->add_option("--method", method, "adaptive-rk45 or fixed-rk4");
    integ->add_option("--csv", csv, "Trajectory CSV path")->required();
    integ->add_option("--svg", svg, "Optional SVG plot path");
    std::vector<std::string> sets;
    integ->add_option("--set", sets, "Parameter binding NAME=VALUE")->allow_extra_args(false);
    double tol = 1e-9, step = 1e-4;
    integ->add_option("--tol", tol, "Absolute and relative tolerance");
    integ->add_option("--step", step, "Fixed step");

    auto* fig = app.add_subcommand("fig1", "Profiles H(zeta) for n = 2, 3, 5");
    fig->add_option("--out", dir, "Output directory");
    fig->add_option("--grouping", grouping, "default or regrouped");

    auto* suite = app.add_subcommand("paper-suite", "Run every built-in case");
    suite->add_flag("--serial", serial, "Run cases one after another");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Report report;
        if (suite->parsed()) {
            report = run_paper_suite(!serial);
            return emit(report, out);
        }
        if (fig->parsed()) {
            ProfileSet set = run_profiles(builtin_model(), grouping);
            auto paths = write_profiles(set, dir);
            report.command = "fig1";
            report.cases = profile_cases(set);
            int code = emit(report, out);
            if (!out.quiet)
                for (const auto& p : paths) std::cout << "wrote " << p << "\n";
            return code;
        }

        Model m = load_model_source(model);
        if (sym->parsed()) {
            report.command = "check-symmetry";
            report.cases.push_back(symmetry_case(m, field, pde));
        } else if (com->parsed()) {
            report.command = "commutators";
            report.cases.push_back(commutator_case(m, fields));
            if (!out.quiet)
                for (const auto& row : report.cases[0].details["commutators"]) {
                    std::string comb = row["combination"];
                    std::cout << row["pair"].get<std::string>() << " = " << (comb.empty() ? row["value"].get<std::string>() : comb) << "\n";
                }
        } else if (clo->parsed()) {
            report.command = "closure";
            report.cases.push_back(closure_case(m, fields));
        } else if (det->parsed()) {
            report.command = "determining";
            report.cases.push_back(determining_case(m, pde, generic));
            if (!out.quiet)
                for (const auto& e : report.cases[0].details["equations"]) std::cout << "  " << e.get<std::string>() << " = 0\n";
        } else if (red->parsed()) {
            report.command = "reduce";
            report.cases.push_back(reduce_case(m, pde, ansatz, printed));
            if (!out.quiet && report.cases[0].details.contains("derived"))
                std::cout << "derived: " << report.cases[0].details["derived"].get<std::string>() << " = 0\n";
        } else if (fi->parsed()) {
            report.command = "first-integral";
            report.cases.push_back(first_integral_case(m, eq, candidate));
        } else if (sol->parsed()) {
            report.command = "solution-check";
            report.cases.push_back(solution_case(m, eq, solution));
        } else if (integ->parsed()) {
            report.command = "integrate";
            const Equation& e = m.equation(ode);
            std::map<std::string, double> params;
            for (const auto& s : sets) {
                auto eqpos = s.find('=');
                if (eqpos == std::string::npos) throw CLI::ValidationError("--set expects NAME=VALUE, got " + s);
                params[s.substr(0, eqpos)] = parse_numbers({s.substr(eqpos + 1)})[0];
            }
            OdeSystem sys = compile_rhs(e.lhs, e.dependent, params);
            IntegratorConfig cfg;
            if (!method.empty()) cfg.method = parse_method(method);
            cfg.abs_tol = cfg.rel_tol = tol;
            cfg.fixed_step = step;
            auto span = parse_numbers(span_text);
            cfg.start = span[0];
            cfg.end = span[1];
            Trajectory traj = integrate(sys, parse_numbers(ic_text), cfg);
            write_csv(traj, csv);
            if (!svg.empty()) write_svg({traj}, {{"red", ode}}, svg, ode);
            CaseResult c;
            c.label = "integrate:" + ode;
            c.kind = "numerics";
            c.verdict = traj.step_underflow ? CaseVerdict::Fail : CaseVerdict::Pass;
            c.residual = traj.step_underflow ? "step underflow" : "0";
            c.details = {{"method", method_name(cfg.method)},
                         {"samples", traj.size()},
                         {"end", traj.y.back()},
                         {"accepted", traj.accepted},
                         {"rejected", traj.rejected}};
            report.cases.push_back(c);
        }
        return emit(report, out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
