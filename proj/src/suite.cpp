#include "liesym/suite.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <future>
#include <sstream>
#include <thread>

#include "liesym/cases.hpp"
#include "liesym/error.hpp"
#include "liesym/reduction.hpp"

namespace liesym {

namespace {

using J = nlohmann::ordered_json;
using Term = std::pair<std::string, std::string>;  // coefficient text, field name

struct SymmetryCheck {
    std::string field, pde;
    enum { Zero, Residual, Printed } expect = Zero;
    std::string residual;  // expected text for Residual
};

const std::vector<SymmetryCheck> kSymmetries{
    {"time-shift", "cc"},
    {"cc-scaling", "cc"},
    {"x-shift-phi", "cc"},
    {"y-boost-psi", "cc"},
    {"x-shift", "cc"},
    {"y-shift", "cc"},
    {"x-shift-exp", "cc"},
    {"y-boost-exp", "cc"},
    {"y-boost-linear", "cc"},
    {"cc-generic", "cc"},
    {"y-boost-exp-printed", "cc", SymmetryCheck::Printed},
    {"du-field", "cc", SymmetryCheck::Residual, "-D(u;x,x)"},
    {"time-shift", "gcc-alpha0"},
    {"gcc-scaling", "gcc-alpha0"},
    {"x-shift", "gcc-alpha0"},
    {"y-shift", "gcc-alpha0"},
    {"y-boost-gcc", "gcc-alpha0"},
    {"time-shift", "gcc"},
    {"gcc-scaling-drift", "gcc"},
    {"x-shift", "gcc"},
    {"y-shift", "gcc"},
    {"y-boost-gcc", "gcc"},
    {"wave-time-shift", "wave-printed"},
    {"wave-scaling", "wave-printed"},
    {"wave-projective", "wave-printed"},
    {"wave-shift-phi", "wave-printed"},
    {"wave-time-shift", "gcc-wave-unit"},
    {"wave-shift", "gcc-wave-unit"},
    {"gcc-wave-scaling", "gcc-wave-unit"},
    {"wave-time-shift", "gcc-wave-printed"},
    {"wave-shift", "gcc-wave-printed"},
    {"gcc-wave-scaling-mirror", "gcc-wave-printed"},
    {"gcc-wave-scaling-printed", "gcc-wave-unit", SymmetryCheck::Printed},
    {"gcc-wave-scaling-printed", "gcc-wave-printed", SymmetryCheck::Printed},
};

struct Relation {
    std::string label, a, b;
    std::vector<Term> expected;  // empty: zero field
};

const std::vector<Relation> kRelations{
    {"relation:[time-shift,cc-scaling]", "time-shift", "cc-scaling", {{"2", "time-shift"}}},
    {"relation:[time-shift,x-shift-phi]", "time-shift", "x-shift-phi", {{"1", "x-shift-dphi"}}},
    {"relation:[time-shift,y-boost-psi]", "time-shift", "y-boost-psi", {{"1", "y-boost-dpsi"}}},
    {"relation:[cc-scaling,x-shift-phi]", "cc-scaling", "x-shift-phi", {{"1", "x-shift-phi-rescaled"}}},
    {"relation:[cc-scaling,y-boost-psi]", "cc-scaling", "y-boost-psi", {{"1", "y-boost-psi-rescaled"}}},
    {"relation:[x-shift-phi,y-boost-psi]", "x-shift-phi", "y-boost-psi", {}},
    {"relation:[x-shift-phi,x-shift-chi]", "x-shift-phi", "x-shift-chi", {}},
    {"relation:[y-boost-psi,y-boost-chi]", "y-boost-psi", "y-boost-chi", {{"1", "x-shift-wronskian"}}},
    {"relation:[time-shift,x-shift]", "time-shift", "x-shift", {}},
    {"relation:[time-shift,y-shift]", "time-shift", "y-shift", {}},
    {"relation:[cc-scaling,x-shift]", "cc-scaling", "x-shift", {{"1", "x-shift"}}},
    {"relation:[cc-scaling,y-shift]", "cc-scaling", "y-shift", {{"3/2", "x-shift"}}},
    {"relation:[x-shift,y-shift]", "x-shift", "y-shift", {}},
    {"relation:[time-shift,x-shift-exp]", "time-shift", "x-shift-exp", {{"omega1", "x-shift-exp"}}},
    {"relation:[time-shift,y-boost-exp]", "time-shift", "y-boost-exp", {{"omega2", "y-boost-exp"}}},
    {"relation:[time-shift,y-boost-exp-printed]", "time-shift", "y-boost-exp-printed", {{"omega2", "y-boost-exp-printed"}}},
    {"relation:[cc-scaling,x-shift-exp]", "cc-scaling", "x-shift-exp", {{"1", "x-shift-exp-rescaled"}}},
    {"relation:[cc-scaling,y-boost-exp]", "cc-scaling", "y-boost-exp", {{"1", "y-boost-exp-rescaled"}}},
    {"relation:[x-shift,x-shift-exp]", "x-shift", "x-shift-exp", {}},
    {"relation:[x-shift,y-boost-exp]", "x-shift", "y-boost-exp", {}},
    {"relation:[y-shift,y-boost-exp]", "y-shift", "y-boost-exp", {{"1", "y-shift-exp-bracket"}}},
};

struct Table {
    std::string name;
    std::vector<std::string> basis;
    std::vector<std::vector<std::vector<Term>>> printed;  // [row][col] -> combination
};

const std::vector<Table> kTables{
    {"cc-finite-table",
     {"time-shift", "cc-scaling", "x-shift", "y-shift"},
     {{{}, {{"2", "time-shift"}}, {}, {}},
      {{{"2", "time-shift"}}, {}, {{"1", "x-shift"}}, {{"3/2", "x-shift"}}},
      {{}, {{"-1", "x-shift"}}, {}, {}},
      {{}, {{"-3/2", "x-shift"}}, {}, {}}}},
    {"gcc-table",
     {"time-shift", "gcc-scaling-drift", "x-shift", "y-shift", "y-boost-gcc"},
     {{{}, {{"2", "time-shift"}, {"alpha", "x-shift"}}, {}, {}, {{"2", "y-shift"}}},
      {{{"-2", "time-shift"}, {"-alpha", "x-shift"}}, {}, {{"-1", "x-shift"}}, {{"-3/2", "y-shift"}}, {{"1/2", "y-boost-gcc"}}},
      {{}, {{"1", "x-shift"}}, {}, {}, {}},
      {{}, {{"3/2", "y-shift"}}, {}, {}, {{"-1", "x-shift"}}},
      {{{"-2", "y-shift"}}, {{"-1/2", "y-boost-gcc"}}, {}, {{"1", "x-shift"}}, {}}}},
};

struct Closure {
    std::vector<std::string> fields;
    bool expect_closed;
};

const std::vector<Closure> kClosures{
    {{"time-shift", "cc-scaling", "x-shift", "y-shift", "y-boost-linear"}, true},
    {{"time-shift", "cc-scaling", "x-shift", "y-shift", "x-shift-exp", "y-boost-exp"}, false},
    {{"time-shift", "gcc-scaling", "x-shift", "y-shift", "y-boost-gcc"}, true},
    {{"time-shift", "gcc-scaling-drift", "x-shift", "y-shift", "y-boost-gcc"}, true},
    {{"wave-time-shift", "wave-scaling", "wave-projective"}, true},
};

struct Reduction {
    std::string pde, ansatz, oracle, printed;
};

const std::vector<Reduction> kReductions{
    {"cc", "diagonal-wave", "wave-derived", "wave-printed"},
    {"gcc", "gcc-diagonal-wave", "gcc-wave-derived", "gcc-wave-printed"},
    {"wave-printed", "wave-stationary", "stationary-derived", "stationary-printed"},
    {"wave-printed", "wave-similarity", "similarity-derived", "similarity-printed"},
    {"wave-printed", "wave-projective-reduction", "projective-derived", ""},
    {"gcc-wave-unit", "gcc-travel", "gcc-travel-derived", "gcc-travel-printed"},
    {"gcc-wave-unit", "gcc-scaling-reduction", "scaling-derived", "scaling-printed"},
};

const std::vector<std::pair<std::string, std::string>> kFirstIntegrals{
    {"stationary-printed", "stationary-integral"},
    {"stationary-derived", "stationary-integral"},
    {"stationary-integral", "stationary-integral-second"},
    {"similarity-printed", "similarity-integral"},
    {"similarity-derived", "similarity-integral"},
    {"similarity-integral", "similarity-integral-second"},
    {"similarity-derived", "similarity-integral-derived"},
    {"similarity-integral-derived", "similarity-integral-second"},
    {"projective-derived", "projective-integral"},
    {"gcc-travel-printed", "gcc-travel-integral"},
    {"gcc-travel-derived", "gcc-travel-integral"},
    {"gcc-travel-derived", "gcc-travel-integral-derived"},
    {"gcc-travel-printed", "gcc-travel-integral-matched"},
    {"scaling-printed", "scaling-integral"},
    {"scaling-derived", "scaling-integral"},
    {"scaling-printed", "scaling-integral-regrouped"},
    {"scaling-derived", "scaling-integral-regrouped"},
    {"scaling-derived", "scaling-integral-derived"},
};

const std::vector<std::pair<std::string, std::string>> kSolutions{
    {"wave-printed", "wave-linear"},
    {"stationary-integral-homogeneous", "stationary-kink"},
    {"cc", "cc-constant"},
};

bool same_components(const VectorField& a, const VectorField& b) { return a.xi == b.xi && a.eta == b.eta; }

VectorField combination(const Model& m, const std::vector<Term>& terms, const Symbol* dependent) {
    VectorField out = zero_field(dependent);
    for (const auto& [coef, field] : terms) out = out + build_expr(*parse_expression(coef)) * m.field(field);
    return out;
}

std::string combination_label(const std::vector<Term>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    for (const auto& [coef, field] : terms) {
        if (!out.empty()) out += coef[0] == '-' ? " - " : " + ";
        std::string c = coef[0] == '-' && !out.empty() ? coef.substr(1) : coef;
        out += (c == "1" ? "" : c == "-1" ? "-" : c + "*") + field;
    }
    return out;
}

/// Text of `value` as a combination of `names` when possible.
std::string describe(const Model& m, const VectorField& value, const std::vector<std::string>& names) {
    if (value.is_zero()) return "0";
    std::vector<VectorField> basis;
    std::vector<std::string> unique;
    for (const auto& n : names)
        if (std::find(unique.begin(), unique.end(), n) == unique.end()) {
            unique.push_back(n);
            basis.push_back(m.field(n));
        }
    try {
        if (auto c = decompose(value, basis)) return combination_text(*c, basis);
    } catch (const Error&) {
    }
    return to_string(value);
}

CaseResult compare_commutator(const Model& m, const std::string& label, const std::string& a, const std::string& b,
                              const std::vector<Term>& expected, const std::string& printed_text) {
    CaseResult r;
    r.label = label;
    r.kind = "commutator";
    VectorField value = commutator(m.field(a), m.field(b));
    VectorField want = combination(m, expected, value.dependent);
    std::vector<std::string> names{a, b};
    for (const auto& t : expected) names.push_back(t.second);
    std::string derived = describe(m, value, names);
    r.details = {{"pair", "[" + a + "," + b + "]"}, {"computed", derived}, {"printed", printed_text}, {"value", to_string(value)}};
    if (same_components(value, want)) return r;
    VectorField diff = value - want;
    r.residual = to_string(diff);
    r.verdict = CaseVerdict::MismatchRecorded;
    std::string note = same_components(value, zero_field(value.dependent) - want) ? "opposite sign" : "different field";
    r.ledger.push_back({label, printed_text, derived, r.residual, note});
    return r;
}

CaseResult symmetry_expectation(const Model& m, const SymmetryCheck& s) {
    CaseResult r = symmetry_case(m, s.field, s.pde);
    if (s.expect == SymmetryCheck::Residual) {
        r.label = "non-symmetry:" + s.field + "@" + s.pde;
        r.details["expected_residual"] = s.residual;
        r.verdict = r.residual == s.residual ? CaseVerdict::Pass : CaseVerdict::Fail;
    } else if (s.expect == SymmetryCheck::Printed && r.verdict == CaseVerdict::Fail) {
        r.verdict = CaseVerdict::MismatchRecorded;
        r.ledger.push_back({r.label, to_string(m.field(s.field)), "not a symmetry of " + s.pde, r.residual,
                            "printed generator leaves a nonzero residual"});
    }
    return r;
}

CaseResult oracle_case(const Model& m, const Reduction& red) {
    CaseResult r;
    r.label = "reduce-oracle:" + red.pde + "/" + red.ansatz;
    r.kind = "reduction";
    Expr got = pullback(m.pde(red.pde), m.ansatz(red.ansatz)).lhs;
    Expr want = m.equation(red.oracle).lhs;
    r.residual = to_string(got - want);
    r.verdict = got == want ? CaseVerdict::Pass : CaseVerdict::Fail;
    r.details = {{"derived", to_string(got)}, {"oracle", red.oracle}};
    return r;
}

CaseResult chain_case(const Model& m) {
    CaseResult r;
    r.label = "reduce-chain:cc/diagonal-wave/wave-travel";
    r.kind = "reduction";
    const Ansatz& first = m.ansatz("diagonal-wave");
    const Ansatz& second = m.ansatz("wave-travel");
    ReducedEquation mid = pullback(m.pde("cc"), first);
    Expr stepwise = pullback(make_pde(mid.lhs, mid.dependent), second).lhs;
    Expr composed = pullback(m.pde("cc"), compose(first, second)).lhs;
    Expr direct = pullback(m.pde("cc"), m.ansatz("direct-travel")).lhs;
    r.details = {{"direct_ansatz", "direct-travel"},
                 {"stepwise", to_string(stepwise)},
                 {"composed", to_string(composed)},
                 {"direct", to_string(direct)}};
    r.residual = to_string(stepwise - direct);
    r.verdict = stepwise == composed && composed == direct ? CaseVerdict::Pass : CaseVerdict::Fail;
    return r;
}

CaseResult invariants_case(const std::string& label, const VectorField& field, const std::vector<std::string>& names,
                           const std::string& dependent) {
    CaseResult r;
    r.label = label;
    r.kind = "invariants";
    try {
        Ansatz a = invariants_for(field, names, dependent);
        J inv = J::array();
        bool ok = true;
        for (const auto& e : a.invariants) {
            inv.push_back(to_string(e));
            if (!apply_point(field, e).is_zero()) ok = false;
        }
        r.details = {{"field", to_string(field)}, {"invariants", inv}};
        r.verdict = ok ? CaseVerdict::Pass : CaseVerdict::Fail;
        if (!ok) r.residual = "an invariant is not annihilated";
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::UnsupportedFieldShape) throw;
        r.verdict = CaseVerdict::Unsupported;
        r.residual = "0";
        r.details = {{"field", to_string(field)}, {"error", e.what()}};
    }
    return r;
}

CaseResult printed_scaling_ansatz_case(const Model& m) {
    CaseResult r = reduce_case(m, "gcc-wave-unit", "gcc-scaling-reduction-printed");
    if (r.verdict == CaseVerdict::Unsupported)
        r.ledger.push_back({r.label, "zeta = (w + (1 + alpha)*t)*t^(-1/2)", "zeta = (w - (1 + alpha)*t)*t^(-1/2)", r.residual,
                            "the printed similarity variable is not invariant under the drift field; t survives the pullback"});
    return r;
}

}  // namespace

ProfileSet run_profiles(const Model& m, const std::string& grouping) {
    if (grouping != "default" && grouping != "regrouped")
        throw Error(ErrorKind::Syntax, "grouping must be 'default' or 'regrouped', got '" + grouping + "'");
    ProfileSet set;
    set.grouping = grouping;
    std::string prefix = grouping == "default" ? "fig1-n" : "fig1-regrouped-n";
    for (int n : {2, 3, 5}) {
        ProfileRun pr = run_twice(m, prefix + std::to_string(n));
        pr.n = n;
        set.runs.push_back(std::move(pr));
    }
    return set;
}

ProfileRun run_twice(const Model& m, const std::string& run) {
    const RunSpec& spec = m.run(run);
    const Equation& eq = m.equation(spec.ode);
    OdeSystem sys = compile_rhs(eq.lhs, eq.dependent, spec.parameters);
    ProfileRun pr;
    pr.run = spec.name;
    IntegratorConfig adaptive = spec.config;
    adaptive.method = Method::AdaptiveRK45;
    pr.adaptive = integrate(sys, spec.ic, adaptive);
    IntegratorConfig fixed = spec.config;
    fixed.method = Method::FixedRK4;
    fixed.fixed_step = 1e-4;
    pr.fixed = integrate(sys, spec.ic, fixed);
    if (!spec.columns.empty()) pr.adaptive.names = pr.fixed.names = spec.columns;
    for (std::size_t k = 0; k < sys.dimension; ++k)
        pr.max_endpoint_gap = std::max(pr.max_endpoint_gap, std::abs(pr.adaptive.y.back()[k] - pr.fixed.y.back()[k]));
    return pr;
}

std::vector<std::string> write_profiles(const ProfileSet& set, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> paths;
    std::vector<Trajectory> trajs;
    std::vector<CurveStyle> styles;
    const char* colors[] = {"red", "blue", "gold"};
    std::string stem = set.grouping == "default" ? "fig1" : "fig1_regrouped";
    for (std::size_t i = 0; i < set.runs.size(); ++i) {
        const auto& r = set.runs[i];
        std::string path = dir + "/" + stem + "_n" + std::to_string(static_cast<int>(r.n)) + ".csv";
        write_csv(r.adaptive, path);
        paths.push_back(path);
        trajs.push_back(r.adaptive);
        styles.push_back({colors[i % 3], "n=" + std::to_string(static_cast<int>(r.n))});
    }
    std::string caption = set.grouping == "default" ? "H(zeta), H(0)=1, H'(0)=-0.5, H1=0, grouping (H^n - (zeta/2)*H)*H'"
                                                    : "H(zeta), H(0)=1, H'(0)=-0.5, H1=0, grouping (H^n - zeta/2)*H*H'";
    std::string svg = dir + "/" + stem + ".svg";
    write_svg(trajs, styles, svg, caption);
    paths.push_back(svg);
    return paths;
}

double rk4_convergence_ratio(double h) {
    RhsFunction f = [](double, const double* y, double* dy) { dy[0] = y[0]; };
    IntegratorConfig c;
    c.method = Method::FixedRK4;
    c.start = 0;
    c.end = 1;
    c.fixed_step = h;
    double e1 = std::abs(integrate(f, 1, {1.0}, c).y.back()[0] - std::exp(1.0));
    c.fixed_step = h / 2;
    double e2 = std::abs(integrate(f, 1, {1.0}, c).y.back()[0] - std::exp(1.0));
    return e1 / e2;
}

std::vector<CaseResult> profile_cases(const ProfileSet& set) {
    std::vector<CaseResult> out;
    for (const auto& pr : set.runs) {
        CaseResult r;
        r.label = "numerics:" + pr.run;
        r.kind = "numerics";
        const auto& a = pr.adaptive.y.back();
        const auto& f = pr.fixed.y.back();
        r.details = {{"grouping", set.grouping},
                     {"n", pr.n},
                     {"span", {pr.adaptive.config.start, pr.adaptive.config.end}},
                     {"adaptive_end", a},
                     {"fixed_end", f},
                     {"accepted", pr.adaptive.accepted},
                     {"rejected", pr.adaptive.rejected},
                     {"tolerance", 1e-6}};
        bool ok = pr.max_endpoint_gap <= 1e-6 && !pr.adaptive.step_underflow;
        std::ostringstream gap;
        gap << pr.max_endpoint_gap;
        r.residual = ok ? "0" : gap.str();
        r.verdict = ok ? CaseVerdict::Pass : CaseVerdict::Fail;
        out.push_back(std::move(r));
    }
    return out;
}

Report run_paper_suite(bool parallel) {
    const Model& m = builtin_model();
    struct Job {
        std::string name;
        std::function<std::vector<CaseResult>()> run;
    };
    std::vector<Job> jobs;
    auto one = [&jobs](std::string name, std::function<CaseResult()> f) {
        jobs.push_back({std::move(name), [f] { return std::vector<CaseResult>{f()}; }});
    };

    for (const auto& s : kSymmetries) one(s.field + "@" + s.pde, [&m, s] { return symmetry_expectation(m, s); });
    for (const auto& rel : kRelations)
        one(rel.label, [&m, rel] { return compare_commutator(m, rel.label, rel.a, rel.b, rel.expected, combination_label(rel.expected)); });
    for (const auto& t : kTables)
        for (std::size_t i = 0; i < t.basis.size(); ++i)
            for (std::size_t j = 0; j < t.basis.size(); ++j) {
                std::string label = t.name + ":[" + t.basis[i] + "," + t.basis[j] + "]";
                one(label, [&m, t, i, j, label] {
                    return compare_commutator(m, label, t.basis[i], t.basis[j], t.printed[i][j], combination_label(t.printed[i][j]));
                });
            }
    for (const auto& c : kClosures)
        one("closure", [&m, c] {
            CaseResult r = closure_case(m, c.fields);
            r.details["expected_closed"] = c.expect_closed;
            bool closed = r.details["closed"].get<bool>();
            r.verdict = closed == c.expect_closed ? CaseVerdict::Pass : CaseVerdict::Fail;
            if (!c.expect_closed && r.details["witnesses"].empty()) r.verdict = CaseVerdict::Fail;
            if (!c.expect_closed && r.verdict == CaseVerdict::Pass) r.residual = "0";
            return r;
        });
    one("determining:cc", [&m] { return determining_case(m, "cc", "cc-generic"); });
    for (const auto& red : kReductions) {
        one("reduce-oracle:" + red.ansatz, [&m, red] { return oracle_case(m, red); });
        if (!red.printed.empty())
            one("reduce:" + red.ansatz, [&m, red] { return reduce_case(m, red.pde, red.ansatz, red.printed); });
    }
    one("reduce-chain", [&m] { return chain_case(m); });
    one("reduce:printed-scaling", [&m] { return printed_scaling_ansatz_case(m); });
    one("invariants:x-shift", [&m] { return invariants_case("invariants:x-shift", m.field("x-shift"), {}, "Uty"); });
    one("invariants:x-shift+y-shift", [&m] {
        return invariants_case("invariants:x-shift+y-shift", m.field("x-shift") + m.field("y-shift"), {"w"}, "U");
    });
    one("invariants:wave-scaling",
        [&m] { return invariants_case("invariants:wave-scaling", m.field("wave-scaling"), {"sigma"}, "Yb"); });
    one("invariants:wave-projective",
        [&m] { return invariants_case("invariants:wave-projective", m.field("wave-projective"), {"lam"}, "Yl"); });
    for (const auto& [eq, cand] : kFirstIntegrals)
        one(cand + "->" + eq, [&m, eq = eq, cand = cand] { return first_integral_case(m, eq, cand); });
    for (const auto& [eq, sol] : kSolutions) one(sol + "@" + eq, [&m, eq = eq, sol = sol] { return solution_case(m, eq, sol); });
    jobs.push_back({"numerics:riccati", [&m] {
        ProfileSet one_run{"none", {run_twice(m, "riccati")}};
        return profile_cases(one_run);
    }});
    for (std::string grouping : {"default", "regrouped"})
        jobs.push_back({"numerics:" + grouping, [&m, grouping] { return profile_cases(run_profiles(m, grouping)); }});
    one("numerics:rk4-convergence", [] {
        CaseResult r;
        r.label = "numerics:rk4-convergence";
        r.kind = "numerics";
        double ratio = rk4_convergence_ratio();
        r.details = {{"ratio", ratio}, {"bounds", {12, 20}}};
        r.verdict = ratio >= 12 && ratio <= 20 ? CaseVerdict::Pass : CaseVerdict::Fail;
        return r;
    });

    std::vector<std::vector<CaseResult>> results(jobs.size());
    auto run_job = [&jobs, &results](std::size_t k) {
        try {
            results[k] = jobs[k].run();
        } catch (const std::exception& e) {
            CaseResult r;
            r.label = "error:" + jobs[k].name;
            r.kind = "error";
            r.verdict = CaseVerdict::Fail;
            r.residual = e.what();
            results[k] = {r};
        }
    };
    if (parallel) {
        std::atomic<std::size_t> next{0};
        unsigned workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
        std::vector<std::future<void>> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.push_back(std::async(std::launch::async, [&] {
                for (std::size_t k = next++; k < jobs.size(); k = next++) run_job(k);
            }));
        for (auto& f : pool) f.get();
    } else {
        for (std::size_t k = 0; k < jobs.size(); ++k) run_job(k);
    }
    Report report;
    report.command = "paper-suite";
    for (auto& rs : results)
        for (auto& c : rs) report.cases.push_back(std::move(c));
    report.sort();
    return report;
}

}  // namespace liesym
