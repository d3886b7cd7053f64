#include "liesym/cases.hpp"

#include "liesym/error.hpp"
#include "liesym/reduction.hpp"

namespace liesym {

namespace {

using J = nlohmann::ordered_json;

std::string field_text(const VectorField& f) { return to_string(f); }

std::vector<VectorField> fields_of(const Model& m, const std::vector<std::string>& names) {
    std::vector<VectorField> out;
    for (const auto& n : names) out.push_back(m.field(n));
    return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

}  // namespace

CaseResult symmetry_case(const Model& m, const std::string& field, const std::string& pde) {
    CaseResult r;
    r.label = "symmetry:" + field + "@" + pde;
    r.kind = "symmetry";
    const VectorField& f = m.field(field);
    Pde p = m.pde(pde);
    Expr res = check_symmetry(f, p);
    r.residual = to_string(res);
    r.verdict = res.is_zero() ? CaseVerdict::Pass : CaseVerdict::Fail;
    r.details = {{"field", field}, {"generator", field_text(f)}, {"equation", pde}, {"leading", to_string(p.leading)}};
    return r;
}

CaseResult commutator_case(const Model& m, const std::vector<std::string>& fields) {
    CaseResult r;
    r.label = "commutators:" + join(fields, ",");
    r.kind = "commutator";
    auto basis = fields_of(m, fields);
    J rows = J::array();
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            VectorField c = commutator(basis[i], basis[j]);
            auto coef = decompose(c, basis);
            rows.push_back({{"pair", "[" + fields[i] + "," + fields[j] + "]"},
                            {"value", field_text(c)},
                            {"combination", coef ? combination_text(*coef, basis) : ""}});
        }
    r.details = {{"fields", fields}, {"commutators", rows}};
    return r;
}

CaseResult closure_case(const Model& m, const std::vector<std::string>& fields) {
    CaseResult r;
    r.label = "closure:" + join(fields, ",");
    r.kind = "closure";
    auto basis = fields_of(m, fields);
    ClosureReport cr = closure_table(basis);
    J table = J::array();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        J row = J::array();
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const auto& e = cr.at(i, j);
            row.push_back(e.coefficients ? combination_text(*e.coefficients, basis) : "not-closed: " + field_text(e.value));
        }
        table.push_back(row);
    }
    J wit = J::array();
    for (auto [i, j] : cr.witnesses) wit.push_back({{"pair", "[" + fields[i] + "," + fields[j] + "]"}, {"value", field_text(cr.at(i, j).value)}});
    r.verdict = cr.closed() ? CaseVerdict::Pass : CaseVerdict::Fail;
    r.residual = cr.closed() ? "0" : std::to_string(cr.witnesses.size()) + " non-constant commutators";
    r.details = {{"fields", fields}, {"closed", cr.closed()}, {"table", table}, {"witnesses", wit}};
    return r;
}

CaseResult determining_case(const Model& m, const std::string& pde, const std::string& generic_field) {
    CaseResult r;
    r.label = "determining:" + pde;
    r.kind = "determining";
    Pde p = m.pde(pde);
    DeterminingSystem ds = determining_equations(p);
    J eqs = J::array();
    for (const auto& e : ds.equations) eqs.push_back(to_string(e));
    r.details = {{"equation", pde}, {"count", ds.equations.size()}, {"equations", eqs}};
    if (generic_field.empty()) return r;

    const VectorField& g = m.field(generic_field);
    std::size_t survivors = 0;
    J left = J::array();
    for (const auto& e : ds.equations) {
        Expr s = e;
        for (std::size_t k = 0; k < ds.unknowns.size(); ++k)
            s = substitute_function(s, ds.unknowns[k], k < g.xi.size() ? g.xi[k] : g.eta);
        if (!s.is_zero()) {
            ++survivors;
            left.push_back(to_string(s));
        }
    }
    // xi of the first independent, differentiated once by the dependent.
    const Symbol* xi0 = ds.unknowns.front();
    std::vector<int> du(xi0->args.size(), 0);
    du.back() = 1;
    Atom target = function_atom(xi0, du);
    bool found = false;
    for (const auto& e : ds.equations)
        if (e.is_monomial() && e.terms()[0].mono.size() == 1 && e.terms()[0].mono[0].first == target &&
            e.terms()[0].mono[0].second.is_one())
            found = true;
    r.details["generic"] = generic_field;
    r.details["not_annihilated"] = left;
    r.details["contains_" + to_string(target) + "=0"] = found;
    r.verdict = survivors == 0 && found ? CaseVerdict::Pass : CaseVerdict::Fail;
    r.residual = survivors == 0 ? "0" : std::to_string(survivors) + " equations not annihilated";
    return r;
}

CaseResult reduce_case(const Model& m, const std::string& pde, const std::string& ansatz, const std::string& printed) {
    CaseResult r;
    r.label = "reduce:" + pde + "/" + ansatz;
    r.kind = "reduction";
    ReducedEquation red;
    try {
        red = pullback(m.pde(pde), m.ansatz(ansatz));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::ResidualOldVariable && e.kind() != ErrorKind::Domain) throw;
        r.verdict = CaseVerdict::Unsupported;
        r.residual = e.detail();
        r.details = {{"equation", pde}, {"ansatz", ansatz}, {"error", e.what()}};
        return r;
    }
    r.details = {{"equation", pde}, {"ansatz", ansatz}, {"derived", to_string(red.lhs)}};
    if (printed.empty()) return r;
    const Equation& pe = m.equation(printed);
    Comparison c = compare_reduced(red.lhs, pe.lhs, pe.assumptions);
    r.details["printed"] = to_string(pe.lhs);
    r.details["comparison"] = verdict_name(c.verdict);
    r.details["multiple"] = c.multiple.str();
    std::string note = verdict_name(c.verdict);
    if (c.verdict == Verdict::UnderSubstitution) {
        std::vector<std::string> subs;
        for (const auto& [a, v] : pe.assumptions) subs.push_back(to_string(a) + " = " + to_string(v));
        note += " (" + join(subs, ", ") + ")";
    }
    if (!c.multiple.is_one()) note += ", multiple " + c.multiple.str();
    r.residual = to_string(c.residual);
    r.verdict = c.verdict == Verdict::Mismatch ? CaseVerdict::MismatchRecorded : CaseVerdict::Pass;
    r.ledger.push_back({r.label, to_string(pe.lhs), to_string(red.lhs), r.residual, note});
    return r;
}

CaseResult first_integral_case(const Model& m, const std::string& eq, const std::string& candidate) {
    CaseResult r;
    r.label = "first-integral:" + candidate + "->" + eq;
    r.kind = "first-integral";
    const Equation& e = m.equation(eq);
    const Equation& c = m.equation(candidate);
    if (e.dependent != c.dependent)
        throw Error(ErrorKind::Declaration, "'" + eq + "' and '" + candidate + "' use different dependent variables");
    std::map<Atom, Expr, AtomLess> assumptions = e.assumptions;
    assumptions.insert(c.assumptions.begin(), c.assumptions.end());
    Expr lhs = substitute(e.lhs, assumptions);
    Expr cand = substitute(c.lhs, assumptions);
    FirstIntegralCheck fc = check_first_integral(lhs, cand, e.dependent);
    r.residual = to_string(fc.residual);
    J assumed = J::array();
    for (const auto& [a, v] : assumptions) assumed.push_back(to_string(a) + " = " + to_string(v));
    r.details = {{"equation", to_string(lhs)},
                 {"candidate", to_string(cand)},
                 {"assumptions", assumed},
                 {"differentiations", fc.k},
                 {"multiplier", to_string(fc.multiplier)},
                 {"scale", to_string(fc.scale)}};
    if (fc.residual.is_zero()) return r;
    r.verdict = CaseVerdict::MismatchRecorded;
    r.ledger.push_back({r.label, to_string(lhs), to_string(cand), r.residual,
                        "residual of the " + std::to_string(fc.k) + "-fold derivative of the candidate against the equation"});
    return r;
}

CaseResult solution_case(const Model& m, const std::string& eq, const std::string& solution) {
    CaseResult r;
    r.label = "solution:" + solution + "@" + eq;
    r.kind = "solution";
    const Equation& e = m.equation(eq);
    const SolutionSpec& s = m.solution(solution);
    if (s.dependent != e.dependent)
        throw Error(ErrorKind::Declaration, "solution '" + solution + "' does not solve for the dependent of '" + eq + "'");
    std::vector<Atom> unknowns;
    for (const auto& name : s.solve) unknowns.push_back(symbol_atom(get_symbol(name)));
    ClosedFormCheck cf = verify_closed_form(e.lhs, e.dependent, s.value, unknowns);
    Expr final_residual = unknowns.empty() ? cf.residual : cf.residual_after;
    J fvals = J::array();
    for (const auto& [f, v] : s.function_values) {
        final_residual = substitute_function(final_residual, f, v);
        fvals.push_back(f->name + " = " + to_string(v));
    }
    J cons = J::array();
    for (const auto& c : cf.constraints) cons.push_back(to_string(c));
    J solved = J::object();
    for (const auto& [a, v] : cf.solved) solved[to_string(a)] = to_string(v);
    r.details = {{"value", to_string(s.value)},
                 {"residual_before", to_string(cf.residual)},
                 {"constraints", cons},
                 {"solved", solved},
                 {"function_values", fvals}};
    r.residual = to_string(final_residual);
    r.verdict = final_residual.is_zero() ? CaseVerdict::Pass : CaseVerdict::Fail;
    return r;
}

}  // namespace liesym
