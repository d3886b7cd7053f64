#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liesym/symmetry.hpp"

namespace liesym {

/// Change of variables: new base variables as expressions in the old ones
/// and u = rule(old variables, new dependent). A new variable may reuse an
/// old symbol (e.g. t -> t).
struct Ansatz {
    std::string name;
    const Symbol* old_dependent = nullptr;
    std::vector<std::pair<const Symbol*, Expr>> new_vars;
    const Symbol* new_dependent = nullptr;  // declared over the new variables
    Expr rule;
    std::map<Atom, Expr, AtomLess> inverse;  // old variable -> expression in new variables
    std::vector<Expr> invariants;            // filled by invariants_for: new_vars then the dependent invariant
};

/// Equation in a reduced jet context (lhs = 0).
struct ReducedEquation {
    std::string name;
    Expr lhs;
    const Symbol* dependent = nullptr;
};

/// Zeroth-order invariants of a translation or scaling field.
/// Throws unsupported-field-shape for anything else.
Ansatz invariants_for(const VectorField& X, const std::vector<std::string>& new_names = {},
                      const std::string& dependent_name = "U");

/// Chain-rule pullback of lhs(u jets) under the ansatz.
ReducedEquation pullback(const Expr& lhs, const Ansatz& a);
ReducedEquation pullback(const Pde& pde, const Ansatz& a);

/// a2 applied after a1 (a2's old variables are a1's new ones).
Ansatz compose(const Ansatz& a1, const Ansatz& a2);

enum class Verdict { Exact, ConstantMultiple, UnderSubstitution, Mismatch };
std::string verdict_name(Verdict v);

struct Comparison {
    Verdict verdict = Verdict::Mismatch;
    Rational multiple{1};  // derived == multiple * printed (after substitution when stated)
    Expr residual;          // derived - multiple * printed
};

/// Compares derived with printed; `assumptions` are only used when the
/// direct comparison fails.
Comparison compare_reduced(const Expr& derived, const Expr& printed,
                           const std::map<Atom, Expr, AtomLess>& assumptions = {});

struct FirstIntegralCheck {
    int k = 0;          // differentiations applied to the candidate
    Expr multiplier;    // eq ~ multiplier * D^k(candidate), or (multiplier / scale) when scale != 1
    Expr scale{1};      // applied to eq when the leading-coefficient ratio is not a monomial
    Expr residual;      // reduced modulo the candidate and its derivatives
};

/// eq and candidate are ODEs in `dependent` (one argument).
FirstIntegralCheck check_first_integral(const Expr& eq, const Expr& candidate, const Symbol* dependent);

struct ClosedFormCheck {
    Expr residual;                                   // before constraints
    std::vector<Expr> constraints;                   // coefficients of elementary-function monomials
    std::map<Atom, Expr, AtomLess> solved;           // constraint solutions for requested unknowns
    Expr residual_after;                             // residual with `solved` substituted
};

/// Substitutes dependent = sol (an explicit expression in its arguments)
/// into eq, then solves the constraints for `unknowns` one at a time.
ClosedFormCheck verify_closed_form(const Expr& eq, const Symbol* dependent, const Expr& sol,
                                   const std::vector<Atom>& unknowns = {});

}  // namespace liesym
