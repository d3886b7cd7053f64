#pragma once

#include <string>
#include <vector>

#include "liesym/expr.hpp"

namespace liesym {

/// Total derivative D_i: explicit dependence on `var` plus the chain rule
/// through every jet variable and every function argument that is itself a
/// dependent variable.
Expr total_derivative(const Expr& e, const Symbol* var);
/// Applies D in sequence, one variable per entry.
Expr total_derivative(const Expr& e, const std::vector<const Symbol*>& vars);

/// Jet variable of `dependent` for a list of differentiation variables, e.g. {x, x} -> u_xx.
Atom jet_of(const Symbol* dependent, const std::vector<const Symbol*>& vars);

/// Highest jet order of `dependent` present in e (0 if only u itself, -1 if absent).
int jet_order(const Expr& e, const Symbol* dependent);

/// lhs = 0 solved linearly for its leading derivative:
/// lhs == leading_coef * (leading - leading_rhs).
struct Pde {
    std::string name;
    Expr lhs;
    const Symbol* dependent = nullptr;
    Atom leading = nullptr;
    Expr leading_coef;
    Expr leading_rhs;

    int order() const { return leading->order(); }
    const std::vector<const Symbol*>& independents() const { return dependent->args; }
};

/// Builds a Pde from an expanded (or nested, already normalized) lhs. The
/// leading derivative is the highest-order jet, ties going to the one latest
/// in atom order. Its coefficient must be a single monomial.
Pde make_pde(const Expr& lhs, const Symbol* dependent, std::string name = {});

/// Replaces the leading derivative by its solved form.
Expr on_manifold(const Expr& e, const Pde& pde);

}  // namespace liesym
