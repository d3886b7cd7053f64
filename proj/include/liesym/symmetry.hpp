#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liesym/jet.hpp"

namespace liesym {

/// Point vector field  sum_i xi[i] d/dz_i + eta d/du  on (z_1..z_m, u).
struct VectorField {
    std::string name;
    const Symbol* dependent = nullptr;  // coordinates are dependent->args plus the dependent itself
    std::vector<Expr> xi;               // one per dependent->args entry
    Expr eta;

    const std::vector<const Symbol*>& independents() const { return dependent->args; }
    bool is_zero() const;
    friend bool operator==(const VectorField&, const VectorField&) = default;
};

VectorField zero_field(const Symbol* dependent, std::string name = {});
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Expr& c, const VectorField& a);
VectorField substitute(const VectorField& f, const std::map<Atom, Expr, AtomLess>& repl);
VectorField substitute_function(const VectorField& f, const Symbol* fn, const Expr& replacement);
std::string to_string(const VectorField& f);

/// Which index is peeled off when building eta^[J] from eta^[J - e_i].
enum class PeelRule { Last, First };

struct ProlongedField {
    VectorField base;
    int order = 0;
    std::map<std::vector<int>, Expr> eta_ext;  // keyed by multi-index, 1 <= |J| <= order
};

/// Prolongation up to `order` (at most 3).
ProlongedField prolong(const VectorField& X, int order, PeelRule rule = PeelRule::Last);

/// Action of the prolonged field on a jet expression of order <= PX.order.
Expr apply(const ProlongedField& PX, const Expr& e);

/// Action of a field as a first-order operator on functions of (z, u).
Expr apply_point(const VectorField& X, const Expr& e);

/// on_manifold(apply(prolong(X, order), lhs)); zero iff X is a symmetry.
Expr check_symmetry(const VectorField& X, const Pde& pde);

struct DeterminingSystem {
    std::vector<const Symbol*> unknowns;  // xi_<var>..., eta as opaque functions of (z, u)
    std::vector<Expr> equations;
};

/// Symmetry condition for a generic field, split by jet monomials of order >= 1.
DeterminingSystem determining_equations(const Pde& pde);

/// [X, Y]^k = X(Y^k) - Y(X^k).
VectorField commutator(const VectorField& X, const VectorField& Y);

/// Coefficients c with target = sum c_k basis_k, constants free of coordinates
/// and of opaque functions. Empty when no such combination exists.
std::optional<std::vector<Expr>> decompose(const VectorField& target, const std::vector<VectorField>& basis);

struct ClosureEntry {
    std::size_t row = 0, col = 0;
    VectorField value;
    std::optional<std::vector<Expr>> coefficients;
};

struct ClosureReport {
    std::vector<VectorField> basis;
    std::vector<ClosureEntry> table;  // row-major, all ordered pairs
    std::vector<std::pair<std::size_t, std::size_t>> witnesses;  // row < col pairs that failed

    bool closed() const { return witnesses.empty(); }
    const ClosureEntry& at(std::size_t r, std::size_t c) const { return table[r * basis.size() + c]; }
};

ClosureReport closure_table(const std::vector<VectorField>& fields);

/// Combination text such as "2*X1 - 1/2*X3"; "0" for all-zero coefficients.
std::string combination_text(const std::vector<Expr>& coefficients, const std::vector<VectorField>& basis);

}  // namespace liesym
