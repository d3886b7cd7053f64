#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "liesym/rational.hpp"
#include "liesym/symbol.hpp"

namespace liesym {

class Expr;
struct AtomData;
using Atom = const AtomData*;

/// Exponent of an atom: constant + a*n + b/n, where n is the exponent
/// parameter. Constants are rational so that square roots of scaling
/// variables (t^(-1/2)) and powers like t^(-1/(2n)) stay representable.
struct Exponent {
    Frac constant{1};
    Frac n_part{};
    Frac inv_part{};

    constexpr Exponent() = default;
    constexpr Exponent(std::int64_t k) : constant(k) {}
    Exponent(Frac c, Frac n, Frac inv) : constant(c), n_part(n), inv_part(inv) {}

    bool is_zero() const { return constant.is_zero() && n_part.is_zero() && inv_part.is_zero(); }
    bool is_symbolic() const { return !n_part.is_zero() || !inv_part.is_zero(); }
    bool is_integer() const { return !is_symbolic() && constant.is_integer(); }
    bool is_one() const { return !is_symbolic() && constant == Frac(1); }

    Exponent operator-() const { return {-constant, -n_part, -inv_part}; }
    friend Exponent operator+(const Exponent& a, const Exponent& b) {
        return {a.constant + b.constant, a.n_part + b.n_part, a.inv_part + b.inv_part};
    }
    friend Exponent operator-(const Exponent& a, const Exponent& b) { return a + (-b); }
    /// Throws symbolic-power substitution when the product leaves the
    /// constant + n + 1/n family (n*n or 1/(n*n) terms).
    friend Exponent operator*(const Exponent& a, const Exponent& b);
    friend bool operator==(const Exponent&, const Exponent&) = default;
    friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b);

    /// Value with the exponent parameter bound to `n`.
    Frac bind(const Frac& n) const;
    double evaluate(double n) const;

    Expr to_expr() const;
    /// Accepts expressions that are rational combinations of 1, n and n^(-1).
    static std::optional<Exponent> from_expr(const Expr& e);
};

using Factor = std::pair<Atom, Exponent>;
/// Sorted by atom order; atoms unique; exponents nonzero.
using Monomial = std::vector<Factor>;

struct Term {
    Monomial mono;
    Rational coef;

    friend bool operator==(const Term&, const Term&) = default;
};

/// Canonical exact expression: a sum of monomials with rational coefficients,
/// sorted by graded-lexicographic monomial order, with like terms merged and
/// zero terms dropped. Structural equality is mathematical equality within the
/// normal form.
class Expr {
public:
    Expr() = default;
    Expr(const Rational& c);
    Expr(int c) : Expr(Rational(c)) {}
    Expr(long c) : Expr(Rational(c)) {}

    static Expr atom(Atom a);
    static Expr symbol(const Symbol* s);
    static Expr monomial(Monomial m, Rational coef = Rational(1));
    /// Builds from arbitrary terms; monomials must already be canonical.
    static Expr from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty()); }
    bool is_monomial() const { return terms_.size() == 1; }
    std::optional<Rational> as_rational() const;

    Expr operator-() const;
    Expr& operator+=(const Expr& o);
    Expr& operator-=(const Expr& o);
    Expr& operator*=(const Expr& o);
    /// Division is restricted to single-monomial divisors.
    Expr& operator/=(const Expr& o);

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);

    friend bool operator==(const Expr& a, const Expr& b) { return a.terms_ == b.terms_; }

    std::size_t hash() const;

private:
    std::vector<Term> terms_;
};

enum class AtomKind : std::uint8_t { Symbol, Jet, Function, Number, Exp, Tanh };

/// Interned atom. Two atoms are equal iff their addresses are equal.
struct AtomData {
    AtomKind kind;
    const Symbol* symbol = nullptr;  // Symbol, Jet (the dependent), Function
    std::vector<int> orders;         // Jet / Function derivative multi-index, one entry per argument
    Rational number;                 // Number base
    Expr arg;                        // Exp / Tanh argument
    std::size_t hash = 0;

    int order() const;
    bool is_coordinate_free() const;  // parameters, numbers, and elementary functions of those
};

Atom symbol_atom(const Symbol* s);  // dependent symbols map to their order-zero jet
Atom jet_atom(const Symbol* dependent, std::vector<int> orders);
Atom function_atom(const Symbol* f, std::vector<int> orders);

/// Three-way structural atom order: independent < parameters < numbers <
/// jets < functions < exp < tanh, then by name and multi-index.
int compare_atoms(Atom a, Atom b);
int compare_exponents(const Exponent& a, const Exponent& b);
int compare_monomials(const Monomial& a, const Monomial& b);
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return compare_monomials(a, b) < 0; }
};
struct AtomLess {
    bool operator()(Atom a, Atom b) const { return compare_atoms(a, b) < 0; }
};
using AtomSet = std::set<Atom, AtomLess>;

Expr pow(const Expr& base, const Exponent& e);
Expr exp_of(const Expr& arg);
Expr tanh_of(const Expr& arg);
Expr number_power(const Rational& base, const Exponent& e);

/// Partial derivative with respect to an atom, treating every other atom as
/// independent. Opaque functions listing the atom's symbol among their
/// arguments differentiate by bumping their multi-index.
Expr diff(const Expr& e, Atom s);

/// Generic Leibniz/chain-rule derivation driven by a per-atom derivative.
/// Exp and Tanh atoms are handled through their arguments.
using AtomDerivative = std::function<Expr(Atom)>;
Expr derive(const Expr& e, const AtomDerivative& d);

Expr substitute(const Expr& e, Atom target, const Expr& replacement);
/// Simultaneous substitution.
Expr substitute(const Expr& e, const std::map<Atom, Expr, AtomLess>& replacements);
/// Replaces an opaque function and all of its derivatives by `replacement`
/// (an expression in the function's arguments) and its partial derivatives.
Expr substitute_function(const Expr& e, const Symbol* f, const Expr& replacement);

using Collected = std::map<Monomial, Expr, MonomialLess>;
/// Splits e = sum(key * value) with keys purely in `atoms` and values free of them.
Collected collect(const Expr& e, const AtomSet& atoms);
Expr expand(const Collected& c);

bool is_zero(const Expr& e);
/// All atoms, including those nested inside exp/tanh arguments.
AtomSet atoms_of(const Expr& e);
bool contains(const Expr& e, Atom a);
bool depends_on_symbol(const Expr& e, const Symbol* s);

/// Highest power (constant part) of `a` across the terms; empty if absent.
std::optional<Exponent> max_power(const Expr& e, Atom a);

/// Coefficient of a^k (exponent exactly k) in e.
Expr coefficient(const Expr& e, Atom a, const Exponent& k);

/// Exact evaluation at rational points (integer exponents only, no elementary atoms).
Rational evaluate_exact(const Expr& e, const std::map<Atom, Rational, AtomLess>& values);
/// Floating-point evaluation; the exponent parameter is taken from `values` when symbolic.
double evaluate(const Expr& e, const std::map<Atom, double, AtomLess>& values);

/// Unnormalized expression tree.
struct Raw {
    enum class Kind { Number, Atom, Sum, Product, Power, Quotient, Negate, ExpCall, TanhCall };
    Kind kind = Kind::Number;
    Rational number;
    liesym::Atom atom = nullptr;
    std::vector<std::shared_ptr<const Raw>> children;

    static std::shared_ptr<const Raw> num(Rational v);
    static std::shared_ptr<const Raw> leaf(liesym::Atom a);
    static std::shared_ptr<const Raw> node(Kind k, std::vector<std::shared_ptr<const Raw>> children);
};
using RawPtr = std::shared_ptr<const Raw>;

/// Unique canonical form of a raw tree. Division by anything other than a
/// nonzero single monomial throws non-monomial divisor.
Expr normalize(const Raw& r);
RawPtr to_raw(const Expr& e);

/// Canonical text (see print.cpp).
std::string to_string(const Expr& e);
std::string to_string(Atom a);
std::string to_string(const Monomial& m);
std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace liesym

template <>
struct std::hash<liesym::Expr> {
    std::size_t operator()(const liesym::Expr& e) const { return e.hash(); }
};
