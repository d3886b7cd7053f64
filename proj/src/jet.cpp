#include "liesym/jet.hpp"

#include "liesym/error.hpp"

namespace liesym {

namespace {

Expr bumped_jet(Atom a, const Symbol* var) {
    int p = a->symbol->arg_index(var);
    if (p < 0) return Expr();
    std::vector<int> o = a->orders;
    ++o[static_cast<std::size_t>(p)];
    return Expr::atom(jet_atom(a->symbol, std::move(o)));
}

Expr total_atom(Atom a, const Symbol* var) {
    switch (a->kind) {
        case AtomKind::Symbol: return a->symbol == var ? Expr(1) : Expr();
        case AtomKind::Jet: return bumped_jet(a, var);
        case AtomKind::Function: {
            const Symbol* f = a->symbol;
            Expr r;
            for (std::size_t p = 0; p < f->args.size(); ++p) {
                const Symbol* arg = f->args[p];
                Expr inner;
                if (arg == var)
                    inner = Expr(1);
                else if (arg->kind == SymbolKind::Dependent)
                    inner = bumped_jet(symbol_atom(arg), var);
                if (inner.is_zero()) continue;
                std::vector<int> o = a->orders;
                ++o[p];
                r += Expr::atom(function_atom(f, std::move(o))) * inner;
            }
            return r;
        }
        default: return Expr();
    }
}

}  // namespace

Expr total_derivative(const Expr& e, const Symbol* var) {
    return derive(e, [var](Atom a) { return total_atom(a, var); });
}

Expr total_derivative(const Expr& e, const std::vector<const Symbol*>& vars) {
    Expr r = e;
    for (const Symbol* v : vars) r = total_derivative(r, v);
    return r;
}

Atom jet_of(const Symbol* dependent, const std::vector<const Symbol*>& vars) {
    std::vector<int> o(dependent->args.size(), 0);
    for (const Symbol* v : vars) {
        int p = dependent->arg_index(v);
        if (p < 0) throw Error(ErrorKind::Declaration, dependent->name + " does not depend on " + v->name);
        ++o[static_cast<std::size_t>(p)];
    }
    return jet_atom(dependent, std::move(o));
}

int jet_order(const Expr& e, const Symbol* dependent) {
    int best = -1;
    for (Atom a : atoms_of(e))
        if (a->kind == AtomKind::Jet && a->symbol == dependent) best = std::max(best, a->order());
    return best;
}

Pde make_pde(const Expr& lhs, const Symbol* dependent, std::string name) {
    Atom leading = nullptr;
    for (Atom a : atoms_of(lhs)) {
        if (a->kind != AtomKind::Jet || a->symbol != dependent) continue;
        // atoms_of iterates in atom order, so the last maximal one wins ties
        if (leading == nullptr || a->order() >= leading->order()) leading = a;
    }
    if (leading == nullptr || leading->order() == 0)
        throw Error(ErrorKind::NonlinearLeading, "no derivative of " + dependent->name + " in equation");
    auto power = max_power(lhs, leading);
    for (const Term& t : lhs.terms())
        for (const auto& [a, k] : t.mono)
            if (a == leading && !k.is_one())
                throw Error(ErrorKind::NonlinearLeading, to_string(leading) + " appears with power " + to_string(k.to_expr()));
    if (!power) throw Error(ErrorKind::NonlinearLeading, "leading derivative missing");
    Pde p;
    p.name = std::move(name);
    p.lhs = lhs;
    p.dependent = dependent;
    p.leading = leading;
    p.leading_coef = coefficient(lhs, leading, Exponent(1));
    if (!p.leading_coef.is_monomial())
        throw Error(ErrorKind::NonMonomialDivisor, "coefficient of " + to_string(leading) + " is " + to_string(p.leading_coef));
    for (Atom a : atoms_of(p.leading_coef))
        if (a->kind == AtomKind::Jet)
            throw Error(ErrorKind::NonlinearLeading, "coefficient of " + to_string(leading) + " involves " + to_string(a));
    Expr rest = coefficient(lhs, leading, Exponent(0));
    p.leading_rhs = -rest / p.leading_coef;
    return p;
}

Expr on_manifold(const Expr& e, const Pde& pde) { return substitute(e, pde.leading, pde.leading_rhs); }

}  // namespace liesym
