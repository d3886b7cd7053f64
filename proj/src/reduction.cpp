#include "liesym/reduction.hpp"

#include <algorithm>

#include "liesym/error.hpp"

namespace liesym {

namespace {

struct AffinePart {
    Expr scale;  // coefficient of the coordinate
    Expr shift;
};

AffinePart affine_in(const Expr& c, Atom coord, const std::string& where) {
    AtomSet s{coord};
    AffinePart r;
    for (const auto& [key, value] : collect(c, s)) {
        for (const Term& t : value.terms())
            for (const auto& [a, k] : t.mono)
                if (!a->is_coordinate_free())
                    throw Error(ErrorKind::UnsupportedFieldShape, where + " coefficient " + to_string(c) + " couples coordinates");
        if (key.empty())
            r.shift = value;
        else if (key.size() == 1 && key[0].second.is_one())
            r.scale = value;
        else
            throw Error(ErrorKind::UnsupportedFieldShape, where + " coefficient " + to_string(c) + " is not affine");
    }
    return r;
}

const Symbol* new_base_symbol(const std::string& name) {
    if (const Symbol* s = find_symbol(name); s && s->is_base_variable()) return s;
    return declare(name, SymbolKind::Reduced);
}

Expr det(const std::vector<std::vector<Expr>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return Expr(1);
    if (n == 1) return m[0][0];
    Expr r;
    for (std::size_t c = 0; c < n; ++c) {
        if (m[0][c].is_zero()) continue;
        std::vector<std::vector<Expr>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Expr> row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(m[i][j]);
            minor.push_back(std::move(row));
        }
        Expr term = m[0][c] * det(minor);
        r = (c % 2 == 0) ? r + term : r - term;
    }
    return r;
}

bool has_nonzero_minor(const std::vector<std::vector<Expr>>& jac, std::size_t rows, std::size_t cols) {
    if (rows == 0) return true;
    if (rows > cols) return false;
    std::vector<std::size_t> pick(rows);
    std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t start) -> bool {
        if (k == rows) {
            std::vector<std::vector<Expr>> m(rows, std::vector<Expr>(rows));
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < rows; ++j) m[i][j] = jac[i][pick[j]];
            return !det(m).is_zero();
        }
        for (std::size_t c = start; c < cols; ++c) {
            pick[k] = c;
            if (rec(k + 1, c + 1)) return true;
        }
        return false;
    };
    return rec(0, 0);
}

/// Sign fixed so the highest jet (latest in atom order) has a positive leading coefficient.
Expr orient(const Expr& e, const Symbol* dependent) {
    Atom top = nullptr;
    for (Atom a : atoms_of(e))
        if (a->kind == AtomKind::Jet && a->symbol == dependent && (top == nullptr || a->order() >= top->order())) top = a;
    if (top == nullptr) return e;
    Expr c = coefficient(e, top, Exponent(1));
    if (!c.is_zero() && c.terms().front().coef.sign() < 0) return -e;
    return e;
}

}  // namespace

// ---------------------------------------------------------------------------
// Invariants

Ansatz invariants_for(const VectorField& X, const std::vector<std::string>& new_names, const std::string& dependent_name) {
    const auto& z = X.independents();
    const std::size_t m = z.size();
    std::vector<AffinePart> parts;
    for (std::size_t i = 0; i < m; ++i) parts.push_back(affine_in(X.xi[i], symbol_atom(z[i]), z[i]->name));
    Atom u_atom = symbol_atom(X.dependent);
    AffinePart up = affine_in(X.eta, u_atom, X.dependent->name);

    bool scaling = !up.scale.is_zero() ||
                   std::any_of(parts.begin(), parts.end(), [](const AffinePart& p) { return !p.scale.is_zero(); });

    std::size_t pivot = m;
    for (std::size_t i = 0; i < m && pivot == m; ++i)
        if (scaling ? !parts[i].scale.is_zero() : !parts[i].shift.is_zero()) pivot = i;
    if (pivot == m) throw Error(ErrorKind::UnsupportedFieldShape, "field does not move any independent variable");

    Ansatz a;
    a.name = X.name.empty() ? "invariants" : "invariants of " + X.name;
    a.old_dependent = X.dependent;
    std::size_t next_name = 0;
    auto fresh = [&]() -> std::string {
        if (next_name < new_names.size()) return new_names[next_name++];
        ++next_name;
        return next_name == 1 ? "w" : "w" + std::to_string(next_name);
    };
    Expr zp = Expr::symbol(z[pivot]);
    std::vector<const Symbol*> new_syms;

    if (!scaling) {
        const Expr& bp = parts[pivot].shift;
        if (!bp.is_monomial()) throw Error(ErrorKind::UnsupportedFieldShape, "pivot shift is not a monomial");
        for (std::size_t i = 0; i < m; ++i) {
            if (i == pivot) continue;
            if (parts[i].shift.is_zero()) {
                a.new_vars.emplace_back(z[i], Expr::symbol(z[i]));
                a.invariants.push_back(Expr::symbol(z[i]));
                new_syms.push_back(z[i]);
                continue;
            }
            Expr ratio = parts[i].shift / bp;
            Expr inv = Expr::symbol(z[i]) - ratio * zp;
            const Symbol* s = new_base_symbol(fresh());
            a.new_vars.emplace_back(s, inv);
            a.invariants.push_back(inv);
            a.inverse.emplace(symbol_atom(z[i]), Expr::symbol(s) + ratio * zp);
            new_syms.push_back(s);
        }
        Expr ru = up.shift / bp;
        a.new_dependent = declare_dependent(dependent_name, new_syms);
        a.invariants.push_back(Expr::atom(u_atom) - ru * zp);
        a.rule = Expr::symbol(a.new_dependent) + ru * zp;
        return a;
    }

    const Expr& ap = parts[pivot].scale;
    if (!parts[pivot].shift.is_zero())
        throw Error(ErrorKind::UnsupportedFieldShape, "scaling pivot " + z[pivot]->name + " carries a shift");
    if (!ap.is_monomial()) throw Error(ErrorKind::UnsupportedFieldShape, "pivot scale is not a monomial");
    auto power_of_pivot = [&](const Expr& ai) -> Exponent {
        auto e = Exponent::from_expr(ai / ap);
        if (!e) throw Error(ErrorKind::UnsupportedFieldShape, "scaling ratio " + to_string(ai / ap) + " is not a valid exponent");
        return *e;
    };
    for (std::size_t i = 0; i < m; ++i) {
        if (i == pivot) continue;
        const AffinePart& p = parts[i];
        if (p.scale.is_zero()) {
            if (!p.shift.is_zero())
                throw Error(ErrorKind::UnsupportedFieldShape, "mixed translation and scaling needs logarithms");
            a.new_vars.emplace_back(z[i], Expr::symbol(z[i]));
            a.invariants.push_back(Expr::symbol(z[i]));
            new_syms.push_back(z[i]);
            continue;
        }
        if (!p.scale.is_monomial()) throw Error(ErrorKind::UnsupportedFieldShape, "scale of " + z[i]->name + " is not a monomial");
        Exponent k = power_of_pivot(p.scale);
        Expr offset = p.shift / p.scale;
        Expr inv = (Expr::symbol(z[i]) + offset) * pow(zp, -k);
        const Symbol* s = new_base_symbol(fresh());
        a.new_vars.emplace_back(s, inv);
        a.invariants.push_back(inv);
        a.inverse.emplace(symbol_atom(z[i]), Expr::symbol(s) * pow(zp, k) - offset);
        new_syms.push_back(s);
    }
    a.new_dependent = declare_dependent(dependent_name, new_syms);
    if (up.scale.is_zero()) {
        if (!up.shift.is_zero()) throw Error(ErrorKind::UnsupportedFieldShape, "dependent shift with scaled base needs logarithms");
        a.invariants.push_back(Expr::atom(u_atom));
        a.rule = Expr::symbol(a.new_dependent);
        return a;
    }
    if (!up.scale.is_monomial()) throw Error(ErrorKind::UnsupportedFieldShape, "dependent scale is not a monomial");
    Exponent k = power_of_pivot(up.scale);
    Expr offset = up.shift / up.scale;
    a.invariants.push_back((Expr::atom(u_atom) + offset) * pow(zp, -k));
    a.rule = Expr::symbol(a.new_dependent) * pow(zp, k) - offset;
    return a;
}

// ---------------------------------------------------------------------------
// Pullback

ReducedEquation pullback(const Expr& lhs, const Ansatz& a) {
    const Symbol* u = a.old_dependent;
    const Symbol* V = a.new_dependent;
    const auto& z = u->args;
    const std::size_t m = z.size();
    const std::size_t k = a.new_vars.size();
    if (V->args.size() != k) throw Error(ErrorKind::Declaration, "new dependent arity does not match the new variables");

    std::map<Atom, Expr, AtomLess> to_old;
    for (const auto& [s, S] : a.new_vars)
        if (std::find(z.begin(), z.end(), s) == z.end()) to_old.emplace(symbol_atom(s), S);
    Expr G = substitute(a.rule, to_old);

    // dS[b][i] = dS_b/dz_i
    std::vector<std::vector<Expr>> dS(k, std::vector<Expr>(m));
    for (std::size_t b = 0; b < k; ++b)
        for (std::size_t i = 0; i < m; ++i) dS[b][i] = diff(a.new_vars[b].second, symbol_atom(z[i]));
    if (!has_nonzero_minor(dS, k, m))
        throw Error(ErrorKind::Domain, "ansatz '" + a.name + "' has a degenerate Jacobian");

    auto D = [&](const Expr& E, std::size_t i) {
        return derive(E, [&](Atom at) -> Expr {
            switch (at->kind) {
                case AtomKind::Symbol: return at->symbol == z[i] ? Expr(1) : Expr();
                case AtomKind::Jet: {
                    if (at->symbol != V) return Expr();
                    Expr r;
                    for (std::size_t b = 0; b < k; ++b) {
                        if (dS[b][i].is_zero()) continue;
                        std::vector<int> o = at->orders;
                        ++o[b];
                        r += dS[b][i] * Expr::atom(jet_atom(V, std::move(o)));
                    }
                    return r;
                }
                case AtomKind::Function: return diff(Expr::atom(at), symbol_atom(z[i]));
                default: return Expr();
            }
        });
    };

    std::map<std::vector<int>, Expr> cache;
    std::function<const Expr&(const std::vector<int>&)> uJ = [&](const std::vector<int>& J) -> const Expr& {
        if (auto it = cache.find(J); it != cache.end()) return it->second;
        std::size_t i = m;
        for (std::size_t p = 0; p < m; ++p)
            if (J[p] > 0) i = p;
        Expr r;
        if (i == m) {
            r = G;
        } else {
            std::vector<int> lower = J;
            --lower[i];
            r = D(uJ(lower), i);
        }
        return cache.emplace(J, std::move(r)).first->second;
    };

    std::map<Atom, Expr, AtomLess> jets;
    for (Atom at : atoms_of(lhs))
        if (at->kind == AtomKind::Jet && at->symbol == u) jets.emplace(at, uJ(at->orders));
    Expr R = substitute(substitute(lhs, jets), a.inverse);

    AtomSet old_only;
    for (const Symbol* s : z)
        if (std::none_of(a.new_vars.begin(), a.new_vars.end(), [s](const auto& p) { return p.first == s; }))
            old_only.insert(symbol_atom(s));
    if (!R.is_zero()) {
        Monomial common;
        for (const auto& f : R.terms().front().mono)
            if (old_only.count(f.first)) common.push_back(f);
        if (!common.empty()) R = R / Expr::monomial(common);
    }
    for (Atom at : atoms_of(R))
        if (old_only.count(at))
            throw Error(ErrorKind::ResidualOldVariable, to_string(at) + " survives in the reduction by '" + a.name + "'");
    return ReducedEquation{a.name, orient(R, V), V};
}

ReducedEquation pullback(const Pde& pde, const Ansatz& a) {
    if (pde.dependent != a.old_dependent)
        throw Error(ErrorKind::Declaration, "ansatz '" + a.name + "' does not act on " + pde.dependent->name);
    ReducedEquation r = pullback(pde.lhs, a);
    return r;
}

Ansatz compose(const Ansatz& a1, const Ansatz& a2) {
    if (a2.old_dependent != a1.new_dependent)
        throw Error(ErrorKind::Declaration, "cannot compose '" + a1.name + "' with '" + a2.name + "'");
    std::map<Atom, Expr, AtomLess> s1;
    for (const auto& [s, S] : a1.new_vars) s1.emplace(symbol_atom(s), S);
    Ansatz a;
    a.name = a1.name + " then " + a2.name;
    a.old_dependent = a1.old_dependent;
    a.new_dependent = a2.new_dependent;
    for (const auto& [s, S] : a2.new_vars) a.new_vars.emplace_back(s, substitute(S, s1));
    a.rule = substitute(a1.rule, symbol_atom(a1.new_dependent), substitute(a2.rule, s1));
    for (const auto& [old, e] : a1.inverse) a.inverse.emplace(old, substitute(e, a2.inverse));
    return a;
}

// ---------------------------------------------------------------------------
// Comparison

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Exact: return "exact";
        case Verdict::ConstantMultiple: return "equal-up-to-constant-multiple";
        case Verdict::UnderSubstitution: return "equal-under-stated-substitution";
        case Verdict::Mismatch: return "mismatch-with-residual";
    }
    return "?";
}

namespace {

std::optional<Rational> rational_multiple(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return std::nullopt;
    if (a.size() != b.size() || a.terms()[0].mono != b.terms()[0].mono) return std::nullopt;
    Rational m = a.terms()[0].coef / b.terms()[0].coef;
    if (a == b * Expr(m)) return m;
    return std::nullopt;
}

}  // namespace

Comparison compare_reduced(const Expr& derived, const Expr& printed, const std::map<Atom, Expr, AtomLess>& assumptions) {
    Comparison c;
    if (derived == printed) {
        c.verdict = Verdict::Exact;
        return c;
    }
    if (auto m = rational_multiple(derived, printed)) {
        c.verdict = Verdict::ConstantMultiple;
        c.multiple = *m;
        return c;
    }
    Expr d = derived, p = printed;
    if (!assumptions.empty()) {
        d = substitute(derived, assumptions);
        p = substitute(printed, assumptions);
        if (d == p) {
            c.verdict = Verdict::UnderSubstitution;
            return c;
        }
        if (auto m = rational_multiple(d, p)) {
            c.verdict = Verdict::UnderSubstitution;
            c.multiple = *m;
            return c;
        }
    }
    c.verdict = Verdict::Mismatch;
    if (!d.is_zero() && !p.is_zero() && d.terms()[0].mono == p.terms()[0].mono)
        c.multiple = d.terms()[0].coef / p.terms()[0].coef;
    c.residual = d - p * Expr(c.multiple);
    return c;
}

// ---------------------------------------------------------------------------
// First integrals

FirstIntegralCheck check_first_integral(const Expr& eq, const Expr& candidate, const Symbol* dependent) {
    if (dependent->args.size() != 1) throw Error(ErrorKind::Domain, "first integrals need a one-variable dependent");
    const Symbol* var = dependent->args[0];
    int oe = jet_order(eq, dependent);
    int of = jet_order(candidate, dependent);
    FirstIntegralCheck out;
    out.k = oe - of;
    if (out.k < 1 || out.k > 2)
        throw Error(ErrorKind::Domain, "candidate order " + std::to_string(of) + " vs equation order " + std::to_string(oe));
    auto jet = [&](int order) { return jet_atom(dependent, {order}); };

    Expr Dk = candidate;
    for (int i = 0; i < out.k; ++i) Dk = total_derivative(Dk, var);
    Atom top = jet(oe);
    Expr le = coefficient(eq, top, Exponent(1));
    Expr ld = coefficient(Dk, top, Exponent(1));
    if (ld.is_zero()) throw Error(ErrorKind::NonlinearLeading, "candidate derivative lacks " + to_string(top));
    Expr r;
    if (ld.is_monomial()) {
        out.multiplier = le / ld;
        r = eq - out.multiplier * Dk;
    } else {
        out.multiplier = le;
        out.scale = ld;
        r = ld * eq - le * Dk;
    }

    // eliminate derivatives of order >= of using candidate = 0 and its derivatives
    for (int ord = jet_order(r, dependent); ord >= of; --ord) {
        Atom a = jet(ord);
        if (!contains(r, a)) continue;
        Expr g = candidate;
        for (int i = of; i < ord; ++i) g = total_derivative(g, var);
        for (const Term& t : g.terms())
            for (const auto& [b, k] : t.mono)
                if (b == a && !k.is_one())
                    throw Error(ErrorKind::NonlinearLeading, "candidate is not linear in " + to_string(a));
        Expr c = coefficient(g, a, Exponent(1));
        Expr c0 = coefficient(g, a, Exponent(0));
        if (c.is_monomial()) {
            r = substitute(r, a, -c0 / c);
            continue;
        }
        // a = -c0/c with c a sum: clear denominators by c^d, d the degree of r in a
        auto d = max_power(r, a);
        if (!d || !d->is_integer() || d->constant.num < 0)
            throw Error(ErrorKind::NonMonomialDivisor, "cannot clear " + to_string(c) + " from the residual");
        std::int64_t deg = d->constant.num;
        Expr cleared;
        for (std::int64_t k = 0; k <= deg; ++k)
            cleared += coefficient(r, a, Exponent(k)) * pow(-c0, Exponent(k)) * pow(c, Exponent(deg - k));
        r = cleared;
    }
    out.residual = r;
    return out;
}

// ---------------------------------------------------------------------------
// Closed forms

ClosedFormCheck verify_closed_form(const Expr& eq, const Symbol* dependent, const Expr& sol, const std::vector<Atom>& unknowns) {
    std::map<std::vector<int>, Expr> cache;
    std::function<const Expr&(const std::vector<int>&)> dsol = [&](const std::vector<int>& J) -> const Expr& {
        if (auto it = cache.find(J); it != cache.end()) return it->second;
        std::size_t i = J.size();
        for (std::size_t p = 0; p < J.size(); ++p)
            if (J[p] > 0) i = p;
        Expr r;
        if (i == J.size()) {
            r = sol;
        } else {
            std::vector<int> lower = J;
            --lower[i];
            r = diff(dsol(lower), symbol_atom(dependent->args[i]));
        }
        return cache.emplace(J, std::move(r)).first->second;
    };
    std::map<Atom, Expr, AtomLess> repl;
    for (Atom a : atoms_of(eq))
        if (a->kind == AtomKind::Jet && a->symbol == dependent) repl.emplace(a, dsol(a->orders));

    ClosedFormCheck out;
    out.residual = substitute(eq, repl);
    auto constraints_of = [](const Expr& r) {
        AtomSet coords;
        for (const Term& t : r.terms())
            for (const auto& [a, k] : t.mono)
                if (!a->is_coordinate_free()) coords.insert(a);
        std::vector<Expr> cs;
        for (const auto& [key, value] : collect(r, coords)) cs.push_back(value);
        return cs;
    };
    out.constraints = constraints_of(out.residual);

    std::vector<Expr> pending = out.constraints;
    for (Atom A : unknowns) {
        for (auto& c : pending) c = substitute(c, out.solved);
        auto it = std::find_if(pending.begin(), pending.end(), [A](const Expr& c) { return contains(c, A); });
        if (it == pending.end()) continue;
        Expr c = *it;
        // drop the trivial root A = 0
        Exponent low = Exponent(1000);
        bool any_free = false;
        for (const Term& t : c.terms()) {
            auto f = std::find_if(t.mono.begin(), t.mono.end(), [A](const Factor& x) { return x.first == A; });
            if (f == t.mono.end()) {
                any_free = true;
            } else if (f->second < low) {
                low = f->second;
            }
        }
        if (!any_free) c = c / pow(Expr::atom(A), low);
        auto top = max_power(c, A);
        if (!top || !top->is_one()) continue;
        Expr c1 = coefficient(c, A, Exponent(1));
        if (!c1.is_monomial()) continue;
        out.solved.emplace(A, -coefficient(c, A, Exponent(0)) / c1);
    }
    out.residual_after = out.solved.empty() ? out.residual : substitute(out.residual, out.solved);
    return out;
}

}  // namespace liesym
