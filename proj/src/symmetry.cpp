#include "liesym/symmetry.hpp"

#include <algorithm>

#include "liesym/error.hpp"

namespace liesym {

bool VectorField::is_zero() const {
    if (!eta.is_zero()) return false;
    return std::all_of(xi.begin(), xi.end(), [](const Expr& e) { return e.is_zero(); });
}

VectorField zero_field(const Symbol* dependent, std::string name) {
    VectorField f;
    f.name = std::move(name);
    f.dependent = dependent;
    f.xi.assign(dependent->args.size(), Expr());
    return f;
}

namespace {

void require_same_space(const VectorField& a, const VectorField& b) {
    if (a.dependent != b.dependent)
        throw Error(ErrorKind::Declaration, "fields '" + a.name + "' and '" + b.name + "' live on different spaces");
}

template <class F>
VectorField map_components(const VectorField& f, F fn) {
    VectorField r = f;
    for (auto& c : r.xi) c = fn(c);
    r.eta = fn(r.eta);
    return r;
}

}  // namespace

VectorField operator+(const VectorField& a, const VectorField& b) {
    require_same_space(a, b);
    VectorField r = zero_field(a.dependent);
    for (std::size_t i = 0; i < a.xi.size(); ++i) r.xi[i] = a.xi[i] + b.xi[i];
    r.eta = a.eta + b.eta;
    return r;
}

VectorField operator-(const VectorField& a, const VectorField& b) { return a + Expr(-1) * b; }

VectorField operator*(const Expr& c, const VectorField& a) {
    VectorField r = map_components(a, [&c](const Expr& e) { return c * e; });
    r.name.clear();
    return r;
}

VectorField substitute(const VectorField& f, const std::map<Atom, Expr, AtomLess>& repl) {
    return map_components(f, [&repl](const Expr& e) { return substitute(e, repl); });
}

VectorField substitute_function(const VectorField& f, const Symbol* fn, const Expr& replacement) {
    return map_components(f, [&](const Expr& e) { return substitute_function(e, fn, replacement); });
}

std::string to_string(const VectorField& f) {
    std::string out;
    auto part = [&out](const Expr& c, const std::string& var) {
        if (c.is_zero()) return;
        if (!out.empty()) out += " + ";
        out += "(" + to_string(c) + ")*d/d" + var;
    };
    for (std::size_t i = 0; i < f.xi.size(); ++i) part(f.xi[i], f.independents()[i]->name);
    part(f.eta, f.dependent->name);
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Prolongation

namespace {

void enumerate_indices(std::size_t m, int order, std::vector<int>& cur, std::size_t pos, int left,
                       std::vector<std::vector<int>>& out) {
    if (pos + 1 == m) {
        cur[pos] = left;
        out.push_back(cur);
        return;
    }
    for (int k = left; k >= 0; --k) {
        cur[pos] = k;
        enumerate_indices(m, order, cur, pos + 1, left - k, out);
    }
}

std::vector<std::vector<int>> indices_of_order(std::size_t m, int order) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(m, 0);
    enumerate_indices(m, order, cur, 0, order, out);
    return out;
}

}  // namespace

ProlongedField prolong(const VectorField& X, int order, PeelRule rule) {
    if (order < 0 || order > 3) throw Error(ErrorKind::Domain, "prolongation order must be between 0 and 3");
    const auto& vars = X.independents();
    const std::size_t m = vars.size();
    ProlongedField P;
    P.base = X;
    P.order = order;

    // D_i xi^j, reused across all multi-indices
    std::vector<std::vector<Expr>> dxi(m, std::vector<Expr>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) dxi[i][j] = total_derivative(X.xi[j], vars[i]);

    auto eta_of = [&](const std::vector<int>& J) -> const Expr& {
        if (std::all_of(J.begin(), J.end(), [](int k) { return k == 0; })) return X.eta;
        return P.eta_ext.at(J);
    };

    for (int k = 1; k <= order; ++k) {
        for (const auto& J : indices_of_order(m, k)) {
            std::size_t i = 0;
            if (rule == PeelRule::Last) {
                for (std::size_t p = 0; p < m; ++p)
                    if (J[p] > 0) i = p;
            } else {
                while (J[i] == 0) ++i;
            }
            std::vector<int> lower = J;
            --lower[i];
            Expr r = total_derivative(eta_of(lower), vars[i]);
            for (std::size_t j = 0; j < m; ++j) {
                if (dxi[i][j].is_zero()) continue;
                std::vector<int> up = lower;
                ++up[j];
                r -= Expr::atom(jet_atom(X.dependent, up)) * dxi[i][j];
            }
            P.eta_ext.emplace(J, std::move(r));
        }
    }
    return P;
}

Expr apply(const ProlongedField& PX, const Expr& e) {
    const VectorField& X = PX.base;
    Expr r;
    for (std::size_t i = 0; i < X.xi.size(); ++i)
        if (!X.xi[i].is_zero()) r += X.xi[i] * diff(e, symbol_atom(X.independents()[i]));
    for (Atom a : atoms_of(e)) {
        if (a->kind != AtomKind::Jet || a->symbol != X.dependent) continue;
        if (a->order() == 0) {
            if (!X.eta.is_zero()) r += X.eta * diff(e, a);
            continue;
        }
        if (a->order() > PX.order)
            throw Error(ErrorKind::Domain, "expression order exceeds prolongation order at " + to_string(a));
        const Expr& ej = PX.eta_ext.at(a->orders);
        if (!ej.is_zero()) r += ej * diff(e, a);
    }
    return r;
}

Expr apply_point(const VectorField& X, const Expr& e) {
    Expr r;
    for (std::size_t i = 0; i < X.xi.size(); ++i)
        if (!X.xi[i].is_zero()) r += X.xi[i] * diff(e, symbol_atom(X.independents()[i]));
    if (!X.eta.is_zero()) r += X.eta * diff(e, symbol_atom(X.dependent));
    return r;
}

Expr check_symmetry(const VectorField& X, const Pde& pde) {
    if (X.dependent != pde.dependent)
        throw Error(ErrorKind::Declaration, "field '" + X.name + "' does not act on " + pde.dependent->name);
    int order = std::max(jet_order(pde.lhs, pde.dependent), 1);
    return on_manifold(apply(prolong(X, order), pde.lhs), pde);
}

// ---------------------------------------------------------------------------
// Determining equations

namespace {

Expr monic(const Expr& e) {
    Rational lead = e.terms().front().coef;
    return e * Expr(Rational(1) / lead);
}

}  // namespace

DeterminingSystem determining_equations(const Pde& pde) {
    const Symbol* u = pde.dependent;
    std::vector<const Symbol*> args = u->args;
    args.push_back(u);
    DeterminingSystem sys;
    VectorField X = zero_field(u, "generic");
    for (std::size_t i = 0; i < u->args.size(); ++i) {
        const Symbol* f = declare_function("xi_" + u->args[i]->name, args);
        sys.unknowns.push_back(f);
        X.xi[i] = Expr::atom(function_atom(f, std::vector<int>(args.size(), 0)));
    }
    const Symbol* eta = declare_function("eta", args);
    sys.unknowns.push_back(eta);
    X.eta = Expr::atom(function_atom(eta, std::vector<int>(args.size(), 0)));

    Expr residual = check_symmetry(X, pde);
    AtomSet jets;
    for (Atom a : atoms_of(residual))
        if (a->kind == AtomKind::Jet && a->symbol == u && a->order() >= 1) jets.insert(a);
    std::vector<Expr> eqs;
    for (const auto& [key, value] : collect(residual, jets)) {
        Expr e = monic(value);
        if (std::find(eqs.begin(), eqs.end(), e) == eqs.end()) eqs.push_back(std::move(e));
    }
    std::sort(eqs.begin(), eqs.end(), [](const Expr& a, const Expr& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return to_string(a) < to_string(b);
    });
    sys.equations = std::move(eqs);
    return sys;
}

// ---------------------------------------------------------------------------
// Commutators and closure

VectorField commutator(const VectorField& X, const VectorField& Y) {
    require_same_space(X, Y);
    VectorField r = zero_field(X.dependent);
    for (std::size_t k = 0; k < X.xi.size(); ++k) r.xi[k] = apply_point(X, Y.xi[k]) - apply_point(Y, X.xi[k]);
    r.eta = apply_point(X, Y.eta) - apply_point(Y, X.eta);
    r.name = "[" + X.name + "," + Y.name + "]";
    return r;
}

namespace {

AtomSet coordinate_atoms(const Expr& e) {
    AtomSet s;
    for (const Term& t : e.terms())
        for (const auto& [a, k] : t.mono)
            if (!a->is_coordinate_free()) s.insert(a);
    return s;
}

std::vector<Expr> components(const VectorField& f) {
    std::vector<Expr> c = f.xi;
    c.push_back(f.eta);
    return c;
}

}  // namespace

std::optional<std::vector<Expr>> decompose(const VectorField& target, const std::vector<VectorField>& basis) {
    const std::size_t K = basis.size();
    for (const auto& b : basis) require_same_space(target, b);

    // one linear equation per (component, coordinate monomial)
    std::vector<std::vector<Expr>> rows;
    std::vector<Expr> tc = components(target);
    std::vector<std::vector<Expr>> bc;
    for (const auto& b : basis) bc.push_back(components(b));
    for (std::size_t comp = 0; comp < tc.size(); ++comp) {
        AtomSet coords = coordinate_atoms(tc[comp]);
        for (std::size_t k = 0; k < K; ++k) {
            AtomSet more = coordinate_atoms(bc[k][comp]);
            coords.insert(more.begin(), more.end());
        }
        std::map<Monomial, std::vector<Expr>, MonomialLess> by_key;
        auto add = [&](const Expr& e, std::size_t col) {
            for (const auto& [key, value] : collect(e, coords)) {
                auto& row = by_key[key];
                if (row.empty()) row.assign(K + 1, Expr());
                row[col] += value;
            }
        };
        for (std::size_t k = 0; k < K; ++k) add(bc[k][comp], k);
        add(tc[comp], K);
        for (auto& [key, row] : by_key) rows.push_back(std::move(row));
    }

    // Gauss-Jordan; pivots must be single monomials so division stays exact
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t col = 0; col < K && r < rows.size(); ++col) {
        std::size_t p = rows.size();
        for (std::size_t i = r; i < rows.size(); ++i) {
            if (rows[i][col].is_monomial()) {
                if (p == rows.size() || rows[i][col].as_rational()) p = i;
                if (rows[i][col].as_rational()) break;
            }
        }
        if (p == rows.size()) {
            for (std::size_t i = r; i < rows.size(); ++i)
                if (!rows[i][col].is_zero()) return std::nullopt;
            continue;
        }
        std::swap(rows[r], rows[p]);
        Expr piv = rows[r][col];
        for (auto& v : rows[r]) v = v / piv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col].is_zero()) continue;
            Expr f = rows[i][col];
            for (std::size_t c = 0; c <= K; ++c) rows[i][c] -= f * rows[r][c];
        }
        pivot_col.push_back(col);
        ++r;
    }
    for (std::size_t i = r; i < rows.size(); ++i)
        if (!rows[i][K].is_zero()) return std::nullopt;
    if (pivot_col.size() < K)
        throw Error(ErrorKind::UnderdeterminedDecomposition, "basis fields are linearly dependent");
    std::vector<Expr> coeffs(K);
    for (std::size_t i = 0; i < pivot_col.size(); ++i) coeffs[pivot_col[i]] = rows[i][K];
    for (const auto& c : coeffs)
        if (!coordinate_atoms(c).empty()) return std::nullopt;
    return coeffs;
}

ClosureReport closure_table(const std::vector<VectorField>& fields) {
    if (fields.empty()) throw Error(ErrorKind::Domain, "empty basis");
    for (std::size_t i = 0; i < fields.size(); ++i)
        for (std::size_t j = i + 1; j < fields.size(); ++j) {
            require_same_space(fields[i], fields[j]);
            if (components(fields[i]) == components(fields[j]))
                throw Error(ErrorKind::UnderdeterminedDecomposition,
                            "basis fields '" + fields[i].name + "' and '" + fields[j].name + "' are identical");
        }
    ClosureReport rep;
    rep.basis = fields;
    const std::size_t n = fields.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ClosureEntry e;
            e.row = i;
            e.col = j;
            e.value = commutator(fields[i], fields[j]);
            e.coefficients = decompose(e.value, fields);
            if (!e.coefficients && i < j) rep.witnesses.emplace_back(i, j);
            rep.table.push_back(std::move(e));
        }
    return rep;
}

std::string combination_text(const std::vector<Expr>& coefficients, const std::vector<VectorField>& basis) {
    std::string out;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        const Expr& c = coefficients[k];
        if (c.is_zero()) continue;
        std::string name = basis[k].name;
        std::string piece;
        bool neg = false;
        if (auto q = c.as_rational()) {
            neg = q->sign() < 0;
            Rational m = q->abs();
            piece = m.is_one() ? name : m.str() + "*" + name;
        } else if (c.is_monomial() && c.terms()[0].coef.sign() < 0) {
            neg = true;
            piece = "(" + to_string(-c) + ")*" + name;
        } else {
            piece = "(" + to_string(c) + ")*" + name;
        }
        if (out.empty())
            out = neg ? "-" + piece : piece;
        else
            out += (neg ? " - " : " + ") + piece;
    }
    return out.empty() ? "0" : out;
}

}  // namespace liesym
