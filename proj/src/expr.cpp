#include "liesym/expr.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <unordered_map>

#include "liesym/error.hpp"

namespace liesym {

// ---------------------------------------------------------------------------
// Exponent

Exponent operator*(const Exponent& a, const Exponent& b) {
    if (!(a.n_part * b.n_part).is_zero() || !(a.inv_part * b.inv_part).is_zero())
        throw Error(ErrorKind::SymbolicPowerSubstitution, "exponent product leaves the affine family in n");
    Exponent r;
    r.constant = a.constant * b.constant + a.n_part * b.inv_part + a.inv_part * b.n_part;
    r.n_part = a.constant * b.n_part + a.n_part * b.constant;
    r.inv_part = a.constant * b.inv_part + a.inv_part * b.constant;
    return r;
}

std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
    if (auto c = a.constant <=> b.constant; c != 0) return c;
    if (auto c = a.n_part <=> b.n_part; c != 0) return c;
    return a.inv_part <=> b.inv_part;
}

Frac Exponent::bind(const Frac& n) const {
    Frac r = constant + n_part * n;
    if (!inv_part.is_zero()) r = r + inv_part / n;
    return r;
}

double Exponent::evaluate(double n) const {
    double r = constant.to_double() + n_part.to_double() * n;
    if (!inv_part.is_zero()) r += inv_part.to_double() / n;
    return r;
}

Expr Exponent::to_expr() const {
    Expr n = Expr::symbol(exponent_parameter());
    Expr r(constant.to_rational());
    if (!n_part.is_zero()) r += Expr(n_part.to_rational()) * n;
    if (!inv_part.is_zero()) r += Expr(inv_part.to_rational()) * pow(n, Exponent(-1));
    return r;
}

namespace {

std::optional<Frac> to_frac(const Rational& r) {
    if (!mpz_fits_slong_p(r.numerator().get_mpz_t()) || !mpz_fits_slong_p(r.denominator().get_mpz_t()))
        return std::nullopt;
    return Frac(mpz_get_si(r.numerator().get_mpz_t()), mpz_get_si(r.denominator().get_mpz_t()));
}

}  // namespace

std::optional<Exponent> Exponent::from_expr(const Expr& e) {
    Exponent r(0);
    Atom n = symbol_atom(exponent_parameter());
    for (const Term& t : e.terms()) {
        auto f = to_frac(t.coef);
        if (!f) return std::nullopt;
        if (t.mono.empty()) {
            r.constant = r.constant + *f;
        } else if (t.mono.size() == 1 && t.mono[0].first == n && t.mono[0].second == Exponent(1)) {
            r.n_part = r.n_part + *f;
        } else if (t.mono.size() == 1 && t.mono[0].first == n && t.mono[0].second == Exponent(-1)) {
            r.inv_part = r.inv_part + *f;
        } else {
            return std::nullopt;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Atom interning

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

bool same_atom(const AtomData& a, const AtomData& b) {
    return a.kind == b.kind && a.symbol == b.symbol && a.orders == b.orders && a.number == b.number && a.arg == b.arg;
}

struct AtomTable {
    std::mutex mutex;
    std::deque<AtomData> storage;
    std::unordered_multimap<std::size_t, const AtomData*> index;

    Atom intern(AtomData d) {
        std::size_t h = std::hash<int>{}(static_cast<int>(d.kind));
        h = mix(h, std::hash<const void*>{}(d.symbol));
        for (int o : d.orders) h = mix(h, static_cast<std::size_t>(o));
        h = mix(h, d.number.hash());
        h = mix(h, d.arg.hash());
        d.hash = h;
        std::lock_guard lock(mutex);
        auto [lo, hi] = index.equal_range(h);
        for (auto it = lo; it != hi; ++it)
            if (same_atom(*it->second, d)) return it->second;
        storage.push_back(std::move(d));
        const AtomData* p = &storage.back();
        index.emplace(h, p);
        return p;
    }
};

AtomTable& atom_table() {
    static AtomTable t;
    return t;
}

Atom exp_atom(const Expr& arg) {
    AtomData d;
    d.kind = AtomKind::Exp;
    d.arg = arg;
    return atom_table().intern(std::move(d));
}

Atom tanh_atom(const Expr& arg) {
    AtomData d;
    d.kind = AtomKind::Tanh;
    d.arg = arg;
    return atom_table().intern(std::move(d));
}

Atom number_atom(const Rational& base) {
    AtomData d;
    d.kind = AtomKind::Number;
    d.number = base;
    return atom_table().intern(std::move(d));
}

}  // namespace

int AtomData::order() const {
    int s = 0;
    for (int o : orders) s += o;
    return s;
}

bool AtomData::is_coordinate_free() const {
    switch (kind) {
        case AtomKind::Symbol: return symbol->kind == SymbolKind::Parameter;
        case AtomKind::Number: return true;
        case AtomKind::Exp:
        case AtomKind::Tanh:
            for (const Term& t : arg.terms())
                for (const auto& [a, e] : t.mono)
                    if (!a->is_coordinate_free()) return false;
            return true;
        default: return false;
    }
}

Atom symbol_atom(const Symbol* s) {
    if (s->kind == SymbolKind::Dependent) return jet_atom(s, std::vector<int>(s->args.size(), 0));
    if (s->kind == SymbolKind::Function) return function_atom(s, std::vector<int>(s->args.size(), 0));
    AtomData d;
    d.kind = AtomKind::Symbol;
    d.symbol = s;
    return atom_table().intern(std::move(d));
}

Atom jet_atom(const Symbol* dependent, std::vector<int> orders) {
    if (dependent->kind != SymbolKind::Dependent)
        throw Error(ErrorKind::Declaration, "'" + dependent->name + "' is not a dependent variable");
    if (orders.size() != dependent->args.size())
        throw Error(ErrorKind::Declaration, "jet index arity mismatch for '" + dependent->name + "'");
    for (int o : orders)
        if (o < 0) throw Error(ErrorKind::Domain, "negative derivative order");
    AtomData d;
    d.kind = AtomKind::Jet;
    d.symbol = dependent;
    d.orders = std::move(orders);
    return atom_table().intern(std::move(d));
}

Atom function_atom(const Symbol* f, std::vector<int> orders) {
    if (f->kind != SymbolKind::Function) throw Error(ErrorKind::Declaration, "'" + f->name + "' is not a function");
    if (orders.size() != f->args.size())
        throw Error(ErrorKind::Declaration, "derivative index arity mismatch for '" + f->name + "'");
    for (int o : orders)
        if (o < 0) throw Error(ErrorKind::Domain, "negative derivative order");
    AtomData d;
    d.kind = AtomKind::Function;
    d.symbol = f;
    d.orders = std::move(orders);
    return atom_table().intern(std::move(d));
}

// ---------------------------------------------------------------------------
// Ordering

namespace {

int atom_rank(Atom a) {
    switch (a->kind) {
        case AtomKind::Symbol: return a->symbol->kind == SymbolKind::Parameter ? 1 : 0;
        case AtomKind::Number: return 2;
        case AtomKind::Jet: return 3;
        case AtomKind::Function: return 4;
        case AtomKind::Exp: return 5;
        case AtomKind::Tanh: return 6;
    }
    return 7;
}

template <class T>
int three_way(const T& a, const T& b) {
    return a < b ? -1 : (b < a ? 1 : 0);
}

int compare_exprs(const Expr& a, const Expr& b) {
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    std::size_t n = std::min(ta.size(), tb.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare_monomials(ta[i].mono, tb[i].mono); c != 0) return c;
        if (int c = three_way(ta[i].coef, tb[i].coef); c != 0) return c;
    }
    return three_way(ta.size(), tb.size());
}

Frac degree(const Monomial& m) {
    Frac d;
    for (const auto& f : m) d = d + f.second.constant;
    return d;
}

}  // namespace

int compare_atoms(Atom a, Atom b) {
    if (a == b) return 0;
    if (int c = three_way(atom_rank(a), atom_rank(b)); c != 0) return c;
    switch (a->kind) {
        case AtomKind::Symbol: return a->symbol->name.compare(b->symbol->name) < 0 ? -1 : 1;
        case AtomKind::Number: return three_way(a->number, b->number);
        case AtomKind::Jet:
        case AtomKind::Function: {
            if (int c = a->symbol->name.compare(b->symbol->name); c != 0) return c < 0 ? -1 : 1;
            if (int c = three_way(a->order(), b->order()); c != 0) return c;
            // larger count in an earlier argument sorts first: u_t < u_x < u_y
            return -three_way(a->orders, b->orders);
        }
        case AtomKind::Exp:
        case AtomKind::Tanh: return compare_exprs(a->arg, b->arg);
    }
    return 0;
}

int compare_exponents(const Exponent& a, const Exponent& b) {
    auto c = a <=> b;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int compare_monomials(const Monomial& a, const Monomial& b) {
    if (int c = three_way(degree(a), degree(b)); c != 0) return c;
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare_atoms(a[i].first, b[i].first); c != 0) return c;
        if (int c = compare_exponents(a[i].second, b[i].second); c != 0) return c;
    }
    return three_way(a.size(), b.size());
}

// ---------------------------------------------------------------------------
// Monomial canonicalisation

namespace {

void sort_factors(Monomial& m) {
    std::sort(m.begin(), m.end(), [](const Factor& x, const Factor& y) { return compare_atoms(x.first, y.first) < 0; });
}

void merge_sorted_factors(Monomial& m) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (out > 0 && m[out - 1].first == m[i].first) {
            m[out - 1].second = m[out - 1].second + m[i].second;
        } else {
            m[out++] = m[i];
        }
    }
    m.resize(out);
    std::erase_if(m, [](const Factor& f) { return f.second.is_zero(); });
}

bool has_special(const Monomial& m) {
    for (const auto& f : m)
        if (f.first->kind == AtomKind::Number || f.first->kind == AtomKind::Exp) return true;
    return false;
}

/// Sorted, merged factors -> canonical: numbers fold their integer exponent
/// part into the coefficient and all exp factors collapse into one exp(sum).
void finish_special(Monomial& m, Rational& coef) {
    if (!has_special(m)) return;
    Expr exp_arg;
    bool had_exp = false;
    Monomial rest;
    rest.reserve(m.size());
    for (auto& f : m) {
        if (f.first->kind == AtomKind::Number) {
            Exponent e = f.second;
            std::int64_t k = e.constant.floor();
            if (k != 0) {
                coef *= f.first->number.pow(static_cast<long>(k));
                e.constant = e.constant - Frac(k);
            }
            if (!e.is_zero()) rest.emplace_back(f.first, e);
        } else if (f.first->kind == AtomKind::Exp) {
            had_exp = true;
            if (f.second.is_one())
                exp_arg += f.first->arg;
            else
                exp_arg += f.second.to_expr() * f.first->arg;
        } else {
            rest.push_back(f);
        }
    }
    if (had_exp && !exp_arg.is_zero()) {
        rest.emplace_back(exp_atom(exp_arg), Exponent(1));
        sort_factors(rest);
    }
    m = std::move(rest);
}

void canonicalize(Monomial& m, Rational& coef) {
    sort_factors(m);
    merge_sorted_factors(m);
    finish_special(m, coef);
}

/// Product of two canonical monomials.
Monomial multiply_monomials(const Monomial& a, const Monomial& b, Rational& coef) {
    Monomial r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int c = compare_atoms(a[i].first, b[j].first);
        if (c < 0) {
            r.push_back(a[i++]);
        } else if (c > 0) {
            r.push_back(b[j++]);
        } else {
            Exponent e = a[i].second + b[j].second;
            if (!e.is_zero()) r.emplace_back(a[i].first, e);
            ++i;
            ++j;
        }
    }
    for (; i < a.size(); ++i) r.push_back(a[i]);
    for (; j < b.size(); ++j) r.push_back(b[j]);
    finish_special(r, coef);
    return r;
}

struct Accumulator {
    std::vector<Term> terms;

    void add(const Expr& e) { terms.insert(terms.end(), e.terms().begin(), e.terms().end()); }
    void add(Term t) { terms.push_back(std::move(t)); }
    Expr finish() { return Expr::from_terms(std::move(terms)); }
};

}  // namespace

// ---------------------------------------------------------------------------
// Expr arithmetic

Expr::Expr(const Rational& c) {
    if (!c.is_zero()) terms_.push_back(Term{{}, c});
}

Expr Expr::atom(Atom a) {
    Monomial m{{a, Exponent(1)}};
    Rational c(1);
    finish_special(m, c);
    return Expr::monomial(std::move(m), c);
}

Expr Expr::symbol(const Symbol* s) { return atom(symbol_atom(s)); }

Expr Expr::monomial(Monomial m, Rational coef) {
    Expr e;
    if (!coef.is_zero()) e.terms_.push_back(Term{std::move(m), std::move(coef)});
    return e;
}

Expr Expr::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return compare_monomials(a.mono, b.mono) < 0; });
    Expr e;
    for (auto& t : terms) {
        if (!e.terms_.empty() && e.terms_.back().mono == t.mono) {
            e.terms_.back().coef += t.coef;
            if (e.terms_.back().coef.is_zero()) e.terms_.pop_back();
        } else if (!t.coef.is_zero()) {
            e.terms_.push_back(std::move(t));
        }
    }
    return e;
}

std::optional<Rational> Expr::as_rational() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_[0].mono.empty()) return terms_[0].coef;
    return std::nullopt;
}

Expr Expr::operator-() const {
    Expr r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
}

Expr operator+(const Expr& a, const Expr& b) {
    Expr r;
    const auto& x = a.terms_;
    const auto& y = b.terms_;
    r.terms_.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        int c = compare_monomials(x[i].mono, y[j].mono);
        if (c < 0) {
            r.terms_.push_back(x[i++]);
        } else if (c > 0) {
            r.terms_.push_back(y[j++]);
        } else {
            Rational s = x[i].coef + y[j].coef;
            if (!s.is_zero()) r.terms_.push_back(Term{x[i].mono, s});
            ++i;
            ++j;
        }
    }
    for (; i < x.size(); ++i) r.terms_.push_back(x[i]);
    for (; j < y.size(); ++j) r.terms_.push_back(y[j]);
    return r;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return Expr();
    if (auto c = b.as_rational()) {
        Expr r = a;
        for (auto& t : r.terms_) t.coef *= *c;
        return r;
    }
    if (auto c = a.as_rational()) return b * a;
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const Term& ta : a.terms_) {
        for (const Term& tb : b.terms_) {
            Rational coef = ta.coef * tb.coef;
            Monomial m = multiply_monomials(ta.mono, tb.mono, coef);
            out.push_back(Term{std::move(m), std::move(coef)});
        }
    }
    return Expr::from_terms(std::move(out));
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_zero()) throw Error(ErrorKind::Domain, "division by zero");
    if (!b.is_monomial()) throw Error(ErrorKind::NonMonomialDivisor, "divisor has " + std::to_string(b.size()) + " terms");
    return a * pow(b, Exponent(-1));
}

Expr& Expr::operator+=(const Expr& o) { return *this = *this + o; }
Expr& Expr::operator-=(const Expr& o) { return *this = *this - o; }
Expr& Expr::operator*=(const Expr& o) { return *this = *this * o; }
Expr& Expr::operator/=(const Expr& o) { return *this = *this / o; }

std::size_t Expr::hash() const {
    std::size_t h = terms_.size();
    for (const Term& t : terms_) {
        h = mix(h, t.coef.hash());
        for (const auto& [a, e] : t.mono) {
            h = mix(h, std::hash<const void*>{}(a));
            h = mix(h, static_cast<std::size_t>(e.constant.num * 31 + e.constant.den));
            h = mix(h, static_cast<std::size_t>(e.n_part.num * 37 + e.inv_part.num));
        }
    }
    return h;
}

// ---------------------------------------------------------------------------
// Powers and elementary functions

Expr number_power(const Rational& base, const Exponent& e) {
    if (e.is_zero()) return Expr(1);
    if (base.is_zero()) {
        if (e.is_symbolic()) throw Error(ErrorKind::Domain, "zero raised to a symbolic power");
        if (e.constant <= Frac(0)) throw Error(ErrorKind::Domain, "zero raised to a non-positive power");
        return Expr();
    }
    if (base.is_one()) return Expr(1);
    if (e.is_integer()) return Expr(base.pow(static_cast<long>(e.constant.num)));
    Monomial m{{number_atom(base), e}};
    Rational c(1);
    finish_special(m, c);
    return Expr::monomial(std::move(m), c);
}

namespace {

Expr monomial_pow(const Term& t, const Exponent& e) {
    Expr coef_part = number_power(t.coef, e);
    Monomial m;
    m.reserve(t.mono.size());
    for (const auto& [a, k] : t.mono) {
        Exponent p = k * e;
        if (!p.is_zero()) m.emplace_back(a, p);
    }
    Rational c(1);
    canonicalize(m, c);
    return coef_part * Expr::monomial(std::move(m), c);
}

}  // namespace

Expr pow(const Expr& base, const Exponent& e) {
    if (e.is_zero()) return Expr(1);
    if (base.is_zero()) return number_power(Rational(0), e);
    if (base.is_monomial()) return monomial_pow(base.terms()[0], e);
    if (!e.is_integer())
        throw Error(ErrorKind::SymbolicPowerSubstitution, "non-integer power of a " + std::to_string(base.size()) + "-term sum");
    std::int64_t k = e.constant.num;
    if (k < 0) throw Error(ErrorKind::NonMonomialDivisor, "negative power of a sum");
    Expr result(1);
    Expr sq = base;
    while (k > 0) {
        if (k & 1) result *= sq;
        k >>= 1;
        if (k > 0) sq *= sq;
    }
    return result;
}

Expr exp_of(const Expr& arg) {
    if (arg.is_zero()) return Expr(1);
    return Expr::monomial({{exp_atom(arg), Exponent(1)}});
}

Expr tanh_of(const Expr& arg) {
    if (arg.is_zero()) return Expr();
    if (arg.terms().front().coef.sign() < 0) return -Expr::monomial({{tanh_atom(-arg), Exponent(1)}});
    return Expr::monomial({{tanh_atom(arg), Exponent(1)}});
}

// ---------------------------------------------------------------------------
// Differentiation

Expr derive(const Expr& e, const AtomDerivative& d) {
    std::unordered_map<Atom, Expr> cache;
    std::function<const Expr&(Atom)> datom = [&](Atom a) -> const Expr& {
        if (auto it = cache.find(a); it != cache.end()) return it->second;
        Expr r;
        if (a->kind == AtomKind::Exp) {
            Expr inner = derive(a->arg, d);
            if (!inner.is_zero()) r = Expr::monomial({{a, Exponent(1)}}) * inner;
        } else if (a->kind == AtomKind::Tanh) {
            Expr inner = derive(a->arg, d);
            if (!inner.is_zero()) r = (Expr(1) - Expr::monomial({{a, Exponent(2)}})) * inner;
        } else if (a->kind != AtomKind::Number) {
            r = d(a);
        }
        return cache.emplace(a, std::move(r)).first->second;
    };

    Accumulator acc;
    for (const Term& t : e.terms()) {
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            const auto& [a, k] = t.mono[i];
            const Expr& da = datom(a);
            if (da.is_zero()) continue;
            Monomial rest = t.mono;
            Exponent km1 = k - Exponent(1);
            if (km1.is_zero())
                rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
            else
                rest[i].second = km1;
            Expr piece = Expr::monomial(std::move(rest), t.coef);
            if (!k.is_one()) piece = piece * k.to_expr();
            acc.add(piece * da);
        }
    }
    return acc.finish();
}

namespace {

Expr partial_atom(Atom a, Atom s) {
    if (a == s) return Expr(1);
    if (a->kind != AtomKind::Function) return Expr();
    Expr r;
    const Symbol* f = a->symbol;
    for (std::size_t p = 0; p < f->args.size(); ++p) {
        if (symbol_atom(f->args[p]) != s) continue;
        std::vector<int> o = a->orders;
        ++o[p];
        r += Expr::atom(function_atom(f, std::move(o)));
    }
    return r;
}

}  // namespace

Expr diff(const Expr& e, Atom s) {
    return derive(e, [s](Atom a) { return partial_atom(a, s); });
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

bool arg_mentions(Atom a, const std::map<Atom, Expr, AtomLess>& repl) {
    if (a->kind != AtomKind::Exp && a->kind != AtomKind::Tanh) return false;
    for (const Term& t : a->arg.terms())
        for (const auto& [b, k] : t.mono)
            if (repl.count(b) || arg_mentions(b, repl)) return true;
    return false;
}

}  // namespace

Expr substitute(const Expr& e, const std::map<Atom, Expr, AtomLess>& repl) {
    if (repl.empty()) return e;
    Atom n_atom = symbol_atom(exponent_parameter());
    const Expr* n_value = nullptr;
    std::optional<Frac> n_frac;
    if (auto it = repl.find(n_atom); it != repl.end()) {
        n_value = &it->second;
        if (auto r = n_value->as_rational()) {
            if (r->is_zero()) throw Error(ErrorKind::Domain, "exponent parameter bound to zero");
            n_frac = Frac(mpz_get_si(r->numerator().get_mpz_t()), mpz_get_si(r->denominator().get_mpz_t()));
        }
    }

    Accumulator acc;
    for (const Term& t : e.terms()) {
        bool touched = false;
        for (const auto& [a, k] : t.mono) {
            if (repl.count(a) || arg_mentions(a, repl) || (n_value && k.is_symbolic())) {
                touched = true;
                break;
            }
        }
        if (!touched) {
            acc.add(t);
            continue;
        }
        // a factor replaced by zero kills the term before any other factor is inverted
        bool zero = false;
        for (const auto& [a, k0] : t.mono) {
            auto it = repl.find(a);
            if (it != repl.end() && it->second.is_zero() && !k0.is_symbolic() && k0.constant > Frac(0)) {
                zero = true;
                break;
            }
        }
        if (zero) continue;
        std::vector<Expr> rebuilt;
        rebuilt.reserve(t.mono.size());
        Monomial plain;
        for (const auto& [a, k0] : t.mono) {
            Exponent k = k0;
            if (n_value && k.is_symbolic()) {
                if (!n_frac)
                    throw Error(ErrorKind::SymbolicPowerSubstitution,
                                "exponent parameter replaced by a non-constant inside an exponent");
                k = Exponent(k.bind(*n_frac), Frac(), Frac());
            }
            if (auto it = repl.find(a); it != repl.end()) {
                rebuilt.push_back(pow(it->second, k));
            } else if (arg_mentions(a, repl)) {
                Expr arg = substitute(a->arg, repl);
                rebuilt.push_back(a->kind == AtomKind::Exp ? pow(exp_of(arg), k) : pow(tanh_of(arg), k));
            } else {
                if (!k.is_zero()) plain.emplace_back(a, k);
            }
        }
        Rational c = t.coef;
        canonicalize(plain, c);
        Expr prod = Expr::monomial(std::move(plain), c);
        for (const Expr& r : rebuilt) {
            prod = prod * r;
            if (prod.is_zero()) break;
        }
        acc.add(prod);
    }
    return acc.finish();
}

Expr substitute(const Expr& e, Atom target, const Expr& replacement) {
    std::map<Atom, Expr, AtomLess> m;
    m.emplace(target, replacement);
    return substitute(e, m);
}

Expr substitute_function(const Expr& e, const Symbol* f, const Expr& replacement) {
    std::map<Atom, Expr, AtomLess> m;
    std::map<std::vector<int>, Expr> derivs;
    derivs.emplace(std::vector<int>(f->args.size(), 0), replacement);
    std::function<const Expr&(const std::vector<int>&)> deriv = [&](const std::vector<int>& o) -> const Expr& {
        if (auto it = derivs.find(o); it != derivs.end()) return it->second;
        std::size_t p = 0;
        while (o[p] == 0) ++p;
        std::vector<int> lower = o;
        --lower[p];
        Expr r = diff(deriv(lower), symbol_atom(f->args[p]));
        return derivs.emplace(o, std::move(r)).first->second;
    };
    for (Atom a : atoms_of(e))
        if (a->kind == AtomKind::Function && a->symbol == f) m.emplace(a, deriv(a->orders));
    return substitute(e, m);
}

// ---------------------------------------------------------------------------
// Inspection

Collected collect(const Expr& e, const AtomSet& atoms) {
    std::map<Monomial, std::vector<Term>, MonomialLess> parts;
    for (const Term& t : e.terms()) {
        Monomial key, rest;
        for (const auto& f : t.mono) (atoms.count(f.first) ? key : rest).push_back(f);
        parts[std::move(key)].push_back(Term{std::move(rest), t.coef});
    }
    Collected out;
    for (auto& [k, v] : parts) {
        Expr value = Expr::from_terms(std::move(v));
        if (!value.is_zero()) out.emplace(k, std::move(value));
    }
    return out;
}

Expr expand(const Collected& c) {
    Accumulator acc;
    for (const auto& [k, v] : c) acc.add(Expr::monomial(k) * v);
    return acc.finish();
}

bool is_zero(const Expr& e) { return e.is_zero(); }

namespace {

void gather_atoms(const Expr& e, AtomSet& out) {
    for (const Term& t : e.terms())
        for (const auto& [a, k] : t.mono) {
            if (out.insert(a).second && (a->kind == AtomKind::Exp || a->kind == AtomKind::Tanh))
                gather_atoms(a->arg, out);
        }
}

}  // namespace

AtomSet atoms_of(const Expr& e) {
    AtomSet s;
    gather_atoms(e, s);
    return s;
}

bool contains(const Expr& e, Atom a) { return atoms_of(e).count(a) > 0; }

bool depends_on_symbol(const Expr& e, const Symbol* s) {
    for (Atom a : atoms_of(e)) {
        if (a->symbol == s) return true;
        if (a->kind == AtomKind::Function && a->symbol->arg_index(s) >= 0) return true;
    }
    return false;
}

std::optional<Exponent> max_power(const Expr& e, Atom a) {
    std::optional<Exponent> best;
    for (const Term& t : e.terms())
        for (const auto& [b, k] : t.mono)
            if (b == a && (!best || k > *best)) best = k;
    return best;
}

Expr coefficient(const Expr& e, Atom a, const Exponent& k) {
    std::vector<Term> out;
    for (const Term& t : e.terms()) {
        auto it = std::find_if(t.mono.begin(), t.mono.end(), [a](const Factor& f) { return f.first == a; });
        if (it == t.mono.end()) {
            if (k.is_zero()) out.push_back(t);
            continue;
        }
        if (it->second != k) continue;
        Monomial rest = t.mono;
        rest.erase(rest.begin() + (it - t.mono.begin()));
        out.push_back(Term{std::move(rest), t.coef});
    }
    return Expr::from_terms(std::move(out));
}

// ---------------------------------------------------------------------------
// Evaluation

Rational evaluate_exact(const Expr& e, const std::map<Atom, Rational, AtomLess>& values) {
    Rational sum(0);
    for (const Term& t : e.terms()) {
        Rational p = t.coef;
        for (const auto& [a, k] : t.mono) {
            if (!k.is_integer()) throw Error(ErrorKind::Domain, "exact evaluation needs integer exponents");
            auto it = values.find(a);
            if (it == values.end()) throw Error(ErrorKind::UnboundParameter, "no value for " + to_string(a));
            p *= it->second.pow(static_cast<long>(k.constant.num));
        }
        sum += p;
    }
    return sum;
}

namespace {

double ipow(double b, std::int64_t k) {
    bool neg = k < 0;
    std::uint64_t m = static_cast<std::uint64_t>(neg ? -k : k);
    double r = 1.0;
    while (m > 0) {
        if (m & 1u) r *= b;
        b *= b;
        m >>= 1u;
    }
    return neg ? 1.0 / r : r;
}

}  // namespace

double evaluate(const Expr& e, const std::map<Atom, double, AtomLess>& values) {
    const Atom n_atom = symbol_atom(exponent_parameter());
    double sum = 0.0;
    for (const Term& t : e.terms()) {
        double p = t.coef.to_double();
        for (const auto& [a, k] : t.mono) {
            double base;
            switch (a->kind) {
                case AtomKind::Number: base = a->number.to_double(); break;
                case AtomKind::Exp: base = std::exp(evaluate(a->arg, values)); break;
                case AtomKind::Tanh: base = std::tanh(evaluate(a->arg, values)); break;
                default: {
                    auto it = values.find(a);
                    if (it == values.end()) throw Error(ErrorKind::UnboundParameter, "no value for " + to_string(a));
                    base = it->second;
                }
            }
            if (k.is_symbolic()) {
                auto it = values.find(n_atom);
                if (it == values.end()) throw Error(ErrorKind::UnboundParameter, "no value for exponent parameter n");
                double x = k.evaluate(it->second);
                double r = std::round(x);
                p *= (std::abs(x - r) < 1e-12) ? ipow(base, static_cast<std::int64_t>(r)) : std::pow(base, x);
            } else if (k.constant.is_integer()) {
                p *= ipow(base, k.constant.num);
            } else {
                p *= std::pow(base, k.constant.to_double());
            }
        }
        sum += p;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Raw trees

RawPtr Raw::num(Rational v) {
    auto r = std::make_shared<Raw>();
    r->kind = Kind::Number;
    r->number = std::move(v);
    return r;
}

RawPtr Raw::leaf(liesym::Atom a) {
    auto r = std::make_shared<Raw>();
    r->kind = Kind::Atom;
    r->atom = a;
    return r;
}

RawPtr Raw::node(Kind k, std::vector<RawPtr> children) {
    auto r = std::make_shared<Raw>();
    r->kind = k;
    r->children = std::move(children);
    return r;
}

Expr normalize(const Raw& r) {
    switch (r.kind) {
        case Raw::Kind::Number: return Expr(r.number);
        case Raw::Kind::Atom: return Expr::atom(r.atom);
        case Raw::Kind::Sum: {
            Accumulator acc;
            for (const auto& c : r.children) acc.add(normalize(*c));
            return acc.finish();
        }
        case Raw::Kind::Product: {
            Expr p(1);
            for (const auto& c : r.children) p = p * normalize(*c);
            return p;
        }
        case Raw::Kind::Quotient: return normalize(*r.children.at(0)) / normalize(*r.children.at(1));
        case Raw::Kind::Negate: return -normalize(*r.children.at(0));
        case Raw::Kind::Power: {
            Expr ex = normalize(*r.children.at(1));
            auto k = Exponent::from_expr(ex);
            if (!k) throw Error(ErrorKind::SymbolicPowerSubstitution, "exponent is not affine in n and 1/n: " + to_string(ex));
            return pow(normalize(*r.children.at(0)), *k);
        }
        case Raw::Kind::ExpCall: return exp_of(normalize(*r.children.at(0)));
        case Raw::Kind::TanhCall: return tanh_of(normalize(*r.children.at(0)));
    }
    return Expr();
}

RawPtr to_raw(const Expr& e) {
    std::vector<RawPtr> sum;
    for (const Term& t : e.terms()) {
        std::vector<RawPtr> prod{Raw::num(t.coef)};
        for (const auto& [a, k] : t.mono) {
            RawPtr base;
            if (a->kind == AtomKind::Exp)
                base = Raw::node(Raw::Kind::ExpCall, {to_raw(a->arg)});
            else if (a->kind == AtomKind::Tanh)
                base = Raw::node(Raw::Kind::TanhCall, {to_raw(a->arg)});
            else if (a->kind == AtomKind::Number)
                base = Raw::num(a->number);
            else
                base = Raw::leaf(a);
            prod.push_back(Raw::node(Raw::Kind::Power, {base, to_raw(k.to_expr())}));
        }
        sum.push_back(Raw::node(Raw::Kind::Product, std::move(prod)));
    }
    return Raw::node(Raw::Kind::Sum, std::move(sum));
}

}  // namespace liesym
