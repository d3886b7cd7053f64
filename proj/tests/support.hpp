#pragma once

#include <random>
#include <string>
#include <vector>

#include "liesym/expr.hpp"
#include "liesym/jet.hpp"
#include "liesym/model.hpp"
#include "liesym/symmetry.hpp"

namespace testing {

using namespace liesym;

inline constexpr int kInstances = 120;

/// Symbols shared by the kernel tests: t, x, y; parameters a, b; u(t, x, y);
/// f(t), g(t).
struct Vars {
    const Symbol* t = declare_independent("t");
    const Symbol* x = declare_independent("x");
    const Symbol* y = declare_independent("y");
    const Symbol* a = declare_parameter("a");
    const Symbol* b = declare_parameter("b");
    const Symbol* u = declare_dependent("u", {t, x, y});
    const Symbol* f = declare_function("f", {t});
    const Symbol* g = declare_function("g", {t});
};

inline const Vars& vars() {
    static const Vars v;
    return v;
}

inline Expr ex(const std::string& text) {
    vars();
    return build_expr(*parse_expression(text));
}

inline Expr sym(const Symbol* s) { return Expr::symbol(s); }

/// Random expressions over a fixed pool of atoms.
class ExprGen {
public:
    explicit ExprGen(unsigned seed) : rng_(seed) {
        const Vars& v = vars();
        pool_ = {sym(v.t), sym(v.x), sym(v.y), sym(v.a), sym(v.b)};
    }

    void add_atoms(const std::vector<Expr>& extra) { pool_.insert(pool_.end(), extra.begin(), extra.end()); }

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::mt19937& rng() { return rng_; }

    Rational coefficient() {
        int num = uniform(-5, 5);
        if (num == 0) num = 1;
        return Rational(num, uniform(1, 3));
    }

    Expr atom() { return pool_[static_cast<std::size_t>(uniform(0, static_cast<int>(pool_.size()) - 1))]; }

    Expr monomial() {
        Expr m = Expr(coefficient());
        int factors = uniform(0, 3);
        for (int i = 0; i < factors; ++i) m *= pow(atom(), Exponent(uniform(1, 2)));
        return m;
    }

    Expr polynomial(int max_terms = 4) {
        Expr p;
        int terms = uniform(1, max_terms);
        for (int i = 0; i < terms; ++i) p += monomial();
        return p;
    }

    /// Raw tree with sums, products, powers, negations and monomial quotients.
    RawPtr raw(int depth) {
        if (depth == 0 || uniform(0, 3) == 0) {
            if (uniform(0, 2) == 0) return Raw::num(coefficient());
            return to_raw(atom());
        }
        switch (uniform(0, 4)) {
            case 0: return Raw::node(Raw::Kind::Sum, {raw(depth - 1), raw(depth - 1)});
            case 1: return Raw::node(Raw::Kind::Product, {raw(depth - 1), raw(depth - 1)});
            case 2: return Raw::node(Raw::Kind::Power, {raw(depth - 1), Raw::num(uniform(0, 3))});
            case 3: return Raw::node(Raw::Kind::Negate, {raw(depth - 1)});
            default: return Raw::node(Raw::Kind::Quotient, {raw(depth - 1), to_raw(monomial())});
        }
    }

private:
    std::mt19937 rng_;
    std::vector<Expr> pool_;
};

/// Random polynomial point field on (t, x, y, u).
inline VectorField random_field(ExprGen& gen, int degree_terms = 2) {
    const Vars& v = vars();
    VectorField X = zero_field(v.u);
    auto coef = [&] {
        Expr c;
        int terms = gen.uniform(0, degree_terms);
        for (int i = 0; i < terms; ++i) {
            Expr m = Expr(gen.coefficient());
            int factors = gen.uniform(0, 2);
            for (int k = 0; k < factors; ++k) {
                switch (gen.uniform(0, 4)) {
                    case 0: m *= sym(v.t); break;
                    case 1: m *= sym(v.x); break;
                    case 2: m *= sym(v.y); break;
                    case 3: m *= sym(v.u); break;
                    default: m *= sym(v.a); break;
                }
            }
            c += m;
        }
        return c;
    };
    for (auto& xi : X.xi) xi = coef();
    X.eta = coef();
    return X;
}

}  // namespace testing
