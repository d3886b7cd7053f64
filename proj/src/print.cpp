#include <sstream>

#include "liesym/expr.hpp"

namespace liesym {

namespace {

std::string derivative_text(Atom a) {
    const Symbol* s = a->symbol;
    if (a->order() == 0) return s->name;
    std::string out = "D(" + s->name + ";";
    bool first = true;
    for (std::size_t p = 0; p < a->orders.size(); ++p)
        for (int k = 0; k < a->orders[p]; ++k) {
            if (!first) out += ",";
            out += s->args[p]->name;
            first = false;
        }
    return out + ")";
}

std::string exponent_text(const Exponent& e) {
    if (e.is_integer()) {
        if (e.constant.num < 0) return "(" + std::to_string(e.constant.num) + ")";
        return std::to_string(e.constant.num);
    }
    Expr ex = e.to_expr();
    if (ex.is_monomial() && ex.terms()[0].coef.is_one() && ex.terms()[0].mono.size() == 1 &&
        ex.terms()[0].mono[0].second.is_one())
        return to_string(ex);
    return "(" + to_string(ex) + ")";
}

std::string base_text(Atom a) {
    switch (a->kind) {
        case AtomKind::Number: {
            const Rational& b = a->number;
            if (b.is_integer() && b.sign() > 0) return b.str();
            return "(" + b.str() + ")";
        }
        case AtomKind::Exp: return "exp(" + to_string(a->arg) + ")";
        case AtomKind::Tanh: return "tanh(" + to_string(a->arg) + ")";
        default: return to_string(a);
    }
}

}  // namespace

std::string to_string(Atom a) {
    switch (a->kind) {
        case AtomKind::Symbol: return a->symbol->name;
        case AtomKind::Jet:
        case AtomKind::Function: return derivative_text(a);
        default: return base_text(a);
    }
}

std::string to_string(const Monomial& m) {
    std::string out;
    for (const auto& [a, e] : m) {
        if (!out.empty()) out += "*";
        out += base_text(a);
        if (!e.is_one()) out += "^" + exponent_text(e);
    }
    return out.empty() ? "1" : out;
}

std::string to_string(const Expr& e) {
    if (e.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const Term& t : e.terms()) {
        bool neg = t.coef.sign() < 0;
        Rational mag = t.coef.abs();
        if (first)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        first = false;
        if (t.mono.empty()) {
            out += mag.str();
        } else if (mag.is_one()) {
            out += to_string(t.mono);
        } else {
            out += mag.str() + "*" + to_string(t.mono);
        }
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

}  // namespace liesym
