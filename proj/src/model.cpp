#include "liesym/model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "liesym/error.hpp"

namespace liesym {

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { Ident, Number, Sym, Newline, End };

struct Token {
    Tok kind;
    std::string text;
    SourcePos pos;
    bool space_before = false;
};

std::string where(SourcePos p) { return "line " + std::to_string(p.line) + ", col " + std::to_string(p.col); }

[[noreturn]] void syntax(SourcePos p, const std::string& msg) { throw Error(ErrorKind::Syntax, where(p) + ": " + msg); }

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    int line = 1, col = 1, depth = 0;
    bool space = true;
    std::size_t i = 0;
    auto advance = [&](std::size_t k) {
        for (std::size_t j = 0; j < k; ++j, ++i) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') advance(1);
            continue;
        }
        if (c == '\n') {
            if (depth == 0) out.push_back({Tok::Newline, "\\n", {line, col}, space});
            advance(1);
            space = true;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            space = true;
            continue;
        }
        SourcePos p{line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i), p, space});
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j < s.size() && s[j] == '.' && j + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
                ++j;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            }
            if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
                if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
                    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                    j = k;
                }
            }
            out.push_back({Tok::Number, s.substr(i, j - i), p, space});
            advance(j - i);
        } else if (std::string("+-*/^()[]{},;=").find(c) != std::string::npos) {
            if (c == '(' || c == '[') ++depth;
            if ((c == ')' || c == ']') && depth > 0) --depth;
            out.push_back({Tok::Sym, std::string(1, c), p, space});
            advance(1);
        } else {
            syntax(p, std::string("unexpected character '") + c + "'");
        }
        space = false;
    }
    out.push_back({Tok::End, "end of input", {line, col}, true});
    return out;
}

Rational parse_number(const std::string& text, SourcePos p) {
    std::string digits;
    long scale = 0;
    std::size_t i = 0;
    bool frac = false;
    for (; i < text.size() && text[i] != 'e' && text[i] != 'E'; ++i) {
        if (text[i] == '.') {
            frac = true;
            continue;
        }
        digits += text[i];
        if (frac) ++scale;
    }
    long exp10 = 0;
    if (i < text.size()) {
        try {
            exp10 = std::stol(text.substr(i + 1));
        } catch (const std::exception&) {
            syntax(p, "bad exponent in '" + text + "'");
        }
    }
    mpz_class num(digits, 10);
    long shift = exp10 - scale;
    mpz_class ten;
    mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    if (shift >= 0) return Rational(mpq_class(num * ten));
    return Rational(mpq_class(num, ten));
}

// ---------------------------------------------------------------------------
// Parser

const std::set<std::string> kBlockKinds{"pde", "field", "ansatz", "ode", "run", "solution"};
const std::set<std::string> kDeclKinds{"indep", "param", "dep", "func", "reduced"};
const std::set<std::string> kBindingKeys{"xi", "eta", "new", "rule", "inverse", "assume", "set", "value"};
const std::set<std::string> kListKeys{"const", "columns", "ic", "span", "ode", "method", "solve", "var", "tol", "step", "initial"};

std::string join(const std::set<std::string>& s) {
    std::string out;
    for (const auto& x : s) out += (out.empty() ? "" : ", ") + x;
    return out;
}

NodePtr make(Node::Kind k, std::string text, std::vector<NodePtr> kids, SourcePos p) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->text = std::move(text);
    n->kids = std::move(kids);
    n->pos = p;
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(lex(text)) {}

    ModelDocument document() {
        ModelDocument doc;
        while (true) {
            skip_newlines();
            const Token& t = peek();
            if (t.kind == Tok::End) break;
            if (t.kind != Tok::Ident) syntax(t.pos, "expected a declaration or block, found '" + t.text + "'");
            if (kDeclKinds.count(t.text)) {
                declaration(doc);
            } else if (kBlockKinds.count(t.text)) {
                doc.blocks.push_back(block());
            } else {
                syntax(t.pos, "expected one of {" + join(kDeclKinds) + ", " + join(kBlockKinds) + "}, found '" + t.text + "'");
            }
        }
        return doc;
    }

    NodePtr lone_expression() {
        skip_newlines();
        NodePtr e = expr();
        skip_newlines();
        if (peek().kind != Tok::End) syntax(peek().pos, "unexpected '" + peek().text + "' after expression");
        return e;
    }

private:
    std::vector<Token> toks_;
    std::size_t i_ = 0;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
    const Token& next() { return toks_[std::min(i_++, toks_.size() - 1)]; }
    bool is_sym(const std::string& s, std::size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
    void skip_newlines() {
        while (peek().kind == Tok::Newline) ++i_;
    }
    void expect_sym(const std::string& s) {
        if (!is_sym(s)) syntax(peek().pos, "expected '" + s + "', found '" + peek().text + "'");
        ++i_;
    }
    std::string ident(const std::string& what) {
        if (peek().kind != Tok::Ident) syntax(peek().pos, "expected " + what + ", found '" + peek().text + "'");
        return next().text;
    }
    /// Glues adjacent tokens (no whitespace between) into one word: du-field, adaptive-rk45, -0.5.
    std::string word(const std::string& what) {
        const Token& first = peek();
        if (first.kind == Tok::End || first.kind == Tok::Newline || is_sym(",") || is_sym(";") || is_sym("{") || is_sym("}"))
            syntax(first.pos, "expected " + what + ", found '" + first.text + "'");
        std::string w = next().text;
        while (!peek().space_before && peek().kind != Tok::End && peek().kind != Tok::Newline && !is_sym(",") &&
               !is_sym(";") && !is_sym("{") && !is_sym("}"))
            w += next().text;
        return w;
    }

    void declaration(ModelDocument& doc) {
        Token kw = next();
        do {
            Declaration d;
            d.kind = kw.text;
            d.pos = peek().pos;
            d.name = ident("a symbol name");
            if (d.kind == "dep" || d.kind == "func") {
                expect_sym("(");
                do d.args.push_back(ident("an argument name"));
                while (is_sym(",") && (++i_, true));
                expect_sym(")");
            }
            doc.declarations.push_back(std::move(d));
        } while (is_sym(",") && (++i_, true));
        end_of_statement();
    }

    void end_of_statement() {
        if (peek().kind == Tok::Newline || is_sym(";")) {
            ++i_;
            return;
        }
        if (peek().kind == Tok::End || is_sym("}")) return;
        syntax(peek().pos, "expected end of statement, found '" + peek().text + "'");
    }

    Block block() {
        Block b;
        b.pos = peek().pos;
        b.kind = next().text;
        b.name = word("a block name");
        skip_newlines();
        expect_sym("{");
        while (true) {
            while (peek().kind == Tok::Newline || is_sym(";")) ++i_;
            if (is_sym("}")) {
                ++i_;
                break;
            }
            if (peek().kind == Tok::End) syntax(peek().pos, "unterminated block '" + b.name + "'");
            b.clauses.push_back(clause());
            end_of_statement();
        }
        return b;
    }

    Clause clause() {
        Clause c;
        c.pos = peek().pos;
        c.key = ident("a clause key");
        if (c.key == "eq") {
            c.lhs = expr();
            expect_sym("=");
            c.rhs = expr();
        } else if (kBindingKeys.count(c.key)) {
            c.qualifier = ident("the name bound by '" + c.key + "'");
            expect_sym("=");
            c.rhs = expr();
        } else if (kListKeys.count(c.key)) {
            c.items.push_back(word("a value"));
            while (is_sym(",")) {
                ++i_;
                c.items.push_back(word("a value"));
            }
        } else {
            syntax(c.pos, "unknown clause '" + c.key + "'; expected one of {eq, " + join(kBindingKeys) + ", " + join(kListKeys) + "}");
        }
        return c;
    }

    // expr := term (('+'|'-') term)*
    NodePtr expr() {
        NodePtr l = term();
        while (is_sym("+") || is_sym("-")) {
            SourcePos p = peek().pos;
            Node::Kind k = next().text == "+" ? Node::Kind::Add : Node::Kind::Sub;
            l = make(k, "", {l, term()}, p);
        }
        return l;
    }
    // term := unary (('*'|'/') unary)*
    NodePtr term() {
        NodePtr l = unary();
        while (is_sym("*") || is_sym("/")) {
            SourcePos p = peek().pos;
            Node::Kind k = next().text == "*" ? Node::Kind::Mul : Node::Kind::Div;
            l = make(k, "", {l, unary()}, p);
        }
        return l;
    }
    // unary := '-' unary | power
    NodePtr unary() {
        if (is_sym("-")) {
            SourcePos p = next().pos;
            return make(Node::Kind::Neg, "", {unary()}, p);
        }
        return power();
    }
    // power := primary ('^' unary)?
    NodePtr power() {
        NodePtr b = primary();
        if (is_sym("^")) {
            SourcePos p = next().pos;
            return make(Node::Kind::Pow, "", {b, unary()}, p);
        }
        return b;
    }
    std::vector<std::string> var_list(const std::string& close) {
        std::vector<std::string> vs;
        vs.push_back(ident("a variable"));
        while (is_sym(",")) {
            ++i_;
            vs.push_back(ident("a variable"));
        }
        expect_sym(close);
        return vs;
    }
    NodePtr primary() {
        const Token& t = peek();
        if (t.kind == Tok::Number) {
            ++i_;
            return make(Node::Kind::Number, t.text, {}, t.pos);
        }
        if (is_sym("(")) {
            ++i_;
            NodePtr e = expr();
            expect_sym(")");
            return e;
        }
        if (t.kind == Tok::Ident) {
            Token id = next();
            if (id.text == "D" && is_sym("(")) {
                ++i_;
                NodePtr inner = expr();
                expect_sym(";");
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Deriv;
                n->kids = {inner};
                n->vars = var_list(")");
                n->pos = id.pos;
                return n;
            }
            if (is_sym("(")) {
                ++i_;
                std::vector<NodePtr> args{expr()};
                while (is_sym(",")) {
                    ++i_;
                    args.push_back(expr());
                }
                expect_sym(")");
                return make(Node::Kind::Call, id.text, std::move(args), id.pos);
            }
            if (is_sym("[")) {
                ++i_;
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Jet;
                n->text = id.text;
                n->vars = var_list("]");
                n->pos = id.pos;
                return n;
            }
            return make(Node::Kind::Ident, id.text, {}, id.pos);
        }
        syntax(t.pos, "expected one of {number, identifier, '(', '-', D(...)}, found '" + t.text + "'");
    }
};

}  // namespace

bool same_tree(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.text != b.text || a.vars != b.vars || a.kids.size() != b.kids.size()) return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!same_tree(*a.kids[i], *b.kids[i])) return false;
    return true;
}

namespace {

bool same_opt_tree(const NodePtr& a, const NodePtr& b) {
    if (!a || !b) return !a && !b;
    return same_tree(*a, *b);
}

}  // namespace

bool same_document(const ModelDocument& a, const ModelDocument& b) {
    if (a.declarations.size() != b.declarations.size() || a.blocks.size() != b.blocks.size()) return false;
    for (std::size_t i = 0; i < a.declarations.size(); ++i) {
        const auto &x = a.declarations[i], &y = b.declarations[i];
        if (x.kind != y.kind || x.name != y.name || x.args != y.args) return false;
    }
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
        const auto &x = a.blocks[i], &y = b.blocks[i];
        if (x.kind != y.kind || x.name != y.name || x.clauses.size() != y.clauses.size()) return false;
        for (std::size_t j = 0; j < x.clauses.size(); ++j) {
            const auto &p = x.clauses[j], &q = y.clauses[j];
            if (p.key != q.key || p.qualifier != q.qualifier || p.items != q.items) return false;
            if (!same_opt_tree(p.lhs, q.lhs) || !same_opt_tree(p.rhs, q.rhs)) return false;
        }
    }
    return true;
}

const Block* ModelDocument::find(const std::string& kind, const std::string& name) const {
    for (const auto& b : blocks)
        if (b.kind == kind && b.name == name) return &b;
    return nullptr;
}

const Block* ModelDocument::find_any(const std::string& name) const {
    for (const auto& b : blocks)
        if (b.name == name) return &b;
    return nullptr;
}

ModelDocument parse_model(const std::string& text, const std::string& source) {
    try {
        return Parser(text).document();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Syntax) throw Error(ErrorKind::Syntax, source + ": " + e.detail());
        throw;
    }
}

NodePtr parse_expression(const std::string& text) { return Parser(text).lone_expression(); }

// ---------------------------------------------------------------------------
// Printer

namespace {

int level(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Add:
        case Node::Kind::Sub: return 1;
        case Node::Kind::Mul:
        case Node::Kind::Div: return 2;
        case Node::Kind::Neg: return 3;
        case Node::Kind::Pow: return 4;
        default: return 5;
    }
}

std::string wrap(const Node& n, int min_level) {
    std::string s = print_node(n);
    return level(n) < min_level ? "(" + s + ")" : s;
}

std::string join_vars(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
}

}  // namespace

std::string print_node(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Number:
        case Node::Kind::Ident: return n.text;
        case Node::Kind::Add: return wrap(*n.kids[0], 1) + " + " + wrap(*n.kids[1], 2);
        case Node::Kind::Sub: return wrap(*n.kids[0], 1) + " - " + wrap(*n.kids[1], 2);
        case Node::Kind::Mul: return wrap(*n.kids[0], 2) + "*" + wrap(*n.kids[1], 3);
        case Node::Kind::Div: return wrap(*n.kids[0], 2) + "/" + wrap(*n.kids[1], 3);
        case Node::Kind::Neg: return "-" + wrap(*n.kids[0], 3);
        case Node::Kind::Pow: return wrap(*n.kids[0], 5) + "^" + wrap(*n.kids[1], 3);
        case Node::Kind::Call: {
            std::string out = n.text + "(";
            for (std::size_t i = 0; i < n.kids.size(); ++i) out += (i ? ", " : "") + print_node(*n.kids[i]);
            return out + ")";
        }
        case Node::Kind::Deriv: return "D(" + print_node(*n.kids[0]) + "; " + join_vars(n.vars) + ")";
        case Node::Kind::Jet: return n.text + "[" + join_vars(n.vars) + "]";
    }
    return "";
}

std::string print_model(const ModelDocument& doc) {
    std::ostringstream out;
    for (const auto& d : doc.declarations) {
        out << d.kind << " " << d.name;
        if (d.kind == "dep" || d.kind == "func") {
            out << "(";
            for (std::size_t i = 0; i < d.args.size(); ++i) out << (i ? ", " : "") << d.args[i];
            out << ")";
        }
        out << "\n";
    }
    for (const auto& b : doc.blocks) {
        out << "\n" << b.kind << " " << b.name << " {\n";
        for (const auto& c : b.clauses) {
            out << "  " << c.key;
            if (c.key == "eq") {
                out << " " << print_node(*c.lhs) << " = " << print_node(*c.rhs);
            } else if (c.rhs) {
                out << " " << c.qualifier << " = " << print_node(*c.rhs);
            } else {
                for (std::size_t i = 0; i < c.items.size(); ++i) out << (i ? ", " : " ") << c.items[i];
            }
            out << "\n";
        }
        out << "}\n";
    }
    return out.str();
}

std::string print_expr(const Expr& e) { return to_string(e); }

// ---------------------------------------------------------------------------
// Resolution

namespace {

const Symbol* resolve_name(const std::string& name, SourcePos p) {
    if (name == exponent_parameter()->name) return exponent_parameter();
    const Symbol* s = find_symbol(name);
    if (!s)
        throw Error(ErrorKind::Declaration,
                    where(p) + ": unknown identifier '" + name + "' (declare it with indep, param, dep, func or reduced)");
    return s;
}

std::optional<long> even_integer(const Node& n) {
    if (n.kind != Node::Kind::Number || n.text.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    long k = std::stol(n.text);
    if (k % 2 != 0) return std::nullopt;
    return k;
}

}  // namespace

void declare_symbols(const ModelDocument& doc) {
    for (const auto& d : doc.declarations) {
        try {
            if (d.kind == "indep") {
                declare_independent(d.name);
            } else if (d.kind == "param") {
                if (d.name == exponent_parameter()->name) continue;
                declare_parameter(d.name);
            } else if (d.kind == "reduced") {
                declare(d.name, SymbolKind::Reduced);
            } else {
                std::vector<const Symbol*> args;
                for (const auto& a : d.args) args.push_back(resolve_name(a, d.pos));
                if (d.kind == "dep")
                    declare_dependent(d.name, args);
                else
                    declare_function(d.name, args);
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Declaration) throw;
            if (e.detail().rfind("line ", 0) == 0) throw;
            throw Error(ErrorKind::Declaration, where(d.pos) + ": " + e.detail());
        }
    }
}

Expr build_expr(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Number: return Expr(parse_number(n.text, n.pos));
        case Node::Kind::Ident: return Expr::symbol(resolve_name(n.text, n.pos));
        case Node::Kind::Add: return build_expr(*n.kids[0]) + build_expr(*n.kids[1]);
        case Node::Kind::Sub: return build_expr(*n.kids[0]) - build_expr(*n.kids[1]);
        case Node::Kind::Mul: return build_expr(*n.kids[0]) * build_expr(*n.kids[1]);
        case Node::Kind::Div: {
            Expr d = build_expr(*n.kids[1]);
            if (d.is_zero()) throw Error(ErrorKind::Domain, where(n.pos) + ": division by zero");
            if (!d.is_monomial())
                throw Error(ErrorKind::NonMonomialDivisor, where(n.pos) + ": divisor " + to_string(d) + " is not a single monomial");
            return build_expr(*n.kids[0]) / d;
        }
        case Node::Kind::Neg: return -build_expr(*n.kids[0]);
        case Node::Kind::Pow: {
            const Node& base = *n.kids[0];
            if (base.kind == Node::Kind::Call && base.text == "sech" && base.kids.size() == 1) {
                auto k = even_integer(*n.kids[1]);
                if (!k) throw Error(ErrorKind::Domain, where(n.pos) + ": sech is only supported to an even power");
                Expr th = tanh_of(build_expr(*base.kids[0]));
                return pow(Expr(1) - th * th, Exponent(*k / 2));
            }
            Expr ex = build_expr(*n.kids[1]);
            auto k = Exponent::from_expr(ex);
            if (!k)
                throw Error(ErrorKind::SymbolicPowerSubstitution,
                            where(n.pos) + ": exponent " + to_string(ex) + " is not a rational combination of 1, n, 1/n");
            return pow(build_expr(base), *k);
        }
        case Node::Kind::Call: {
            if (n.text == "exp" || n.text == "tanh") {
                if (n.kids.size() != 1) throw Error(ErrorKind::Syntax, where(n.pos) + ": " + n.text + " takes one argument");
                Expr a = build_expr(*n.kids[0]);
                return n.text == "exp" ? exp_of(a) : tanh_of(a);
            }
            if (n.text == "sech") throw Error(ErrorKind::Domain, where(n.pos) + ": sech is only supported to an even power");
            const Symbol* f = resolve_name(n.text, n.pos);
            if (f->kind != SymbolKind::Function && f->kind != SymbolKind::Dependent)
                throw Error(ErrorKind::Declaration, where(n.pos) + ": '" + n.text + "' is not a function");
            if (n.kids.size() != f->args.size())
                throw Error(ErrorKind::Declaration, where(n.pos) + ": '" + n.text + "' takes " + std::to_string(f->args.size()) + " arguments");
            for (std::size_t i = 0; i < n.kids.size(); ++i)
                if (n.kids[i]->kind != Node::Kind::Ident || n.kids[i]->text != f->args[i]->name)
                    throw Error(ErrorKind::Declaration,
                                where(n.kids[i]->pos) + ": argument " + std::to_string(i + 1) + " of '" + n.text + "' must be " + f->args[i]->name);
            return Expr::symbol(f);
        }
        case Node::Kind::Deriv: {
            std::vector<const Symbol*> vars;
            for (const auto& v : n.vars) vars.push_back(resolve_name(v, n.pos));
            return total_derivative(build_expr(*n.kids[0]), vars);
        }
        case Node::Kind::Jet: {
            const Symbol* u = resolve_name(n.text, n.pos);
            std::vector<const Symbol*> vars;
            for (const auto& v : n.vars) vars.push_back(resolve_name(v, n.pos));
            if (u->kind == SymbolKind::Function) {
                std::vector<int> o(u->args.size(), 0);
                for (const Symbol* v : vars) {
                    int p = u->arg_index(v);
                    if (p < 0) throw Error(ErrorKind::Declaration, where(n.pos) + ": " + u->name + " does not depend on " + v->name);
                    ++o[static_cast<std::size_t>(p)];
                }
                return Expr::atom(function_atom(u, o));
            }
            if (u->kind != SymbolKind::Dependent)
                throw Error(ErrorKind::Declaration, where(n.pos) + ": '" + u->name + "' is not a dependent variable");
            return Expr::atom(jet_of(u, vars));
        }
    }
    return Expr();
}

// ---------------------------------------------------------------------------
// Model

namespace {

template <class M>
const typename M::mapped_type& lookup(const M& m, const std::string& name, const std::string& what) {
    auto it = m.find(name);
    if (it == m.end()) throw Error(ErrorKind::Declaration, "no " + what + " named '" + name + "'");
    return it->second;
}

const Symbol* sole_dependent(const Expr& e, const std::string& block, SourcePos p) {
    std::set<const Symbol*> deps;
    for (Atom a : atoms_of(e))
        if (a->kind == AtomKind::Jet) deps.insert(a->symbol);
    if (deps.size() != 1)
        throw Error(ErrorKind::Declaration, where(p) + ": block '" + block + "' must involve exactly one dependent variable");
    return *deps.begin();
}

double constant_value(const std::string& text, SourcePos p) {
    Expr e = build_expr(*parse_expression(text));
    auto r = e.as_rational();
    if (!r) throw Error(ErrorKind::Syntax, where(p) + ": '" + text + "' is not a numeric constant");
    return r->to_double();
}

double constant_value(const Expr& e, SourcePos p) {
    auto r = e.as_rational();
    if (!r) throw Error(ErrorKind::Syntax, where(p) + ": " + to_string(e) + " is not a numeric constant");
    return r->to_double();
}

const Symbol* base_symbol(const std::string& name, SourcePos p) {
    const Symbol* s = resolve_name(name, p);
    if (!s->is_base_variable()) throw Error(ErrorKind::Declaration, where(p) + ": '" + name + "' is not an independent variable");
    return s;
}

}  // namespace

const Equation& Model::equation(const std::string& name) const { return lookup(equations, name, "equation"); }
const VectorField& Model::field(const std::string& name) const { return lookup(fields, name, "field"); }
const Ansatz& Model::ansatz(const std::string& name) const { return lookup(ansatze, name, "ansatz"); }
const RunSpec& Model::run(const std::string& name) const { return lookup(runs, name, "run"); }
const SolutionSpec& Model::solution(const std::string& name) const { return lookup(solutions, name, "solution"); }

Pde Model::pde(const std::string& name) const {
    const Equation& e = equation(name);
    return make_pde(e.lhs, e.dependent, name);
}

Model load_model(const std::string& text, const std::string& source) {
    Model m;
    m.doc = parse_model(text, source);
    declare_symbols(m.doc);
    std::set<std::pair<std::string, std::string>> seen;
    for (const Block& b : m.doc.blocks) {
        std::string kind = b.kind == "ode" ? "pde" : b.kind;
        if (!seen.emplace(kind, b.name).second)
            throw Error(ErrorKind::Declaration, where(b.pos) + ": duplicate " + b.kind + " '" + b.name + "'");
        auto bad = [&](const Clause& c) {
            throw Error(ErrorKind::Syntax, where(c.pos) + ": clause '" + c.key + "' is not valid in a " + b.kind + " block");
        };
        if (b.kind == "pde" || b.kind == "ode") {
            Equation e;
            e.name = b.name;
            bool have = false;
            for (const Clause& c : b.clauses) {
                if (c.key == "eq") {
                    e.lhs = build_expr(*c.lhs) - build_expr(*c.rhs);
                    have = true;
                } else if (c.key == "assume") {
                    e.assumptions.emplace(symbol_atom(resolve_name(c.qualifier, c.pos)), build_expr(*c.rhs));
                } else if (c.key == "const") {
                    e.constants = c.items;
                } else {
                    bad(c);
                }
            }
            if (!have) throw Error(ErrorKind::Syntax, where(b.pos) + ": " + b.kind + " '" + b.name + "' has no eq clause");
            e.dependent = sole_dependent(e.lhs, b.name, b.pos);
            m.equations.emplace(b.name, std::move(e));
        } else if (b.kind == "field") {
            VectorField f;
            f.name = b.name;
            std::vector<std::pair<const Symbol*, Expr>> xis;
            for (const Clause& c : b.clauses) {
                if (c.key == "xi") {
                    xis.emplace_back(base_symbol(c.qualifier, c.pos), build_expr(*c.rhs));
                } else if (c.key == "eta") {
                    const Symbol* u = resolve_name(c.qualifier, c.pos);
                    if (u->kind != SymbolKind::Dependent)
                        throw Error(ErrorKind::Declaration, where(c.pos) + ": eta must name a dependent variable");
                    f.dependent = u;
                    f.eta = build_expr(*c.rhs);
                } else {
                    bad(c);
                }
            }
            if (!f.dependent) throw Error(ErrorKind::Syntax, where(b.pos) + ": field '" + b.name + "' needs an eta clause");
            f.xi.assign(f.dependent->args.size(), Expr());
            for (const auto& [s, e] : xis) {
                int p = f.dependent->arg_index(s);
                if (p < 0) throw Error(ErrorKind::Declaration, where(b.pos) + ": " + f.dependent->name + " does not depend on " + s->name);
                f.xi[static_cast<std::size_t>(p)] = e;
            }
            m.fields.emplace(b.name, std::move(f));
        } else if (b.kind == "ansatz") {
            Ansatz a;
            a.name = b.name;
            for (const Clause& c : b.clauses) {
                if (c.key == "new") {
                    a.new_vars.emplace_back(base_symbol(c.qualifier, c.pos), build_expr(*c.rhs));
                } else if (c.key == "rule") {
                    const Symbol* u = resolve_name(c.qualifier, c.pos);
                    if (u->kind != SymbolKind::Dependent)
                        throw Error(ErrorKind::Declaration, where(c.pos) + ": rule must name a dependent variable");
                    a.old_dependent = u;
                    a.rule = build_expr(*c.rhs);
                } else if (c.key == "inverse") {
                    a.inverse.emplace(symbol_atom(base_symbol(c.qualifier, c.pos)), build_expr(*c.rhs));
                } else {
                    bad(c);
                }
            }
            if (!a.old_dependent) throw Error(ErrorKind::Syntax, where(b.pos) + ": ansatz '" + b.name + "' needs a rule clause");
            std::set<const Symbol*> deps;
            for (Atom at : atoms_of(a.rule))
                if (at->kind == AtomKind::Jet && at->symbol != a.old_dependent) deps.insert(at->symbol);
            if (deps.size() != 1)
                throw Error(ErrorKind::Declaration, where(b.pos) + ": rule of '" + b.name + "' must use exactly one new dependent");
            a.new_dependent = *deps.begin();
            std::vector<const Symbol*> order;
            for (const auto& nv : a.new_vars) order.push_back(nv.first);
            if (order != a.new_dependent->args)
                throw Error(ErrorKind::Declaration, where(b.pos) + ": new variables of '" + b.name + "' must match the arguments of " + a.new_dependent->name);
            m.ansatze.emplace(b.name, std::move(a));
        } else if (b.kind == "run") {
            RunSpec r;
            r.name = b.name;
            for (const Clause& c : b.clauses) {
                if (c.key == "ode") {
                    r.ode = c.items.at(0);
                } else if (c.key == "set") {
                    r.parameters[c.qualifier] = constant_value(build_expr(*c.rhs), c.pos);
                } else if (c.key == "ic") {
                    for (const auto& it : c.items) r.ic.push_back(constant_value(it, c.pos));
                } else if (c.key == "span") {
                    if (c.items.size() != 2) throw Error(ErrorKind::Syntax, where(c.pos) + ": span takes two values");
                    r.config.start = constant_value(c.items[0], c.pos);
                    r.config.end = constant_value(c.items[1], c.pos);
                } else if (c.key == "method") {
                    r.config.method = parse_method(c.items.at(0));
                } else if (c.key == "tol") {
                    r.config.abs_tol = constant_value(c.items.at(0), c.pos);
                    r.config.rel_tol = c.items.size() > 1 ? constant_value(c.items[1], c.pos) : r.config.abs_tol;
                } else if (c.key == "step") {
                    r.config.fixed_step = constant_value(c.items.at(0), c.pos);
                } else if (c.key == "initial") {
                    r.config.initial_step = constant_value(c.items.at(0), c.pos);
                } else if (c.key == "columns") {
                    r.columns = c.items;
                } else {
                    bad(c);
                }
            }
            m.runs.emplace(b.name, std::move(r));
        } else if (b.kind == "solution") {
            SolutionSpec s;
            s.name = b.name;
            for (const Clause& c : b.clauses) {
                if (c.key == "value") {
                    s.dependent = resolve_name(c.qualifier, c.pos);
                    if (s.dependent->kind != SymbolKind::Dependent)
                        throw Error(ErrorKind::Declaration, where(c.pos) + ": value must name a dependent variable");
                    s.value = build_expr(*c.rhs);
                } else if (c.key == "set") {
                    const Symbol* f = resolve_name(c.qualifier, c.pos);
                    if (f->kind != SymbolKind::Function)
                        throw Error(ErrorKind::Declaration, where(c.pos) + ": set in a solution must name a function");
                    s.function_values.emplace_back(f, build_expr(*c.rhs));
                } else if (c.key == "solve") {
                    s.solve = c.items;
                } else {
                    bad(c);
                }
            }
            if (!s.dependent) throw Error(ErrorKind::Syntax, where(b.pos) + ": solution '" + b.name + "' needs a value clause");
            m.solutions.emplace(b.name, std::move(s));
        }
    }
    for (const auto& [name, r] : m.runs)
        if (!m.equations.count(r.ode)) throw Error(ErrorKind::Declaration, "run '" + name + "' refers to unknown ode '" + r.ode + "'");
    return m;
}

Model load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Declaration, "cannot open model file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_model(ss.str(), path);
}

}  // namespace liesym
