#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "liesym/ode.hpp"
#include "liesym/reduction.hpp"

namespace liesym {

struct SourcePos {
    int line = 0;
    int col = 0;
};

/// Unresolved expression syntax tree as written in a model file.
struct Node {
    enum class Kind { Number, Ident, Add, Sub, Mul, Div, Pow, Neg, Call, Deriv, Jet };
    Kind kind = Kind::Number;
    std::string text;                   // literal, identifier, call or jet name
    std::vector<std::shared_ptr<const Node>> kids;
    std::vector<std::string> vars;      // Deriv and Jet variable lists
    SourcePos pos;
};
using NodePtr = std::shared_ptr<const Node>;

/// Structural equality ignoring source positions.
bool same_tree(const Node& a, const Node& b);

struct Clause {
    std::string key;
    std::string qualifier;            // binding keys: the bound name
    NodePtr lhs, rhs;                 // eq: lhs = rhs; bindings: rhs only
    std::vector<std::string> items;   // list keys
    SourcePos pos;
};

struct Declaration {
    std::string kind;  // indep, param, dep, func, reduced
    std::string name;
    std::vector<std::string> args;
    SourcePos pos;
};

struct Block {
    std::string kind;  // pde, field, ansatz, ode, run, solution
    std::string name;
    std::vector<Clause> clauses;
    SourcePos pos;
};

struct ModelDocument {
    std::vector<Declaration> declarations;
    std::vector<Block> blocks;

    const Block* find(const std::string& kind, const std::string& name) const;
    const Block* find_any(const std::string& name) const;
};

/// Same declarations and blocks, ignoring source positions.
bool same_document(const ModelDocument& a, const ModelDocument& b);

ModelDocument parse_model(const std::string& text, const std::string& source = "<model>");
/// Parses a single expression (no declarations).
NodePtr parse_expression(const std::string& text);

std::string print_node(const Node& n);
std::string print_model(const ModelDocument& doc);
/// Canonical text of a normalized expression.
std::string print_expr(const Expr& e);

/// Declares every symbol listed in the document.
void declare_symbols(const ModelDocument& doc);
/// Turns a syntax tree into a normalized Expr; identifiers must be declared.
Expr build_expr(const Node& n);

struct Equation {
    std::string name;
    Expr lhs;
    const Symbol* dependent = nullptr;
    std::map<Atom, Expr, AtomLess> assumptions;
    std::vector<std::string> constants;
};

struct RunSpec {
    std::string name;
    std::string ode;
    std::map<std::string, double> parameters;
    std::vector<double> ic;
    IntegratorConfig config;
    std::vector<std::string> columns;
};

struct SolutionSpec {
    std::string name;
    const Symbol* dependent = nullptr;
    Expr value;
    std::vector<std::pair<const Symbol*, Expr>> function_values;
    std::vector<std::string> solve;
};

/// Resolved model: every block turned into kernel objects.
struct Model {
    ModelDocument doc;
    std::map<std::string, Equation> equations;  // pde and ode blocks
    std::map<std::string, VectorField> fields;
    std::map<std::string, Ansatz> ansatze;
    std::map<std::string, RunSpec> runs;
    std::map<std::string, SolutionSpec> solutions;

    const Equation& equation(const std::string& name) const;
    const VectorField& field(const std::string& name) const;
    const Ansatz& ansatz(const std::string& name) const;
    const RunSpec& run(const std::string& name) const;
    const SolutionSpec& solution(const std::string& name) const;
    Pde pde(const std::string& name) const;
};

Model load_model(const std::string& text, const std::string& source = "<model>");
Model load_model_file(const std::string& path);

/// Texts of the built-in model files, keyed by file stem.
const std::vector<std::pair<std::string, std::string>>& builtin_model_texts();
/// All built-in files loaded as one model (loaded once, then shared).
const Model& builtin_model();
/// "builtin" or a path to a model file.
Model load_model_source(const std::string& source);

}  // namespace liesym
