#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace liesym {

enum class SymbolKind {
    Independent,
    Dependent,
    Parameter,
    Reduced,
    Function,
};

std::string_view symbol_kind_name(SymbolKind kind);

/// A named symbol. Dependent variables and opaque functions carry the ordered
/// list of base symbols they depend on. Symbols live in a process-wide registry
/// and are compared by address.
struct Symbol {
    std::string name;
    SymbolKind kind;
    std::vector<const Symbol*> args;

    bool is_base_variable() const { return kind == SymbolKind::Independent || kind == SymbolKind::Reduced; }
    /// Position of `s` in args, or -1.
    int arg_index(const Symbol* s) const;
};

/// Declares (or re-fetches) a symbol. Redeclaring with an identical kind and
/// argument list returns the existing symbol; anything else throws.
const Symbol* declare(const std::string& name, SymbolKind kind, const std::vector<const Symbol*>& args = {});

const Symbol* declare_independent(const std::string& name);
const Symbol* declare_parameter(const std::string& name);
const Symbol* declare_dependent(const std::string& name, const std::vector<const Symbol*>& args);
const Symbol* declare_function(const std::string& name, const std::vector<const Symbol*>& args);

/// Returns nullptr when the name is unknown.
const Symbol* find_symbol(std::string_view name);
/// Throws when the name is unknown.
const Symbol* get_symbol(std::string_view name);

/// The single parameter allowed to appear symbolically in exponents ("n").
const Symbol* exponent_parameter();

}  // namespace liesym
