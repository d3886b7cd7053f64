#include "liesym/symbol.hpp"

#include <deque>
#include <map>
#include <mutex>

#include "liesym/error.hpp"

namespace liesym {

namespace {

struct Registry {
    std::mutex mutex;
    std::deque<Symbol> storage;
    std::map<std::string, const Symbol*, std::less<>> by_name;
};

Registry& registry() {
    static Registry r;
    return r;
}

}  // namespace

std::string_view symbol_kind_name(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::Independent: return "independent-variable";
        case SymbolKind::Dependent: return "dependent-variable";
        case SymbolKind::Parameter: return "parameter";
        case SymbolKind::Reduced: return "reduced-variable";
        case SymbolKind::Function: return "function";
    }
    return "?";
}

int Symbol::arg_index(const Symbol* s) const {
    for (std::size_t i = 0; i < args.size(); ++i)
        if (args[i] == s) return static_cast<int>(i);
    return -1;
}

const Symbol* declare(const std::string& name, SymbolKind kind, const std::vector<const Symbol*>& args) {
    if (name.empty()) throw Error(ErrorKind::Declaration, "empty symbol name");
    for (const Symbol* a : args) {
        if (a == nullptr) throw Error(ErrorKind::Declaration, "null argument for '" + name + "'");
        bool ok = a->is_base_variable() || (kind == SymbolKind::Function && a->kind == SymbolKind::Dependent);
        if (!ok)
            throw Error(ErrorKind::Declaration, "'" + a->name + "' cannot be an argument of '" + name + "'");
    }
    if (kind == SymbolKind::Dependent && args.empty())
        throw Error(ErrorKind::Declaration, "dependent variable '" + name + "' needs at least one argument");

    Registry& r = registry();
    std::lock_guard lock(r.mutex);
    if (auto it = r.by_name.find(name); it != r.by_name.end()) {
        const Symbol* s = it->second;
        if (s->kind != kind || s->args != args)
            throw Error(ErrorKind::Declaration, "conflicting redeclaration of '" + name + "'");
        return s;
    }
    r.storage.push_back(Symbol{name, kind, args});
    const Symbol* s = &r.storage.back();
    r.by_name.emplace(name, s);
    return s;
}

const Symbol* declare_independent(const std::string& name) { return declare(name, SymbolKind::Independent); }
const Symbol* declare_parameter(const std::string& name) { return declare(name, SymbolKind::Parameter); }
const Symbol* declare_dependent(const std::string& name, const std::vector<const Symbol*>& args) {
    return declare(name, SymbolKind::Dependent, args);
}
const Symbol* declare_function(const std::string& name, const std::vector<const Symbol*>& args) {
    return declare(name, SymbolKind::Function, args);
}

const Symbol* find_symbol(std::string_view name) {
    Registry& r = registry();
    std::lock_guard lock(r.mutex);
    auto it = r.by_name.find(name);
    return it == r.by_name.end() ? nullptr : it->second;
}

const Symbol* get_symbol(std::string_view name) {
    const Symbol* s = find_symbol(name);
    if (s == nullptr) throw Error(ErrorKind::Declaration, "unknown symbol '" + std::string(name) + "'");
    return s;
}

const Symbol* exponent_parameter() {
    static const Symbol* n = declare_parameter("n");
    return n;
}

}  // namespace liesym
