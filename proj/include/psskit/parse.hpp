#pragma once

#include <map>
#include <string>

#include "psskit/expr.hpp"

namespace psskit {

// Names visible to the parser. Jets are recognized from the dependent
// variable names (u, u1, u2, ut, u1t, v, v1, ...); every other identifier
// must be bound here.
struct SymbolTable {
    DepNames names;
    std::map<std::string, Expr> symbols;

    void bind(const std::string& name, const Expr& value);
    bool knows(const std::string& name) const { return symbols.count(name) != 0; }

    // Binds every parameter currently in the registry under its own name.
    static SymbolTable from_registry(DepNames names = {});
};

std::optional<JetVar> parse_jet_name(const std::string& ident, const DepNames& names);

// Grammar, loosest to tightest: + -, * /, unary -, ^ (right-associative,
// integer exponents). Functions: exp, sin, cos, sqrt, pow(P, n).
Expr parse_expr(const std::string& src, const SymbolTable& table);
Expr parse_expr(const std::string& src);

}  // namespace psskit
