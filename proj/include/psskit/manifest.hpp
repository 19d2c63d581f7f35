#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psskit/catalog.hpp"
#include "psskit/parse.hpp"

namespace psskit {

inline constexpr int kManifestFormat = 1;

struct ParamDecl {
    std::string name;
    std::string decl;  // "real", "nonzero", "positive" or "sqrt(<radicand>)"
};

// A manifest holds an equation with a triad, a bare equation, or a family
// specification; a triad manifest may also carry the family it came from.
//
//   format = 1
//   title = '...'
//   [equation]  class = 'ch' | 'xt' | 'evolution', vars = ['u'], rhs = '...'
//               (a list of strings for evolution systems), lambda = '...'
//   [params]    name = 'real' | 'nonzero' | 'positive' | 'sqrt(1 + mu^2)'
//   [triad]     delta = 1, f11 = '...', ..., f32 = '...'
//   [family]    theorem = 'T34', delta = 1, with subtables params, slots, signs
//   [expected]  verifies, delta, lemma31, family
struct Manifest {
    std::string title;
    std::optional<EquationSpec> eq;
    std::optional<Triad> triad;
    std::optional<FamilySpec> family;
    std::optional<Expected> expected;
    std::vector<ParamDecl> params;
    SymbolTable symbols;
};

Manifest read_manifest(const std::string& text, const std::string& source = "<input>");
Manifest load_manifest(const std::string& path);

struct ManifestContent {
    std::string title;
    const EquationSpec* eq = nullptr;
    const Triad* triad = nullptr;
    const FamilySpec* family = nullptr;
    const Expected* expected = nullptr;
};

std::string write_manifest(const ManifestContent& c);

std::string manifest_for_entry(const CatalogEntry& e);
std::string manifest_for_generated(const GeneratedFamily& g, const FamilySpec& spec, const std::string& title);

// Parameter declarations needed to parse the given expressions back, bases
// before the radicals built on them.
std::vector<ParamDecl> param_decls_for(const std::vector<Expr>& exprs);

std::string class_name(EqClass c);

}  // namespace psskit
