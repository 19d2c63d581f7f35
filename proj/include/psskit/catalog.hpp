#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psskit/classify.hpp"

namespace psskit {

struct Expected {
    bool verifies = true;
    int delta = 1;
    std::optional<bool> lemma31;        // nullopt: not applicable
    std::optional<std::string> family;  // T32, T33, T34, T35 or "none"; nullopt: not applicable
};

struct CatalogEntry {
    std::string name;
    std::string title;
    EquationSpec eq;
    std::optional<Triad> triad;
    Expected expected;
    std::optional<FamilySpec> family;  // set for entries built by a generator
};

// Built once on first use; declares the shared symbolic parameters
// mu (real), eta (nonzero), a (nonzero), sigma (real) and tau (positive).
const std::vector<CatalogEntry>& load_catalog();
const CatalogEntry* find_entry(const std::string& name);

struct EntryCheck {
    std::string name;
    bool pass = false;
    std::vector<std::string> observations;
    std::vector<std::string> mismatches;
};

EntryCheck check_entry(const CatalogEntry& e, std::uint64_t seed = 1);

}  // namespace psskit
