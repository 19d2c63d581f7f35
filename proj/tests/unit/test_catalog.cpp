#include "doctest.h"

#include <set>

#include "psskit/catalog.hpp"

using namespace psskit;

TEST_CASE("catalog contents") {
    const auto& cat = load_catalog();
    CHECK(cat.size() >= 12);
    std::set<std::string> names;
    for (const auto& e : cat) CHECK(names.insert(e.name).second);
    for (const char* n : {"sg", "dp_plus", "dp_minus", "nls_plus", "ch_plus", "ch_minus", "gch", "t32_psi_uu1",
                          "t32_psi_exp", "t32_psi_u3", "t32_psi_u1sq", "t33_linear", "t33_exp", "t33_square",
                          "t35i_theta1", "t35ii_phi_const", "novikov"})
        CHECK_MESSAGE(names.count(n), n);
    CHECK(find_entry("nope") == nullptr);
}

TEST_CASE("stated expectations") {
    const CatalogEntry* g = find_entry("gch");
    REQUIRE(g);
    CHECK(g->expected.verifies);
    CHECK(g->expected.delta == 1);
    CHECK(g->expected.lemma31 == true);
    CHECK(g->expected.family == "T34");

    const CatalogEntry* n = find_entry("nls_plus");
    REQUIRE(n);
    CHECK(n->expected.delta == -1);
    CHECK(n->eq.nvars() == 2);

    const CatalogEntry* nov = find_entry("novikov");
    REQUIRE(nov);
    CHECK_FALSE(nov->triad);
    CHECK(nov->expected.family == "none");
}

TEST_CASE("every entry reproduces its verdict") {
    for (const auto& e : load_catalog()) {
        EntryCheck c = check_entry(e);
        CHECK_MESSAGE(c.pass, e.name);
        for (const auto& m : c.mismatches) MESSAGE(e.name << ": " << m);
    }
}

TEST_CASE("curvature equals minus delta on verifying entries") {
    for (const auto& e : load_catalog()) {
        if (!e.triad || !e.expected.verifies) continue;
        CHECK_MESSAGE(gaussian_curvature(*e.triad) == Expr(static_cast<long>(-e.expected.delta)), e.name);
    }
}

TEST_CASE("sign variants fail") {
    for (const char* n : {"ch_plus_alt", "nls_plus_alt"}) {
        const CatalogEntry* e = find_entry(n);
        REQUIRE(e);
        CHECK_FALSE(e->expected.verifies);
        CHECK_FALSE(structure_residuals(*e->triad).all_zero());
    }
}

TEST_CASE("a wrong expectation is reported") {
    CatalogEntry e = *find_entry("sg");
    e.expected.delta = -1;
    EntryCheck c = check_entry(e);
    CHECK_FALSE(c.pass);
    CHECK_FALSE(c.mismatches.empty());
}
