#include "doctest.h"

#include "../support/random_exprs.hpp"
#include "psskit/catalog.hpp"
#include "psskit/errors.hpp"
#include "psskit/zcr.hpp"

using namespace psskit;

namespace {

Expr J(int x) { return Expr::var(jet(x)); }
const Expr half(Rational(1, 2));

Triad random_triad(psstest::ExprGen& g, int delta) {
    static const EquationSpec eq = EquationSpec::ch_type(J(0) * J(0) * J(3) + J(1) * J(2));
    auto vars = psstest::x_jets(2);
    return Triad(g.one_form(vars, 2), g.one_form(vars, 2), g.one_form(vars, 2), delta, eq);
}

}  // namespace

TEST_CASE("sl2 residual is a fixed combination of the structure residuals") {
    psstest::ExprGen g(11);
    for (int n = 0; n < 20; ++n) {
        Triad t = random_triad(g, 1);
        Residuals r = structure_residuals(t);
        MatrixTwoForm z = zc_residual(omega_sl2(t), t.eq());
        CHECK(z.at(0, 0).c == half * r.r2.c);
        CHECK(z.at(0, 1).c == half * (r.r1.c - r.r3.c));
        CHECK(z.at(1, 0).c == half * (r.r1.c + r.r3.c));
        CHECK(z.at(1, 1).c == -half * r.r2.c);
    }
}

TEST_CASE("so(2,1) and so(3) residuals carry the residuals directly") {
    psstest::ExprGen g(12);
    for (int delta : {1, -1}) {
        Triad t = random_triad(g, delta);
        Residuals r = structure_residuals(t);
        MatrixForm m = omega_so(t);
        CHECK(m.algebra == (delta == 1 ? Algebra::so21 : Algebra::so3));
        MatrixTwoForm z = zc_residual(m, t.eq());
        CHECK(z.at(0, 1).c == r.r1.c);
        CHECK(z.at(0, 2).c == r.r2.c);
        CHECK(z.at(1, 2).c == r.r3.c);
        CHECK(z.at(0, 0).c.is_zero());
    }
}

TEST_CASE("catalog triads give flat connections") {
    for (const char* name : {"sg", "gch", "dp_plus", "ch_minus"}) {
        const CatalogEntry* e = find_entry(name);
        REQUIRE(e);
        CHECK(zc_residual(omega_sl2(*e->triad), e->eq).all_zero());
        CHECK(zc_residual(omega_su2(*e->triad), e->eq).all_zero());
        CHECK(zc_residual(omega_so(*e->triad), e->eq).all_zero());
    }
    const CatalogEntry* nls = find_entry("nls_plus");
    REQUIRE(nls);
    CHECK(zc_residual(omega_so(*nls->triad), nls->eq).all_zero());
    CHECK_FALSE(zc_residual(omega_sl2(*nls->triad), nls->eq).all_zero());
}

TEST_CASE("gauge covariance") {
    psstest::ExprGen g(13);
    Triad t = random_triad(g, 1);
    MatrixForm m = omega_sl2(t);
    ConstMatrix A = const_matrix({{Expr(2L), Expr(3L)}, {Expr(1L), Expr(2L)}});
    CHECK(determinant(A) == Expr(1L));
    MatrixTwoForm lhs = zc_residual(gauge_transform(m, A), t.eq());
    MatrixTwoForm rhs = conjugate(zc_residual(m, t.eq()), A);
    for (std::size_t k = 0; k < 4; ++k) CHECK(lhs.entries[k].c == rhs.entries[k].c);
}

TEST_CASE("the su2 gauge maps the sl2 form onto the su2 pattern") {
    psstest::ExprGen g(14);
    Triad t = random_triad(g, 1);
    ConstMatrix A = su2_gauge();
    CHECK(determinant(A) == Expr(1L));
    MatrixForm lhs = gauge_transform(omega_sl2(t), A);
    MatrixForm rhs = omega_su2(t);
    for (std::size_t k = 0; k < 4; ++k) CHECK(lhs.entries[k] == rhs.entries[k]);
}

TEST_CASE("gauge errors") {
    psstest::ExprGen g(15);
    MatrixForm m = omega_sl2(random_triad(g, 1));
    CHECK_THROWS_AS(gauge_transform(m, const_matrix({{Expr(2L), Expr()}, {Expr(), Expr(1L)}})), NotUnimodular);
    CHECK_THROWS_AS(const_matrix({{J(0), Expr()}, {Expr(), Expr(1L)}}), DomainError);
    CHECK_THROWS_AS(const_matrix({{Expr(1L)}, {Expr(), Expr(1L)}}), DomainError);
    CHECK(parse_algebra("so3") == Algebra::so3);
    CHECK(algebra_name(Algebra::su2) == "su2");
    CHECK_THROWS_AS(parse_algebra("gl2"), DomainError);
}

TEST_CASE("AKNS extraction") {
    for (const char* name : {"sg", "gch", "t33_linear"}) {
        const CatalogEntry* e = find_entry(name);
        REQUIRE(e);
        AknsData d = akns_extract(*e->triad);
        CHECK(d.ok());
        CHECK(d.q == half * (e->triad->f(1, 1) - e->triad->f(3, 1)));
        CHECK(d.F == half * e->triad->f(2, 1));
    }
    psstest::ExprGen g(16);
    CHECK_FALSE(akns_extract(random_triad(g, 1)).ok());
}
