#include "doctest.h"

#include <cmath>

#include "psskit/errors.hpp"
#include "psskit/expr.hpp"
#include "psskit/parse.hpp"

using namespace psskit;

namespace {
const Expr u = Expr::var(jet(0)), u1 = Expr::var(jet(1)), u2 = Expr::var(jet(2)), u3 = Expr::var(jet(3));
}

TEST_CASE("canonical form collects like terms and cancels") {
    CHECK(u * u1 + u1 * u == Expr(2L) * u * u1);
    CHECK((u + u1) - (u1 + u) == Expr());
    CHECK((u - u2) * (u + u2) == u * u - u2 * u2);
    CHECK(pow(u + Expr(1L), 3) == u * u * u + Expr(3L) * u * u + Expr(3L) * u + Expr(1L));
    CHECK(Expr(Rational(1, 3)) * Expr(3L) == Expr(1L));
    CHECK(render(Expr(Rational(-3, 4)) * u) == "-3/4*u");
    CHECK(render(Expr()) == "0");
}

TEST_CASE("exponentials merge and sin^2 + cos^2 is not simplified") {
    CHECK(make_exp(u) * make_exp(u1) == make_exp(u + u1));
    CHECK(make_exp(Expr()) == Expr(1L));
    CHECK(make_exp(u) * make_exp(-u) == Expr(1L));
    CHECK_FALSE(make_sin(u) * make_sin(u) + make_cos(u) * make_cos(u) == Expr(1L));
}

TEST_CASE("negative powers of polynomial bases") {
    Expr w = u - u2;
    CHECK(make_pow(w, -1) * w == Expr(1L));
    CHECK(make_pow(w, -1) * make_pow(w, -1) == make_pow(w, -2));
    CHECK(make_pow(w, 2) == w * w);
    // a scaled base is normalized to a monic one
    CHECK(make_pow(Expr(2L) * u - u2, -1) == Expr(Rational(1, 2)) * make_pow(u - Expr(Rational(1, 2)) * u2, -1));
    CHECK(render(make_pow(w, -1)) == "pow(u - u2, -1)");
}

TEST_CASE("partial derivatives against hand-computed values") {
    CHECK(diff(u * u * u1, jet(0)) == Expr(2L) * u * u1);
    CHECK(diff(make_exp(u * u), jet(0)) == Expr(2L) * u * make_exp(u * u));
    CHECK(diff(make_sin(u1), jet(1)) == make_cos(u1));
    CHECK(diff(make_cos(u1), jet(1)) == -make_sin(u1));
    CHECK(diff(make_pow(u - u2, -1), jet(2)) == make_pow(u - u2, -2));
    CHECK(diff(u3, jet(2)) == Expr());

    ParamId k = declare_param("k_expr_test");
    Expr K = Expr::param(k);
    CHECK(diff(K * K * u, k) == Expr(2L) * K * u);
}

TEST_CASE("derivation applies the chain rule through functions") {
    auto shift = [](JetVar v) { return Expr::var(jet(v.x + 1, v.dep, v.t)); };
    CHECK(derivation(u * u1, shift) == u * u2 + u1 * u1);
    CHECK(derivation(make_exp(u), shift) == u1 * make_exp(u));
    CHECK(derivation(make_sin(u), shift) == u1 * make_cos(u));
}

TEST_CASE("substitution") {
    CHECK(substitute(u * u1, jet(0), u1 + Expr(1L)) == u1 * u1 + u1);
    CHECK(substitute(make_exp(u), jet(0), Expr()) == Expr(1L));
    std::map<JetVar, Expr> rules{{jet(0), u1}, {jet(1), u}};
    CHECK(substitute(u - u1, rules) == u1 - u);
}

TEST_CASE("exact division") {
    auto q = exact_divide(u * u - u1 * u1, u - u1);
    REQUIRE(q);
    CHECK(*q == u + u1);
    CHECK_FALSE(exact_divide(u * u + Expr(1L), u - u1));
}

TEST_CASE("inverse of units and errors on non-units") {
    CHECK(inverse(Expr(Rational(2, 3))) == Expr(Rational(3, 2)));
    CHECK(inverse(make_exp(u)) == make_exp(-u));
    CHECK_THROWS_AS(inverse(u), NotInvertible);
    CHECK_THROWS_AS(inverse(Expr()), NotInvertible);
}

TEST_CASE("constant radicals") {
    Expr r2 = sqrt_of(Expr(2L));
    CHECK(r2 * r2 == Expr(2L));
    Expr i = sqrt_of(Expr(-1L));
    CHECK(i * i == Expr(-1L));
    CHECK(sqrt_of(Expr(4L)) == Expr(2L));
    CHECK(sqrt_of(Expr(Rational(1, 4))) == Expr(Rational(1, 2)));
    CHECK(sqrt_of(Expr(Rational(1, 2))) == Expr(Rational(1, 2)) * r2);
}

TEST_CASE("shift radicals normalize the base square") {
    Expr m = Expr::param(declare_param("m_expr_test"));
    Expr s = sqrt_of(Expr(1L) + m * m);
    CHECK(s * s == Expr(1L) + m * m);
    CHECK(m * m == s * s - Expr(1L));
    CHECK(inverse(s) * s == Expr(1L));
    CHECK(sqrt_of(Expr(1L) + m * m) == s);
}

TEST_CASE("registry") {
    ParamId a = declare_param("reg_a", Assumption::Nonzero);
    CHECK(declare_param("reg_a", Assumption::Nonzero) == a);
    CHECK_THROWS_AS(declare_param("reg_a", Assumption::Positive), RegistryError);
    CHECK(param_name(a) == "reg_a");
    CHECK(param_info(a).nonzero());
    CHECK_FALSE(param_info(a).positive());
    CHECK(find_param("reg_a") == a);
    CHECK_FALSE(find_param("reg_missing"));
    CHECK(valid_param_name("zeta2"));
    CHECK_FALSE(valid_param_name("2x"));
    CHECK_FALSE(valid_param_name("exp"));
}

TEST_CASE("evaluation") {
    Assignment s;
    s.jets[jet(0)] = 0.5;
    s.jets[jet(1)] = -1.25;
    s.jets[jet(2)] = 2.0;
    CHECK(eval_at(u * u1, s) == doctest::Approx(-0.625));
    CHECK(eval_at(make_pow(u - u2, -1), s) == doctest::Approx(1.0 / (0.5 - 2.0)));
    CHECK(eval_at(make_exp(u) * make_sin(u1), s) == doctest::Approx(std::exp(0.5) * std::sin(-1.25)));
    CHECK(eval_at(Expr(Rational(1, 3)), s) == doctest::Approx(1.0 / 3));
    CHECK_THROWS_AS(eval_at(u3, s), MissingAssignment);
    s.jets[jet(2)] = 0.5;
    CHECK_THROWS_AS(eval_at(make_pow(u - u2, -1), s), DomainError);
}

TEST_CASE("structural queries") {
    Expr e = u * u2 + make_sin(u3);
    CHECK(jets_of(e) == std::set<JetVar>{jet(0), jet(2), jet(3)});
    CHECK(max_xorder(e) == 3);
    CHECK(has_funcs(e));
    CHECK_FALSE(has_funcs(u * u1));
    CHECK(depends_only_on(u * u1, {jet(0), jet(1)}));
    CHECK_FALSE(depends_only_on(u * u2, {jet(0), jet(1)}));
    CHECK(jet(3) > jet(2));
    CHECK(jet(0, 0, 1) > jet(5));
    CHECK(jet(0, 1) > jet(0, 0, 1));
}
