#include <functional>
#include <optional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracle.hpp"
#include "../support/properties.hpp"
#include "../support/random_exprs.hpp"
#include "psskit/catalog.hpp"
#include "psskit/classify.hpp"
#include "psskit/cli.hpp"
#include "psskit/errors.hpp"
#include "psskit/manifest.hpp"
#include "psskit/parse.hpp"
#include "psskit/zcr.hpp"

using namespace psskit;

namespace {

struct Criterion {
    int number;
    std::string title;
    std::vector<std::string> problems;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    }
};

Expr J(int x) { return Expr::var(jet(x)); }

const CatalogEntry& entry(const std::string& name) {
    const CatalogEntry* e = find_entry(name);
    if (!e) throw std::runtime_error("catalog entry " + name + " missing");
    return *e;
}

std::string triad_str(const Triad& t, int i, int j) { return render(t.f(i, j), t.eq().names()); }

// ---------------------------------------------------------------------------

void structure_and_curvature(Criterion& c, const std::string& name, int delta) {
    const CatalogEntry& e = entry(name);
    const Triad& t = *e.triad;
    c.check(t.delta() == delta, name + ": delta is " + std::to_string(t.delta()));
    Residuals r = structure_residuals(t);
    c.check(r.all_zero(), name + ": residuals are not structurally zero");
    c.check(nondegenerate(t).ok, name + ": degenerate coframe");
    try {
        Expr K = gaussian_curvature(t);
        c.check(K == Expr(static_cast<long>(-delta)), name + ": K = " + render(K));
    } catch (const Error& ex) {
        c.problems.push_back(name + ": " + ex.what());
    }
    CrossCheck cc = cross_check_structure(t, 50, 1, 1e-9);
    c.check(cc.ok && cc.samples == 50, name + ": numeric cross-check " + cc.detail);
}

std::map<ParamId, double> random_params(const Triad& t, std::mt19937_64& rng) {
    std::vector<Expr> all;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 2; ++j) all.push_back(t.f(i, j));
    for (const auto& rule : t.eq().rules()) all.push_back(rule.rhs);
    return random_assignment_for(all, rng).params;
}

void criterion1(Criterion& c) {
    for (const char* n : {"sg", "dp_plus", "dp_minus", "ch_plus", "ch_minus", "gch", "gch_minus"})
        structure_and_curvature(c, n, 1);

    // independent check along explicit solutions
    std::mt19937_64 rng(17);
    const CatalogEntry& sg = entry("sg");
    psstest::OracleResult o =
        psstest::oracle_check(*sg.triad, psstest::sine_gordon_kink(0.7), random_params(*sg.triad, rng),
                              {{-0.5, 0.1}, {0.0, 0.0}, {0.8, -0.4}});
    c.check(o.ok, "sg: oracle " + o.detail);
    for (const char* n : {"dp_plus", "dp_minus", "ch_plus", "ch_minus", "gch"}) {
        const CatalogEntry& e = entry(n);
        auto params = random_params(*e.triad, rng);
        psstest::LocalSolution ls = psstest::ch_local_solution(e.eq.rule(0).rhs, params, rng);
        psstest::OracleResult r = psstest::oracle_check(*e.triad, ls.field, params, {{ls.x0, 0.0}});
        c.check(r.ok, std::string(n) + ": oracle " + r.detail);
    }
}

void criterion2(Criterion& c) {
    structure_and_curvature(c, "nls_plus", -1);
    std::mt19937_64 rng(18);
    const CatalogEntry& e = entry("nls_plus");
    psstest::OracleResult o = psstest::oracle_check(*e.triad, psstest::nls_soliton(1.2, 0.5), random_params(*e.triad, rng),
                                                    {{-0.4, 0.2}, {0.3, -0.1}});
    c.check(o.ok, "nls_plus: oracle " + o.detail);
}

void criterion3(Criterion& c) {
    const Triad& t = *entry("gch").triad;
    Lemma31Report r = lemma31_check(t);
    c.check(r.passed(), "gch: conditions failed");
    c.check(r.conditions.size() == 7, "gch: expected seven conditions");

    // f11 := u together with the matching affine f21, f31 and the same phi_i
    MuEta me = extract_mu_eta(t);
    Expr lam = split_lambda(t.eq()).lambda;
    auto phi = recover_phi(t, lam);
    Expr usq = J(0) * J(0);
    Expr g1 = J(0), g2 = me.mu2 * J(0) + me.eta2, g3 = me.mu3 * J(0) + me.eta3;
    Triad m({g1, -lam * usq * g1 + phi[0]}, {g2, -lam * usq * g2 + phi[1]}, {g3, -lam * usq * g3 + phi[2]}, 1, t.eq());
    Lemma31Report rm = lemma31_check(m);
    c.check(rm.failed() == std::vector<std::string>{"shift_invariance"},
            "mutation: failed conditions are not exactly shift_invariance");
    c.notes.push_back("mutation f_i1 = mu_i u + eta_i fails only shift_invariance; structure conditions skipped");
}

// ---------------------------------------------------------------------------

struct Display {
    std::string eq;
    std::array<std::string, 6> f;
};

void compare_display(Criterion& c, const std::string& label, const GeneratedFamily& g, const Display& d,
                     const SymbolTable& table) {
    Expr want_eq = parse_expr(d.eq, table);
    Expr got_eq = g.triad.eq().rule(0).rhs;
    c.check(want_eq == got_eq, label + ": equation " + render(got_eq) + " differs from " + render(want_eq));
    for (int k = 0; k < 6; ++k) {
        int i = k / 2 + 1, j = k % 2 + 1;
        Expr want = parse_expr(d.f[static_cast<std::size_t>(k)], table);
        c.check(want == g.triad.f(i, j), label + ": f" + std::to_string(i) + std::to_string(j) + " = " +
                                             triad_str(g.triad, i, j) + " differs from " + render(want));
    }
    c.check(structure_residuals(g.triad).all_zero(), label + ": generated triad does not verify");
}

SymbolTable display_table(int eps) {
    load_catalog();
    SymbolTable t = SymbolTable::from_registry();
    t.bind("pm", Expr(static_cast<long>(eps)));
    t.bind("mp", Expr(static_cast<long>(-eps)));
    Expr mu = Expr::param("mu");
    t.bind("s", sqrt_of(Expr(1L) + mu * mu));
    return t;
}

FamilySpec spec_of(const std::string& entry_name) {
    const CatalogEntry& e = entry(entry_name);
    if (!e.family) throw std::runtime_error(entry_name + " has no family spec");
    return *e.family;
}

void criterion4(Criterion& c) {
    Expr mu = Expr::param("mu"), eta = Expr::param("eta");

    for (int eps : {1, -1}) {
        SymbolTable t = display_table(eps);
        std::string tag = eps > 0 ? " (upper signs)" : " (lower signs)";

        FamilySpec s34 = spec_of("gch");
        s34.signs["eps"] = eps;
        s34.params["eta2"] = Expr(static_cast<long>(eps)) * t.symbols.at("s");
        std::string phi = "(u^2*u2 - 2*u^2*u1 + u*u1^2)";
        compare_display(c, "T34 gCH" + tag, generate(s34),
                        {"u^2*u3 - u^2*u2 - 3*u*u1^2 - 2*u^2*u1 + 4*u*u1*u2 + u1^3",
                         {"u - u2", phi, "mu*(u - u2) + pm*s", "mu*" + phi, "pm*s*(u - u2) + mu", "pm*s*" + phi}},
                        t);

        FamilySpec s32 = spec_of("t32_psi_uu1");
        s32.signs["eps"] = eps;
        s32.params["eta2"] = Expr(static_cast<long>(eps)) * Expr::param("a") * t.symbols.at("s");
        compare_display(c, "T32 psi = u u1" + tag, generate(s32),
                        {"a*u*u1 + u1^2 + u*u2",
                         {"u - u2", "u*u1", "mu*(u - u2) + pm*s*a", "mu*u*u1", "pm*s*(u - u2) + mu*a", "pm*s*u*u1"}},
                        t);

        FamilySpec s33 = spec_of("t33_linear");
        s33.params["mu3"] = Expr(static_cast<long>(-eps)) * mu;
        s33.params["eta3"] = Expr(static_cast<long>(-eps)) * eta;
        compare_display(c, "T33 f = u - u2" + tag, generate(s33),
                        {"u^2*u3 - 3*u^2*u1 + 2*u*u1*u2 + mp*2*(u1^2 + u*u2)",
                         {"u - u2", "-(u^2*(u - u2) + pm*2*u*u1)", "mu*(u - u2) + eta",
                          "-(mu*u^2*(u - u2) + eta*u^2 + pm*2*mu*u*u1)", "mp*(mu*(u - u2) + eta)",
                          "pm*(mu*u^2*(u - u2) + eta*u^2 + pm*2*mu*u*u1)"}},
                        t);

        // The display couples the equation (in zeta1) to the forms (in sigma)
        // through zeta1 = 2 sigma - 2 + eta^2; the f31 entry is written with
        // that relation, (zeta1 - eta^2)/2 = sigma - 1.
        FamilySpec s35 = spec_of("t35i_theta1");
        s35.signs["eps"] = eps;
        GeneratedFamily g35 = generate(s35);
        SymbolTable t35 = t;
        Expr sigma = Expr::param("sigma");
        Expr zeta1 = Expr(2L) * sigma - Expr(2L) + eta * eta;
        c.check(g35.derived.at("zeta1") == zeta1, "T35i: zeta1 = " + render(g35.derived.at("zeta1")));
        t35.bind("zeta1", zeta1);
        t35.bind("f11", g35.triad.f(1, 1));
        t35.bind("f12", g35.triad.f(1, 2));
        compare_display(c, "T35i theta = 1" + tag, g35,
                        {"u^2*u3 - 5*u^2*u1 + 4*u*u1*u2 + (2*zeta1 - 4)*u*u1 + 2*zeta1*u1 - 2*u1*u2",
                         {"u - u2 - sigma", "-(u^2*f11 + 2*u1^2 + (2*u + 2)*(u - sigma + mp*eta*u1))", "eta",
                          "-(eta*u^2 - (2*u + 2)*(pm*u1 - eta))", "pm*(u - u2 - (zeta1 - eta^2)/2)",
                          "pm*(f12 - u^2 - (2*u + 2))"}},
                        t35);

        // With the relation sigma = 1 + (zeta1 + eta^2)/2 instead, the displayed
        // equation and forms do not satisfy the structure equations.
        SymbolTable flipped = t35;
        Expr zp = Expr(2L) * sigma - Expr(2L) - eta * eta;
        flipped.bind("zeta1", zp);
        Expr eqp = parse_expr("u^2*u3 - 5*u^2*u1 + 4*u*u1*u2 + (2*zeta1 - 4)*u*u1 + 2*zeta1*u1 - 2*u1*u2", flipped);
        Triad tp({g35.triad.f(1, 1), g35.triad.f(1, 2)}, g35.triad.w2(),
                 {parse_expr("pm*(u - u2 - (zeta1 + eta^2)/2)", flipped), g35.triad.f(3, 2)}, 1,
                 EquationSpec::ch_type(eqp));
        c.check(!structure_residuals(tp).all_zero(), "T35i: sigma = 1 + (zeta1 + eta^2)/2 unexpectedly verifies");

        FamilySpec s35ii = spec_of("t35ii_phi_const");
        s35ii.signs["eps"] = eps;
        GeneratedFamily g2 = generate(s35ii);
        SymbolTable t2 = t;
        Expr tau = Expr::param("tau");
        t2.bind("lambda", Expr(1L));
        t2.bind("nu", tau);
        t2.bind("zeta2", sigma * inverse(tau));
        t2.bind("f11", g2.triad.f(1, 1));
        t2.bind("f12", g2.triad.f(1, 2));
        t2.bind("f21", g2.triad.f(2, 1));
        t2.bind("f22", g2.triad.f(2, 2));
        std::string e = "exp(pm*tau*u1)";
        compare_display(
            c, "T35ii phi = 1/tau" + tag, g2,
            {"lambda*(u^2*u3 - 3*u^2*u1 + 2*u*u1*u2 + 2*zeta2*u*u1 + mp*2/tau*(u1^2 + u*u2)) + (tau*u*u2 + pm*u1 - "
             "zeta2*tau*u2)*" + e,
             {"nu*(u - u2) - sigma", "-(lambda*u^2*f11 + mp*(nu*u - sigma)*" + e + " + pm*2*lambda*nu/tau*u*u1)",
              "mu*f11 + eta", "mu*f12 - lambda*eta*u^2 + pm*eta*" + e,
              "pm*(tau*(sigma/nu - zeta2)*((1 + mu^2)/eta*f11 + mu) - tau/nu*f21)",
              "pm*(tau*(sigma/nu - zeta2)*((1 + mu^2)/eta*f12 - mu*(lambda*u^2 + mp*" + e + ")) - tau/nu*f22)"}},
            t2);
    }
    c.notes.push_back("T35i compared with zeta1 = 2 sigma - 2 + eta^2 (corrected transcription); "
                      "sigma = 1 + (zeta1 + eta^2)/2 fails the structure equations");
}

// ---------------------------------------------------------------------------

std::string expected_pattern(Theorem th) {
    return th == Theorem::T35i || th == Theorem::T35ii ? "T35" : theorem_name(th);
}

void criterion5and6(Criterion& c5, Criterion& c6) {
    std::mt19937_64 rng(20240601);
    for (Theorem th : all_theorems()) {
        std::string name = theorem_name(th);
        for (int i = 0; i < 100; ++i) {
            std::string label = name + " draw " + std::to_string(i);
            FamilySpec s = draw_family(th, rng);
            std::optional<GeneratedFamily> drawn;
            try {
                drawn = generate(s);
            } catch (const Error& e) {
                c5.problems.push_back(label + ": " + e.what());
                continue;
            }
            const GeneratedFamily& g = *drawn;
            c5.check(structure_residuals(g.triad).all_zero(), label + ": nonzero residual");
            c5.check(nondegenerate(g.triad, static_cast<std::uint64_t>(i + 1)).ok, label + ": degenerate");
            c5.check(lemma31_check(g.triad).passed(), label + ": a condition failed");
            c5.check(g.quantities.pattern == expected_pattern(th), label + ": case pattern " + g.quantities.pattern);
            for (const auto& k : g.constraints) c5.check(k.holds(), label + ": constraint " + k.name);

            Triad flipped = g.triad.with_delta(-1);
            bool rejected = !structure_residuals(flipped).all_zero() || !lemma31_check(flipped).passed();
            c6.check(rejected, label + ": the delta = -1 triad still verifies");

            FamilySpec sp = s;
            sp.delta = -1;
            bool threw = false;
            try {
                generate(sp);
            } catch (const AssumptionViolated&) {
                threw = true;
            }
            c6.check(threw, label + ": generator accepted delta = -1");
        }
    }
}

void criterion7(Criterion& c) {
    LambdaSplit nov = split_lambda(entry("novikov").eq);
    MatchReport none = match_family(nov.lambda, nov.G, 4);
    c.check(none.verdicts.size() == 5, "novikov: expected five verdicts");
    for (const auto& v : none.verdicts) c.check(!v.matched, "novikov matched " + theorem_name(v.theorem));

    auto matched = [](const MatchReport& m, Theorem th) {
        for (const auto& v : m.verdicts)
            if (v.matched && v.theorem == th) return true;
        return false;
    };
    LambdaSplit g = split_lambda(entry("gch").eq);
    c.check(matched(match_family(g.lambda, g.G, 4), Theorem::T34), "gch: T34 not matched");

    for (int z : {-1, 3, 5}) {
        SymbolTable t;
        t.bind("zeta1", Expr(static_cast<long>(z)));
        Expr L = parse_expr("u^2*u3 - 5*u^2*u1 + 4*u*u1*u2 + (2*zeta1 - 4)*u*u1 + 2*zeta1*u1 - 2*u1*u2", t);
        LambdaSplit s = split_lambda(EquationSpec::ch_type(L));
        c.check(matched(match_family(s.lambda, s.G, 4), Theorem::T35i),
                "T35i example with zeta1 = " + std::to_string(z) + " not matched");
    }
}

void criterion8(Criterion& c) {
    psstest::ExprGen gen(808);
    const EquationSpec eq = EquationSpec::ch_type(J(0) * J(0) * J(3) + J(1) * J(2) - J(0));
    auto vars = psstest::x_jets(2);
    const Expr half(Rational(1, 2));
    std::vector<Triad> triads;
    for (int n = 0; n < 20; ++n) {
        Triad t(gen.one_form(vars, 2), gen.one_form(vars, 2), gen.one_form(vars, 2), 1, eq);
        Residuals r = structure_residuals(t);
        MatrixTwoForm z = zc_residual(omega_sl2(t), eq);
        bool ok = z.at(0, 0).c == half * r.r2.c && z.at(0, 1).c == half * (r.r1.c - r.r3.c) &&
                  z.at(1, 0).c == half * (r.r1.c + r.r3.c) && z.at(1, 1).c == -half * r.r2.c;
        c.check(ok, "triad " + std::to_string(n) + ": sl2 residual is not the documented combination");
        triads.push_back(t);
    }
    std::mt19937_64& rng = gen.rng();
    for (int n = 0; n < 10; ++n) {
        Rational a = gen.rational(true), b = gen.rational(), cc = gen.rational();
        Rational d = (1 + b * cc) / a;
        ConstMatrix A = const_matrix({{Expr(a), Expr(b)}, {Expr(cc), Expr(d)}});
        const Triad& t = triads[rng() % triads.size()];
        MatrixForm m = omega_sl2(t);
        MatrixTwoForm lhs = zc_residual(gauge_transform(m, A), eq);
        MatrixTwoForm rhs = conjugate(zc_residual(m, eq), A);
        bool ok = determinant(A) == Expr(1L);
        for (std::size_t k = 0; k < 4; ++k) ok = ok && lhs.entries[k].c == rhs.entries[k].c;
        c.check(ok, "gauge matrix " + std::to_string(n) + ": covariance fails");
    }
    for (const Triad& t : {triads[0], *entry("gch").triad}) {
        MatrixForm g = gauge_transform(omega_sl2(t), su2_gauge());
        MatrixForm p = omega_su2(t);
        bool ok = true;
        for (std::size_t k = 0; k < 4; ++k) ok = ok && g.entries[k] == p.entries[k];
        c.check(ok, "su2 gauge does not produce the su2 pattern");
    }
}

void criterion9(Criterion& c) {
    for (const char* n : {"sg", "gch"}) {
        AknsData d = akns_extract(*entry(n).triad);
        for (int k = 0; k < 3; ++k)
            c.check(d.residuals[static_cast<std::size_t>(k)].is_zero(),
                    std::string(n) + ": equation " + std::to_string(k + 1) + " leaves " +
                        render(d.residuals[static_cast<std::size_t>(k)]));
    }
}

void criterion10(Criterion& c) {
    const int n = 500;
    std::vector<std::pair<std::string, psstest::PropResult>> runs{
        {"Leibniz diff", psstest::prop_leibniz_diff(1001, n)},
        {"Leibniz total_dx", psstest::prop_leibniz_total_dx(1002, n)},
        {"wedge antisymmetry", psstest::prop_wedge_antisymmetry(1003, n)},
        {"exterior Leibniz", psstest::prop_exterior_leibniz(1004, n)},
        {"reduce_tjets idempotence", psstest::prop_reduce_idempotent(1005, n)},
        {"eval consistency", psstest::prop_eval_consistency(1006, n)},
    };
    for (const auto& [name, r] : runs) {
        c.check(r.cases >= 500, name + ": only " + std::to_string(r.cases) + " cases");
        c.check(r.failures == 0, name + ": " + std::to_string(r.failures) + " failures, first " + r.first);
    }
}

struct CliRun {
    int code;
    std::string out;
};

CliRun cli(const std::vector<std::string>& args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = run_cli(args, in, out, err);
    return {code, out.str()};
}

void criterion11(Criterion& c) {
    CliRun cat = cli({"catalog", "--run"});
    c.check(cat.code == kExitOk, "catalog --run exited " + std::to_string(cat.code));
    std::size_t passes = 0;
    for (std::size_t at = cat.out.find("PASS "); at != std::string::npos; at = cat.out.find("PASS ", at + 1)) ++passes;
    c.check(passes == load_catalog().size() && passes >= 12, "catalog --run gave " + std::to_string(passes) + " PASS lines");

    for (const char* th : {"T32", "T33", "T34", "T35i", "T35ii"}) {
        for (int seed = 1; seed <= 20; ++seed) {
            std::string label = std::string(th) + " seed " + std::to_string(seed);
            CliRun g = cli({"generate", "--draw", th, "--seed", std::to_string(seed)});
            c.check(g.code == kExitOk, label + ": generate exited " + std::to_string(g.code));
            CliRun v = cli({"verify", "-"}, g.out);
            c.check(v.code == kExitOk, label + ": verify exited " + std::to_string(v.code));
        }
    }

    std::string m = manifest_for_entry(entry("t35ii_phi_const"));
    for (const std::vector<std::string>& args : std::vector<std::vector<std::string>>{
             {"catalog", "--run", "--seed", "3"}, {"generate", "--draw", "T35i", "--seed", "9"},
             {"eval", "-", "--samples", "30", "--seed", "2"}, {"zcr", "-", "--algebra", "su2"}}) {
        CliRun a = cli(args, m), b = cli(args, m);
        c.check(a.out == b.out && a.code == b.code, args[0] + ": reports differ between identical runs");
    }
}

}  // namespace

int main() {
    std::vector<Criterion> cs{
        {1, "pseudospherical catalog verifies with K = -1", {}, {}},
        {2, "spherical NLS entry verifies with K = +1", {}, {}},
        {3, "triad condition checker and shift-invariance mutation", {}, {}},
        {4, "generators reproduce the displayed examples", {}, {}},
        {5, "generator soundness over 100 draws per family", {}, {}},
        {6, "spherical exclusion for every family", {}, {}},
        {7, "Novikov has no family; gCH and the T35i example do", {}, {}},
        {8, "zero-curvature equivalence and gauge covariance", {}, {}},
        {9, "AKNS system for sine-Gordon and gCH", {}, {}},
        {10, "kernel property suites", {}, {}},
        {11, "CLI catalog run, generate|verify and determinism", {}, {}},
    };
    std::vector<std::function<void()>> runs{
        [&] { criterion1(cs[0]); },  [&] { criterion2(cs[1]); },  [&] { criterion3(cs[2]); },
        [&] { criterion4(cs[3]); },  [&] { criterion5and6(cs[4], cs[5]); }, [] {},
        [&] { criterion7(cs[6]); },  [&] { criterion8(cs[7]); },  [&] { criterion9(cs[8]); },
        [&] { criterion10(cs[9]); }, [&] { criterion11(cs[10]); },
    };
    for (std::size_t i = 0; i < runs.size(); ++i) {
        try {
            runs[i]();
        } catch (const std::exception& e) {
            cs[i].problems.push_back(std::string("exception: ") + e.what());
        }
    }

    int failed = 0;
    for (const Criterion& c : cs) {
        bool ok = c.problems.empty();
        failed += ok ? 0 : 1;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title << '\n';
        for (const std::string& n : c.notes) std::cout << "    note: " << n << '\n';
        for (std::size_t k = 0; k < c.problems.size() && k < 10; ++k) std::cout << "    " << c.problems[k] << '\n';
        if (c.problems.size() > 10) std::cout << "    ... " << c.problems.size() - 10 << " more\n";
    }
    std::cout << (cs.size() - static_cast<std::size_t>(failed)) << "/" << cs.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
