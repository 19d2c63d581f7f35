#include "psskit/catalog.hpp"

#include "psskit/errors.hpp"

namespace psskit {

namespace {

struct Symbols {
    Expr u, u1, u2, u3, v, v1, v2;
    Expr mu, eta, a, sigma, tau;
};

Symbols symbols() {
    Symbols s;
    s.u = Expr::var(jet(0));
    s.u1 = Expr::var(jet(1));
    s.u2 = Expr::var(jet(2));
    s.u3 = Expr::var(jet(3));
    s.v = Expr::var(jet(0, 1));
    s.v1 = Expr::var(jet(1, 1));
    s.v2 = Expr::var(jet(2, 1));
    s.mu = Expr::param(declare_param("mu", Assumption::Real));
    s.eta = Expr::param(declare_param("eta", Assumption::Nonzero));
    s.a = Expr::param(declare_param("a", Assumption::Nonzero));
    s.sigma = Expr::param(declare_param("sigma", Assumption::Real));
    s.tau = Expr::param(declare_param("tau", Assumption::Positive));
    return s;
}

CatalogEntry from_family(std::string name, std::string title, const FamilySpec& spec, std::string family) {
    GeneratedFamily g = generate(spec);
    return CatalogEntry{std::move(name), std::move(title), g.triad.eq(), g.triad,
                        Expected{true, 1, true, std::move(family)}, spec};
}

CatalogEntry plain(std::string name, std::string title, Triad t, Expected e) {
    EquationSpec eq = t.eq();
    return CatalogEntry{std::move(name), std::move(title), std::move(eq), std::move(t), std::move(e), std::nullopt};
}

std::vector<CatalogEntry> build() {
    Symbols S = symbols();
    const Expr &u = S.u, &u1 = S.u1, &u2 = S.u2, &u3 = S.u3, &v = S.v, &v1 = S.v1, &v2 = S.v2;
    const Expr &mu = S.mu, &eta = S.eta;
    Expr one(1L), two(2L), half(Rational(1, 2));
    Expr w = u - u2;
    Expr smu = sqrt_of(one + mu * mu);
    Expr ieta = inverse(eta);
    std::vector<CatalogEntry> out;

    {
        EquationSpec eq = EquationSpec::xt_type(make_sin(u));
        out.push_back(plain("sg", "sine-Gordon u_xt = sin u",
                            Triad({Expr(), ieta * make_sin(u)}, {eta, ieta * make_cos(u)}, {u1, Expr()}, 1, eq),
                            Expected{true, 1, std::nullopt, std::nullopt}));
    }
    for (int sg : {1, -1}) {
        Expr e(static_cast<long>(sg));
        EquationSpec eq = EquationSpec::ch_type(u * u3 + Expr(3L) * u1 * u2 - Expr(4L) * u * u1);
        Expr phi = u * u2 - two * u * u1 + u1 * u1;
        out.push_back(plain(sg > 0 ? "dp_plus" : "dp_minus", "Degasperis-Procesi, symbolic mu",
                            Triad({w, phi}, {mu * w + two * e * smu, mu * phi}, {e * smu * w + two * mu, e * smu * phi}, 1, eq),
                            Expected{true, 1, std::nullopt, std::nullopt}));
    }
    {
        Expr n2 = u * u + v * v;
        DepNames names{{"u", "v"}};
        EquationSpec eq = EquationSpec::evolution({-v2 - two * n2 * v, u2 + two * n2 * u}, names);
        out.push_back(plain("nls_plus", "focusing NLS as a real system, symbolic eta",
                            Triad({two * v, two * (Expr(-2L) * eta * v + u1)}, {two * eta, two * (Expr(-2L) * eta * eta + n2)},
                                  {Expr(-2L) * u, two * (two * eta * u + v1)}, -1, eq),
                            Expected{true, -1, std::nullopt, std::nullopt}));
        EquationSpec alt = EquationSpec::evolution({-v2 - two * n2 * u, u2 + two * n2 * v}, names);
        out.push_back(plain("nls_plus_alt", "NLS system and forms with alternative signs (does not verify)",
                            Triad({two * v, two * (Expr(-2L) * eta * v + u1)}, {two * eta, two * (Expr(-2L) * eta * eta + n2)},
                                  {Expr(-2L) * u, two * (eta * u + v1)}, -1, alt),
                            Expected{false, -1, std::nullopt, std::nullopt}));
    }
    {
        EquationSpec eq = EquationSpec::ch_type(u * u3 + two * u1 * u2 - Expr(3L) * u * u1);
        Expr h = half * eta * eta;
        for (int sg : {1, -1}) {
            Expr e(static_cast<long>(sg));
            Expr f11 = w + h - one;
            Expr f12 = -u * (w + h) + e * eta * u1 - h + one;
            Expr f22 = -eta * u + e * u1 - eta;
            Expr f31 = e * (w + h);
            Expr f32 = -e * (u * (w + h) + u + h) + eta * u1;
            out.push_back(plain(sg > 0 ? "ch_plus" : "ch_minus", "Camassa-Holm, symbolic eta",
                                Triad({f11, f12}, {eta, f22}, {f31, f32}, 1, eq),
                                Expected{true, 1, std::nullopt, std::nullopt}));
        }
        Expr f11 = w + h - one;
        Expr f12 = -u * (w + h) + eta * u1 - h + one;
        Expr f22 = -eta * u + u1 - eta;
        out.push_back(plain("ch_plus_alt", "Camassa-Holm with alternative f31, f32 (does not verify)",
                            Triad({f11, f12}, {eta, f22}, {w - h, u * (w + h) + eta * u1 + u + h}, 1, eq),
                            Expected{false, 1, std::nullopt, std::nullopt}));
    }
    for (int sg : {1, -1}) {
        FamilySpec s;
        s.theorem = Theorem::T34;
        s.params = {{"lambda", one}, {"mu2", mu}, {"eta2", Expr(static_cast<long>(sg)) * smu}, {"C1", Expr()}};
        s.signs["eps"] = sg;
        s.slots = {{"f", w}, {"phi1", u * u1 * u1 - two * u * u * u1 + u * u * u}};
        out.push_back(from_family(sg > 0 ? "gch" : "gch_minus", "generalized Camassa-Holm, symbolic mu", s, "T34"));
    }
    {
        const std::pair<const char*, Expr> psis[] = {
            {"t32_psi_uu1", u * u1}, {"t32_psi_exp", make_exp(u * u1)}, {"t32_psi_u3", u * u * u}, {"t32_psi_u1sq", u1 * u1}};
        for (const auto& [name, psi] : psis) {
            FamilySpec s;
            s.theorem = Theorem::T32;
            s.params = {{"mu2", mu}, {"eta2", S.a * smu}};
            s.signs["eps"] = 1;
            s.slots = {{"f", w}, {"phi1", psi}};
            out.push_back(from_family(name, "f = u - u2 with psi = " + render(psi) + ", symbolic mu, a", s, "T32"));
        }
    }
    {
        const std::pair<const char*, Expr> fs[] = {{"t33_linear", w}, {"t33_exp", make_exp(w)}, {"t33_square", w * w}};
        for (const auto& [name, f] : fs) {
            FamilySpec s;
            s.theorem = Theorem::T33;
            s.params = {{"lambda", one}, {"mu2", mu}, {"eta2", eta}, {"mu3", -mu}, {"eta3", -eta}};
            s.slots = {{"f", f}};
            out.push_back(from_family(name, "lambda = 1, f = " + render(f) + ", symbolic mu, eta", s, "T33"));
        }
    }
    {
        FamilySpec s;
        s.theorem = Theorem::T35i;
        s.params = {{"lambda", one}, {"mu2", Expr()}, {"eta2", eta}, {"C2", Expr()},
                    {"theta", one},  {"nu", one},     {"sigma", S.sigma}};
        s.signs["eps"] = 1;
        out.push_back(from_family("t35i_theta1", "theta = 1, C2 = 0, lambda = 1, mu2 = 0, nu = 1, symbolic eta, sigma", s,
                                  "T35"));
    }
    {
        FamilySpec s;
        s.theorem = Theorem::T35ii;
        Expr itau = inverse(S.tau);
        s.params = {{"lambda", one}, {"mu2", mu},       {"eta2", eta},        {"nu", S.tau},
                    {"sigma", S.sigma}, {"tau", S.tau}, {"zeta2", S.sigma * itau}};
        s.signs["eps"] = 1;
        s.slots = {{"phi", itau}};
        out.push_back(from_family("t35ii_phi_const", "phi = 1/tau, nu = tau, zeta2 = sigma/tau, symbolic mu, eta", s, "T35"));
    }
    {
        EquationSpec eq = EquationSpec::ch_type(u * u * u3 + Expr(3L) * u * u1 * u2 - Expr(4L) * u * u * u1);
        out.push_back(CatalogEntry{"novikov", "Novikov cubic equation (no triad)", eq, std::nullopt,
                                   Expected{false, 1, std::nullopt, std::string("none")}, std::nullopt});
    }
    return out;
}

}  // namespace

const std::vector<CatalogEntry>& load_catalog() {
    static const std::vector<CatalogEntry> entries = build();
    return entries;
}

const CatalogEntry* find_entry(const std::string& name) {
    for (const CatalogEntry& e : load_catalog())
        if (e.name == name) return &e;
    return nullptr;
}

EntryCheck check_entry(const CatalogEntry& e, std::uint64_t seed) {
    EntryCheck out;
    out.name = e.name;
    const DepNames& names = e.eq.names();
    auto expect = [&](bool cond, const std::string& what) {
        if (!cond) out.mismatches.push_back(what);
    };
    try {
        if (e.triad) {
            const Triad& t = *e.triad;
            Residuals r = structure_residuals(t);
            out.observations.push_back("residuals " + render(r.r1.c, names) + ", " + render(r.r2.c, names) + ", " +
                                       render(r.r3.c, names));
            bool verifies = r.all_zero();
            expect(verifies == e.expected.verifies,
                   std::string("expected the structure equations to ") + (e.expected.verifies ? "hold" : "fail"));
            expect(t.delta() == e.expected.delta, "delta differs from the expected value");
            if (verifies) {
                Nondegeneracy nd = nondegenerate(t, seed);
                out.observations.push_back(nd.ok ? "nondegenerate" : "degenerate");
                expect(nd.ok, "triad is degenerate");
                Expr K = gaussian_curvature(t);
                out.observations.push_back("K = " + render(K, names));
                expect(K == Expr(static_cast<long>(-t.delta())), "curvature differs from -delta");
                CrossCheck cc = cross_check_structure(t, 50, seed);
                out.observations.push_back("numeric check " + std::string(cc.ok ? "ok" : "failed"));
                expect(cc.ok, "numeric cross-check failed: " + cc.detail);
            }
            if (e.expected.lemma31) {
                bool passed = lemma31_check(t, 2, seed).passed();
                out.observations.push_back(std::string("lemma conditions ") + (passed ? "pass" : "fail"));
                expect(passed == *e.expected.lemma31, "lemma verdict differs");
            }
            if (e.expected.family) {
                std::string pattern;
                try {
                    pattern = quantities(t).pattern;
                } catch (const Error&) {
                    pattern = "none";
                }
                out.observations.push_back("family " + pattern);
                expect(pattern == *e.expected.family, "family pattern " + pattern + " differs");
            }
        } else if (e.expected.family) {
            LambdaSplit sp = split_lambda(e.eq);
            MatchReport m = match_family(sp.lambda, sp.G);
            std::string got = "none";
            for (const auto& v : m.verdicts)
                if (v.matched) got = theorem_name(v.theorem);
            out.observations.push_back("matched family " + got);
            expect(got == *e.expected.family, "family match " + got + " differs");
        }
    } catch (const Error& ex) {
        out.mismatches.push_back(std::string("error: ") + ex.what());
    }
    out.pass = out.mismatches.empty();
    return out;
}

}  // namespace psskit
