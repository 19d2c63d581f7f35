#include <algorithm>

#include "psskit/classify.hpp"
#include "psskit/errors.hpp"

namespace psskit {

bool MatchReport::any() const {
    return std::any_of(verdicts.begin(), verdicts.end(), [](const FamilyVerdict& v) { return v.matched; });
}

namespace {

const JetVar JU = jet(0), JU1 = jet(1), JU2 = jet(2);

Expr U() { return Expr::var(JU); }
Expr U1() { return Expr::var(JU1); }
Expr U2() { return Expr::var(JU2); }

// Terms whose exponent of v is exactly k, with v removed.
Expr coeff_of(const Expr& e, JetVar v, int k) {
    std::vector<Term> out;
    for (const Term& t : e.terms()) {
        int ex = 0;
        Term r{t.coeff, t.mono};
        r.mono.jets.clear();
        for (auto& [jv, p] : t.mono.jets) {
            if (jv == v)
                ex = p;
            else
                r.mono.jets.emplace_back(jv, p);
        }
        if (ex == k) out.push_back(std::move(r));
    }
    return Expr::from_terms(std::move(out));
}

int degree_in(const Expr& e, JetVar v) {
    int d = 0;
    for (const Term& t : e.terms())
        for (auto& [jv, p] : t.mono.jets)
            if (jv == v) d = std::max(d, p);
    return d;
}

int total_degree(const Expr& e) {
    int d = 0;
    for (const Term& t : e.terms()) {
        int s = 0;
        for (auto& jp : t.mono.jets) s += jp.second;
        d = std::max(d, s);
    }
    return d;
}

// Antiderivative in v with zero constant of integration; polynomial input only.
Expr integrate(const Expr& e, JetVar v) {
    std::vector<Term> out;
    for (const Term& t : e.terms()) {
        Term r{t.coeff, t.mono};
        bool found = false;
        for (auto& [jv, p] : r.mono.jets) {
            if (jv == v) {
                r.coeff /= p + 1;
                ++p;
                found = true;
            }
        }
        if (!found) {
            r.mono.jets.emplace_back(v, 1);
            std::sort(r.mono.jets.begin(), r.mono.jets.end());
        }
        out.push_back(std::move(r));
    }
    return Expr::from_terms(std::move(out));
}

// Coefficient equations of e in its jets, with negative powers of x cleared.
std::vector<Expr> coefficient_equations(const Expr& e, ParamId x) {
    std::vector<Expr> eqs;
    for (auto& [key, c] : split_by_jets(e)) {
        int low = 0;
        for (const Term& t : c.terms())
            for (auto& [id, p] : t.mono.params)
                if (id == x) low = std::min(low, p);
        eqs.push_back(low < 0 ? c * Expr::param(x, -low) : c);
    }
    return eqs;
}

bool mentions(const Expr& e, ParamId p) { return params_of(e).count(p) > 0; }

std::vector<mpz_class> divisors(mpz_class n) {
    std::vector<mpz_class> out;
    n = abs(n);
    if (n == 0) return out;
    for (mpz_class d = 1; d * d <= n && d <= 2000000; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n) out.push_back(n / d);
        }
    }
    return out;
}

// Rational roots of a polynomial in the single parameter x.
std::vector<Rational> rational_roots(const Expr& poly, ParamId x) {
    std::map<int, Rational> c;
    for (const Term& t : poly.terms()) {
        if (!t.mono.jets.empty() || !t.mono.funcs.empty()) return {};
        int p = 0;
        for (auto& [id, k] : t.mono.params) {
            if (id != x) return {};
            p = k;
        }
        if (p < 0) return {};
        c[p] += t.coeff;
    }
    std::vector<Rational> roots;
    if (c.empty()) return roots;
    int low = c.begin()->first;
    if (low > 0) roots.push_back(Rational(0));
    mpz_class den = 1;
    for (auto& [p, q] : c) den = lcm(den, mpz_class(q.get_den()));
    mpz_class a0 = Rational(c.begin()->second * den).get_num();
    mpz_class an = Rational(c.rbegin()->second * den).get_num();
    if (c.size() == 1) return roots;
    auto value = [&](const Rational& r) {
        Rational v = 0, rp = 1;
        for (int p = low, i = 0; i <= c.rbegin()->first - low; ++p, ++i) {
            if (auto it = c.find(p); it != c.end()) v += it->second * rp;
            rp *= r;
        }
        return v;
    };
    for (const mpz_class& pn : divisors(a0)) {
        for (const mpz_class& qd : divisors(an)) {
            for (int sg : {1, -1}) {
                Rational r(pn * sg, qd);
                r.canonicalize();
                if (value(r) == 0 && std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

struct Candidate {
    FamilySpec spec;
    std::string note;
};

FamilyVerdict no_match(Theorem th, std::string reason) { return FamilyVerdict{th, false, std::nullopt, std::move(reason)}; }

// Regenerates each candidate and keeps the first whose equation is exactly (lambda, G).
FamilyVerdict confirm(Theorem th, const Expr& lambda, const Expr& G, const std::vector<Candidate>& cands,
                      std::string fallback) {
    std::string reason = std::move(fallback);
    for (const Candidate& c : cands) {
        try {
            GeneratedFamily g = generate(c.spec);
            if (g.lambda == lambda && g.G == G) return FamilyVerdict{th, true, c.spec, c.note};
            reason = "candidate " + c.note + " regenerates G with residual " + render(g.G - G);
        } catch (const Error& e) {
            reason = "candidate " + c.note + " is inadmissible: " + e.what();
        }
    }
    return no_match(th, reason);
}

ParamId scratch(const char* name, Assumption a) { return declare_param(name, a); }

Expr lin_w() { return U() - U2(); }

// G = u1 psi_u + u2 psi_u1 + A psi - lambda u^2 u1 - (2 lambda u u1 + A lambda u^2 + B)(u - u2), the shape shared
// by T32 (lambda = B = 0) and T34 after scaling f to u - u2.
std::vector<Candidate> psi_family_candidates(Theorem th, const Rational& lam, const Expr& G, int max_degree,
                                             std::string* why) {
    std::vector<Candidate> out;
    bool allowB = th == Theorem::T34;
    if (degree_in(G, JU2) > 1) {
        *why = "G is not affine in u2";
        return out;
    }
    Expr u = U(), u1 = U1(), u2 = U2(), w = lin_w(), L(lam);
    Expr G1 = coeff_of(G, JU2, 1), G0 = coeff_of(G, JU2, 0);
    Expr G00 = coeff_of(G0, JU1, 0);
    Expr PG = integrate(G1, JU1);
    auto realize = [&](const Rational& A, const Rational& B, const Expr& psi, const Expr& f) {
        FamilySpec s;
        s.theorem = th;
        s.params = {{"lambda", L}, {"mu2", Expr()}, {"eta2", Expr(A)}};
        if (allowB) s.params["C1"] = Expr(B);
        s.signs["eps"] = 1;
        s.slots = {{"f", f}, {"phi1", psi}};
        return Candidate{s, "eta2 = " + render(A) + (allowB ? ", C1 = " + render(B) : "") + ", phi1 = " + render(psi)};
    };

    ParamId a_id = scratch("_match_A", Assumption::Nonzero);
    ParamId b_id = scratch("_match_B", Assumption::Real);
    Expr A = Expr::param(a_id), B = allowB ? Expr::param(b_id) : Expr();
    Expr P = PG - L * u * u1 * u1 - A * L * u * u * u1 - B * u1;
    Expr h = (G00 + A * L * u * u * u + B * u) * inverse(A);
    Expr psi = P + h;
    Expr T = u1 * diff(psi, JU) + u2 * diff(psi, JU1) + A * psi;
    Expr R = G + L * u * u * u1 + Expr(2L) * L * u * u1 * w + A * L * u * u * w + B * w;
    auto eqs = coefficient_equations(T - R, a_id);

    std::vector<Rational> roots;
    bool have = false;
    for (const Expr& e : eqs) {
        if (e.is_zero() || mentions(e, b_id)) continue;
        auto r = rational_roots(e, a_id);
        if (!have) {
            roots = r;
            have = true;
        } else {
            std::vector<Rational> keep;
            for (auto& x : roots)
                if (std::find(r.begin(), r.end(), x) != r.end()) keep.push_back(x);
            roots = keep;
        }
    }
    if (!have) *why = "the coefficient equations do not determine eta2";
    for (const Rational& a : roots) {
        if (a == 0) continue;
        Rational bval = 0;
        bool ok = true;
        for (const Expr& e : eqs) {
            Expr ea = substitute(e, a_id, Expr(a));
            if (!allowB) {
                ok = ok && ea.is_zero();
                continue;
            }
            Expr c1 = diff(ea, b_id), c0 = substitute(ea, b_id, Expr());
            if (!c1.is_zero() && bval == 0 && c0.is_rational() && c1.is_rational()) {
                bval = -*c0.as_rational() / *c1.as_rational();
                break;
            }
        }
        if (!ok) continue;
        Expr p = substitute(substitute(psi, a_id, Expr(a)), b_id, Expr(bval));
        if (total_degree(p) > max_degree) {
            *why = "phi1 = " + render(p) + " exceeds the degree bound";
            continue;
        }
        out.push_back(realize(a, bval, p, w));
    }
    if (out.empty() && have && roots.empty()) *why = "no rational eta2 satisfies the coefficient equations";

    if (allowB) {
        // eta2 = 0: the u1-free part of G must be -C1 (u + d) for f = u - u2 + d.
        if (degree_in(G00, JU) <= 1 && jets_of(G00).size() <= 1) {
            Rational g1 = coeff_of(G00, JU, 1).as_rational().value_or(0);
            Rational g0 = coeff_of(G00, JU, 0).as_rational().value_or(0);
            if (g1 != 0) {
                Rational bv = -g1, d = -g0 / bv;
                Expr hh = integrate(coeff_of(G0, JU1, 1) + Expr(3L) * L * u * u, JU);
                Expr p = PG - L * u * u1 * u1 - Expr(bv) * u1 + hh;
                if (total_degree(p) <= max_degree) out.push_back(realize(0, bv, p, w + Expr(d)));
            }
        }
    }
    return out;
}

FamilyVerdict match_T32(const Rational& lam, const Expr& G, int D) {
    if (lam != 0) return no_match(Theorem::T32, "T32 requires lambda = 0");
    if (has_funcs(G)) return no_match(Theorem::T32, "G has exponential terms outside the linear-f ansatz");
    std::string why = "no candidate parameters";
    auto c = psi_family_candidates(Theorem::T32, lam, G, D, &why);
    return confirm(Theorem::T32, Expr(lam), G, c, why);
}

FamilyVerdict match_T34(const Rational& lam, const Expr& G, int D) {
    if (has_funcs(G)) return no_match(Theorem::T34, "G has exponential terms outside the linear-f ansatz");
    std::string why = "no candidate parameters";
    auto c = psi_family_candidates(Theorem::T34, lam, G, D, &why);
    return confirm(Theorem::T34, Expr(lam), G, c, why);
}

FamilyVerdict match_T33(const Rational& lam, const Expr& G) {
    if (lam == 0) return no_match(Theorem::T33, "T33 requires lambda != 0");
    if (has_funcs(G)) return no_match(Theorem::T33, "G has exponential terms outside the linear-f ansatz");
    Expr u = U(), u1 = U1(), u2 = U2(), L(lam);
    Expr rest = G - L * (Expr(-3L) * u * u * u1 + Expr(2L) * u * u1 * u2);
    Expr cq = coeff_of(coeff_of(coeff_of(rest, JU1, 2), JU, 0), JU2, 0);
    Expr cb = coeff_of(coeff_of(coeff_of(rest, JU1, 1), JU, 1), JU2, 0);
    Rational ap = -cq.as_rational().value_or(0) / lam, bp = -cb.as_rational().value_or(0) / lam;
    Expr shape = -L * (Expr(ap) * (u1 * u1 + u * u2) + Expr(bp) * u * u1);
    if (rest != shape)
        return no_match(Theorem::T33, "G - lambda*(-3*u^2*u1 + 2*u*u1*u2) leaves " + render(rest - shape) +
                                          " outside -lambda*(a*(u1^2 + u*u2) + b*u*u1)");
    if (ap == 0) return no_match(Theorem::T33, "the coefficient of u1^2 + u*u2 vanishes, so 2*eta2/gamma = 0");
    int eps = ap > 0 ? 1 : -1;
    Rational c = 2 / abs(ap), d = bp * c / 2;
    FamilySpec s;
    s.theorem = Theorem::T33;
    s.params = {{"lambda", L}, {"mu2", Expr()}, {"eta2", Expr(1L)}, {"mu3", Expr()}, {"eta3", Expr(static_cast<long>(-eps))}};
    s.slots = {{"f", Expr(c) * lin_w() + Expr(d)}};
    return confirm(Theorem::T33, L, G, {{s, "a = " + render(ap) + ", b = " + render(bp)}}, "");
}

struct ExpSplit {
    Expr plain;
    Expr coeff;  // coefficient of the exponential
    std::optional<Expr> arg;
    std::string problem;
};

ExpSplit split_exp(const Expr& G) {
    ExpSplit out;
    std::vector<Term> plain, withexp;
    for (const Term& t : G.terms()) {
        if (t.mono.funcs.empty()) {
            plain.push_back(t);
            continue;
        }
        if (t.mono.funcs.size() != 1 || t.mono.funcs[0].kind != FuncKind::Exp || t.mono.funcs[0].power != 1) {
            out.problem = "unsupported function factor";
            continue;
        }
        const Expr& a = *t.mono.funcs[0].arg;
        if (out.arg && *out.arg != a) out.problem = "more than one exponential";
        out.arg = a;
        Term r{t.coeff, t.mono};
        r.mono.funcs.clear();
        withexp.push_back(std::move(r));
    }
    out.plain = Expr::from_terms(std::move(plain));
    out.coeff = Expr::from_terms(std::move(withexp));
    return out;
}

// The rational c with arg = c*v, if any.
std::optional<Rational> linear_in(const Expr& arg, JetVar v) {
    if (arg.size() != 1) return std::nullopt;
    const Term& t = arg.terms()[0];
    if (!t.mono.params.empty() || !t.mono.funcs.empty() || t.mono.jets.size() != 1) return std::nullopt;
    if (t.mono.jets[0].first != v || t.mono.jets[0].second != 1) return std::nullopt;
    return t.coeff;
}

Rational rat(const Expr& e) { return e.as_rational().value_or(0); }

Expr mono_coeff(const Expr& e, int pu, int pu1, int pu2) {
    return coeff_of(coeff_of(coeff_of(e, JU, pu), JU1, pu1), JU2, pu2);
}

FamilyVerdict match_T35i(const Rational& lam, const Expr& G) {
    ExpSplit sp = split_exp(G);
    if (!sp.problem.empty()) return no_match(Theorem::T35i, sp.problem);
    Rational theta, C2 = 0, zeta1;
    if (sp.arg) {
        auto th = linear_in(*sp.arg, JU);
        if (!th || *th == 0) return no_match(Theorem::T35i, "exponential argument is not theta*u");
        theta = *th;
        C2 = rat(mono_coeff(sp.coeff, 0, 3, 0)) / (theta * theta);
        if (C2 == 0) return no_match(Theorem::T35i, "no u1^3*exp(theta*u) term");
        zeta1 = -rat(mono_coeff(sp.coeff, 0, 1, 0)) / (theta * C2);
    } else {
        if (lam == 0) return no_match(Theorem::T35i, "lambda = C2 = 0 is excluded");
        Rational c = rat(mono_coeff(G, 0, 1, 1));
        if (c == 0) return no_match(Theorem::T35i, "no u1*u2 term, so -2*lambda/theta = 0");
        theta = -2 * lam / c;
        zeta1 = rat(mono_coeff(G, 0, 1, 0)) * theta / (2 * lam);
    }
    FamilySpec s;
    s.theorem = Theorem::T35i;
    s.params = {{"lambda", Expr(lam)}, {"mu2", Expr()},       {"eta2", Expr(1L)},
                {"C2", Expr(C2)},      {"theta", Expr(theta)}, {"nu", Expr(1L)},
                {"sigma", Expr(Rational((zeta1 + theta) / 2))}};
    s.signs["eps"] = 1;
    return confirm(Theorem::T35i, Expr(lam), G,
                   {{s, "theta = " + render(theta) + ", C2 = " + render(C2) + ", zeta1 = " + render(zeta1)}}, "");
}

FamilyVerdict match_T35ii(const Rational& lam, const Expr& G, int D) {
    ExpSplit sp = split_exp(G);
    if (!sp.problem.empty()) return no_match(Theorem::T35ii, sp.problem);
    if (!sp.arg) return no_match(Theorem::T35ii, "G has no exp(+-tau*u1) term");
    auto c = linear_in(*sp.arg, JU1);
    if (!c || *c == 0) return no_match(Theorem::T35ii, "exponential argument is not +-tau*u1");
    int eps = *c > 0 ? 1 : -1;
    Rational tau = abs(*c), t2 = tau * tau;
    ParamId z_id = scratch("_match_Z", Assumption::Real);
    Expr Z = lam != 0 ? Expr(Rational(rat(mono_coeff(sp.plain, 1, 1, 0)) / (2 * lam))) : Expr::param(z_id);
    // tau^2 (u - zeta2) phi + phi' equals the u2-coefficient of the exponential part.
    Expr hu2 = coeff_of(coeff_of(sp.coeff, JU2, 1), JU1, 0);
    if (hu2.is_zero() || jets_of(hu2).size() > 1 || (jets_of(hu2).size() == 1 && *jets_of(hu2).begin() != JU))
        return no_match(Theorem::T35ii, "the u2 coefficient of the exponential part is not a nonzero function of u");
    int n = degree_in(hu2, JU) - 1;
    if (n < 0) return no_match(Theorem::T35ii, "the u2 coefficient of the exponential part has no u dependence");
    std::vector<Expr> phi(static_cast<std::size_t>(n + 2));
    auto H = [&](int j) { return coeff_of(hu2, JU, j); };
    phi[static_cast<std::size_t>(n)] = H(n + 1) * Expr(Rational(1 / t2));
    for (int j = n; j >= 1; --j)
        phi[static_cast<std::size_t>(j - 1)] =
            (H(j) - Expr(static_cast<long>(j + 1)) * phi[static_cast<std::size_t>(j + 1)]) * Expr(Rational(1 / t2)) +
            Z * phi[static_cast<std::size_t>(j)];
    Expr last = Expr(Rational(-t2)) * Z * phi[0] + phi[1] - H(0);
    std::vector<Rational> zetas;
    if (lam != 0) {
        if (!last.is_zero()) return no_match(Theorem::T35ii, "phi recursion leaves " + render(last));
        zetas.push_back(rat(Z));
    } else {
        zetas = rational_roots(last, z_id);
        if (last.is_zero()) zetas = {Rational(0)};
    }
    std::vector<Candidate> cands;
    for (const Rational& z : zetas) {
        Expr p;
        for (int j = 0; j <= n; ++j)
            p += substitute(phi[static_cast<std::size_t>(j)], z_id, Expr(z)) * Expr::var(JU, j);
        if (total_degree(p) > D) continue;
        FamilySpec s;
        s.theorem = Theorem::T35ii;
        s.params = {{"lambda", Expr(lam)}, {"mu2", Expr()},        {"eta2", Expr(1L)}, {"nu", Expr(tau)},
                    {"sigma", Expr(Rational(tau * z))}, {"tau", Expr(tau)}, {"zeta2", Expr(z)}};
        s.signs["eps"] = eps;
        s.slots = {{"phi", p}};
        cands.push_back({s, "tau = " + render(tau) + ", zeta2 = " + render(z) + ", phi = " + render(p)});
    }
    return confirm(Theorem::T35ii, Expr(lam), G, cands, "no rational zeta2 solves the phi recursion");
}

}  // namespace

MatchReport match_family(const Expr& lambda, const Expr& G, int max_degree) {
    auto lam = lambda.as_rational();
    if (!lam) throw UnsupportedAnsatz("lambda must be a rational constant");
    if (!params_of(G).empty()) throw UnsupportedAnsatz("G must have rational coefficients");
    if (!depends_only_on(G, {JU, JU1, JU2})) throw UnsupportedAnsatz("G must depend only on u, u1, u2");
    for (const Term& t : G.terms())
        for (const FuncFactor& f : t.mono.funcs)
            if (f.kind != FuncKind::Exp) throw UnsupportedAnsatz("G contains a function factor outside exp(...)");
    MatchReport r;
    r.verdicts.push_back(match_T32(*lam, G, max_degree));
    r.verdicts.push_back(match_T33(*lam, G));
    r.verdicts.push_back(match_T34(*lam, G, max_degree));
    r.verdicts.push_back(match_T35i(*lam, G));
    r.verdicts.push_back(match_T35ii(*lam, G, max_degree));
    return r;
}

}  // namespace psskit
