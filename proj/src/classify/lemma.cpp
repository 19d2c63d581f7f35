#include <cmath>

#include "psskit/classify.hpp"
#include "psskit/errors.hpp"

namespace psskit {

std::string theorem_name(Theorem t) {
    switch (t) {
    case Theorem::T32: return "T32";
    case Theorem::T33: return "T33";
    case Theorem::T34: return "T34";
    case Theorem::T35i: return "T35i";
    case Theorem::T35ii: return "T35ii";
    }
    return "?";
}

std::optional<Theorem> parse_theorem(const std::string& s) {
    for (Theorem t : all_theorems())
        if (theorem_name(t) == s) return t;
    return std::nullopt;
}

const std::vector<Theorem>& all_theorems() {
    static const std::vector<Theorem> all{Theorem::T32, Theorem::T33, Theorem::T34, Theorem::T35i, Theorem::T35ii};
    return all;
}

std::map<Monomial, Expr, MonoLess> split_by_jets(const Expr& e) {
    std::map<Monomial, Expr, MonoLess> out;
    for (const Term& t : e.terms()) {
        Monomial key;
        key.jets = t.mono.jets;
        key.funcs = t.mono.funcs;
        Monomial coeff;
        coeff.params = t.mono.params;
        out[key] += Expr::from_terms({Term{t.coeff, coeff}});
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

namespace {

Expr affine_coefficient(const Expr& f11, const Expr& fp1, const std::string& which) {
    auto a = split_by_jets(f11);
    auto b = split_by_jets(fp1);
    const Expr* lead = nullptr;
    Monomial key;
    for (auto& [k, c] : a) {
        if (!k.empty()) {
            key = k;
            lead = &c;
            break;
        }
    }
    if (!lead) throw NotAffinelyRelated("f11 is constant, so " + which + " has no affine relation to it");
    Expr num = b.count(key) ? b[key] : Expr();
    auto mu = exact_divide(num, *lead);
    if (!mu) throw NotAffinelyRelated("coefficient ratio for " + which + " is not a constant: " + render(num) + " / " + render(*lead));
    return *mu;
}

Expr check_jet_free(const Expr& e, const std::string& which) {
    if (!jets_of(e).empty()) throw NotAffinelyRelated(which + " - mu f11 leaves " + render(e));
    return e;
}

Expr jet_free_u(int power) { return Expr::var(jet(0), power); }

}  // namespace

MuEta extract_mu_eta(const Triad& t) {
    MuEta m;
    m.mu2 = affine_coefficient(t.f(1, 1), t.f(2, 1), "f21");
    m.eta2 = check_jet_free(t.f(2, 1) - m.mu2 * t.f(1, 1), "f21");
    m.mu3 = affine_coefficient(t.f(1, 1), t.f(3, 1), "f31");
    m.eta3 = check_jet_free(t.f(3, 1) - m.mu3 * t.f(1, 1), "f31");
    return m;
}

LambdaSplit split_lambda(const EquationSpec& eq, int power) {
    if (eq.nvars() != 1 || eq.rule(0).cls != EqClass::ChType)
        throw MalformedSpec("the lemma checker applies to single-variable CH-type equations");
    const Expr& rhs = eq.rule(0).rhs;
    Expr up = jet_free_u(power);
    Expr key = up * Expr::var(jet(3));
    LambdaSplit out;
    // lambda from the u3-derivative
    Expr d3 = diff(rhs, jet(3));
    auto q = d3.is_zero() ? std::optional<Expr>(Expr()) : exact_divide(d3, up);
    if (q && jets_of(*q).empty() && !has_funcs(*q)) {
        out.lambda = *q;
    } else {
        auto parts = split_by_jets(rhs);
        auto it = parts.find(key.terms()[0].mono);
        if (it != parts.end()) out.lambda = it->second;
    }
    out.G = rhs - out.lambda * key;
    return out;
}

std::array<Expr, 3> recover_phi(const Triad& t, const Expr& lambda, int power) {
    std::array<Expr, 3> phi;
    const std::set<JetVar> allowed{jet(0), jet(1)};
    Expr up = jet_free_u(power);
    for (int i = 1; i <= 3; ++i) {
        phi[static_cast<std::size_t>(i - 1)] = t.f(i, 2) + lambda * up * t.f(i, 1);
        if (!depends_only_on(phi[static_cast<std::size_t>(i - 1)], allowed))
            throw PhiNotRecoverable("phi" + std::to_string(i) + " = " + render(phi[static_cast<std::size_t>(i - 1)]) +
                                    " depends on more than u, u1");
    }
    return phi;
}

bool Lemma31Report::passed() const {
    if (conditions.empty()) return false;
    for (const auto& c : conditions)
        if (!c.evaluated || !c.ok) return false;
    return true;
}

const Condition* Lemma31Report::find(const std::string& name) const {
    for (const auto& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

std::vector<std::string> Lemma31Report::failed() const {
    std::vector<std::string> out;
    for (const auto& c : conditions)
        if (c.evaluated && !c.ok) out.push_back(c.name);
    return out;
}

Lemma31Report lemma31_check(const Triad& t, int power, std::uint64_t seed) {
    Lemma31Report rep;
    rep.power = power;
    auto split = split_lambda(t.eq(), power);
    rep.lambda = split.lambda;
    rep.G = split.G;
    rep.mu_eta = extract_mu_eta(t);
    const MuEta& me = *rep.mu_eta;
    const Expr& lam = rep.lambda;
    const DepNames& names = t.eq().names();
    const JetVar U = jet(0), U1 = jet(1), U2 = jet(2);

    {
        Condition c{"jet_order", true, ""};
        for (int i = 1; i <= 3 && c.ok; ++i) {
            if (!diff(t.f(i, 1), U1).is_zero()) {
                c.ok = false;
                c.detail = "f" + std::to_string(i) + "1 depends on u1";
            }
            for (int j = 1; j <= 2 && c.ok; ++j) {
                if (max_xorder(t.f(i, j)) > 2) {
                    c.ok = false;
                    c.detail = "f" + std::to_string(i) + std::to_string(j) + " depends on jets of order 3 or more";
                }
            }
        }
        rep.conditions.push_back(c);
    }
    {
        Condition c{"shift_invariance", true, ""};
        for (int i = 1; i <= 3 && c.ok; ++i) {
            Expr r = diff(t.f(i, 1), U) + diff(t.f(i, 1), U2);
            if (!r.is_zero()) {
                c.ok = false;
                c.detail = "f" + std::to_string(i) + "1,u + f" + std::to_string(i) + "1,u2 = " + render(r, names);
            }
        }
        rep.conditions.push_back(c);
    }
    {
        Condition c{"phi_recovery", true, ""};
        try {
            rep.phi = recover_phi(t, lam, power);
        } catch (const PhiNotRecoverable& e) {
            c.ok = false;
            c.detail = e.what();
        }
        rep.conditions.push_back(c);
    }
    if (!rep.phi) {
        for (const char* n : {"structure_1", "structure_2", "structure_3", "coframe"})
            rep.conditions.push_back(Condition{n, false, "not evaluated: phi recovery failed", false});
        return rep;
    }
    const auto& phi = *rep.phi;
    const Expr& f11 = t.f(1, 1);
    Expr L2 = phi[1] - me.mu2 * phi[0];
    Expr L3 = phi[2] - me.mu3 * phi[0];
    Expr M = me.mu2 * phi[2] - me.mu3 * phi[1];
    Expr N = me.eta2 * phi[2] - me.eta3 * phi[1];
    Expr Q = -(L3 + me.mu2 * M);
    Expr d(static_cast<long>(t.delta()));
    Expr u1 = Expr::var(U1), u2 = Expr::var(U2);
    Expr up = jet_free_u(power);
    Expr dup = Expr(static_cast<long>(power)) * jet_free_u(power - 1);
    Expr f11u = diff(f11, U);

    bool prerequisites = rep.conditions[0].ok && rep.conditions[1].ok;
    auto structural = [&](const char* name, const Expr& e) {
        if (!prerequisites) {
            rep.conditions.push_back(Condition{name, false, "not evaluated: jet_order or shift_invariance failed", false});
            return;
        }
        Condition c{name, e.is_zero(), ""};
        if (!c.ok) c.detail = "residual " + render(e, names);
        rep.conditions.push_back(c);
    };
    structural("structure_1", -rep.G * f11u + (-lam * dup * f11 - lam * up * f11u + diff(phi[0], U)) * u1 +
                          diff(phi[0], U1) * u2 + M * f11 + N);
    structural("structure_2", Q * f11 + diff(L2, U) * u1 + diff(L2, U1) * u2 - lam * dup * me.eta2 * u1 - me.mu2 * N +
                          me.eta3 * phi[0]);
    structural("structure_3", -(d * L2 + me.mu3 * M) * f11 + diff(L3, U) * u1 + diff(L3, U1) * u2 -
                          lam * dup * me.eta3 * u1 - me.mu3 * N + d * me.eta2 * phi[0]);
    {
        Expr e = -L2 * f11 + me.eta2 * phi[0];
        Condition c{"coframe", false, ""};
        if (e.is_zero()) {
            c.detail = "-L2 f11 + eta2 phi1 is identically zero";
        } else {
            std::mt19937_64 rng(seed);
            for (int i = 0; i < 20 && !c.ok; ++i) {
                Assignment s = random_assignment_for({e}, rng);
                try {
                    c.ok = std::fabs(eval_at(e, s)) > 1e-6;
                } catch (const DomainError&) {
                }
            }
            if (!c.ok) c.detail = "-L2 f11 + eta2 phi1 vanished at every sample";
        }
        rep.conditions.push_back(c);
    }
    return rep;
}

std::string case_pattern(const Expr& Q, const Expr& L2, const Expr& gamma) {
    bool q = Q.is_zero(), l = L2.is_zero(), g = gamma.is_zero();
    if (q && l && g) return "T32";
    if (q && l && !g) return "T33";
    if (q && !l && g) return "T34";
    if (!q && !l && !g) return "T35";
    return "none";
}

ClassifierQuantities quantities(const Triad& t, int power) {
    MuEta me = extract_mu_eta(t);
    auto split = split_lambda(t.eq(), power);
    auto phi = recover_phi(t, split.lambda, power);
    ClassifierQuantities q;
    q.delta = t.delta();
    q.L2 = phi[1] - me.mu2 * phi[0];
    q.L3 = phi[2] - me.mu3 * phi[0];
    q.M = me.mu2 * phi[2] - me.mu3 * phi[1];
    q.N = me.eta2 * phi[2] - me.eta3 * phi[1];
    q.Q = -(q.L3 + me.mu2 * q.M);
    Expr s2 = Expr(1L) + me.mu2 * me.mu2;
    q.gamma = me.mu2 * me.mu3 * me.eta2 - s2 * me.eta3;
    q.alpha = Expr(static_cast<long>(t.delta())) * s2 - me.mu3 * me.mu3;
    q.pattern = case_pattern(q.Q, q.L2, q.gamma);
    return q;
}

}  // namespace psskit
