#include "psskit/classify.hpp"
#include "psskit/errors.hpp"

namespace psskit {

namespace {

Expr U() { return Expr::var(jet(0)); }
Expr U1() { return Expr::var(jet(1)); }
Expr U2() { return Expr::var(jet(2)); }
Expr U3() { return Expr::var(jet(3)); }

Expr need(const FamilySpec& s, const std::string& name) {
    auto it = s.params.find(name);
    if (it == s.params.end()) throw MissingSlot("parameter '" + name + "' is required for " + theorem_name(s.theorem));
    if (!jets_of(it->second).empty()) throw AssumptionViolated("parameter '" + name + "' must not depend on jets");
    return it->second;
}

Expr slot(const FamilySpec& s, const std::string& name) {
    auto it = s.slots.find(name);
    if (it == s.slots.end()) throw MissingSlot("slot '" + name + "' is required for " + theorem_name(s.theorem));
    return it->second;
}

Expr eps_of(const FamilySpec& s) {
    auto it = s.signs.find("eps");
    if (it == s.signs.end()) throw MissingSlot("sign choice 'eps' is required for " + theorem_name(s.theorem));
    if (it->second != 1 && it->second != -1) throw AssumptionViolated("sign choice 'eps' must be +1 or -1");
    return Expr(static_cast<long>(it->second));
}

void require_pseudospherical(const FamilySpec& s) {
    if (s.delta != 1)
        throw AssumptionViolated("equations of this class cannot describe spherical surfaces (delta must be +1)");
}

Expr recip(const Expr& e, const std::string& what) {
    if (e.is_zero()) throw AssumptionViolated(what + " must be nonzero");
    if (!is_unit(e)) throw AssumptionViolated(what + " = " + render(e) + " must be a monomial in nonzero parameters");
    return inverse(e);
}

void require_nonzero(const Expr& e, const std::string& what) {
    if (e.is_zero()) throw AssumptionViolated(what + " must be nonzero");
}

void require_positive(const Expr& e, const std::string& what) {
    bool ok = false;
    if (auto q = e.as_rational()) {
        ok = *q > 0;
    } else if (e.size() == 1 && jets_of(e).empty() && !has_funcs(e) && e.terms()[0].coeff > 0) {
        ok = true;
        for (auto& [id, k] : e.terms()[0].mono.params) ok = ok && (param_info(id).positive() || k % 2 == 0);
    }
    if (!ok) throw AssumptionViolated(what + " must be positive");
}

// f must be a nonconstant function of u - u2.
Expr check_f(const Expr& f) {
    if (!depends_only_on(f, {jet(0), jet(2)}) || !(diff(f, jet(0)) + diff(f, jet(2))).is_zero())
        throw AssumptionViolated("slot f = " + render(f) + " must be a function of u - u2");
    Expr fp = diff(f, jet(0));
    if (fp.is_zero()) throw AssumptionViolated("slot f must have f' != 0");
    return fp;
}

Expr reciprocal_of_fprime(const Expr& fp) { return is_unit(fp) ? inverse(fp) : make_pow(fp, -1); }

void check_phi1(const Expr& phi1) {
    if (!depends_only_on(phi1, {jet(0), jet(1)}))
        throw AssumptionViolated("slot phi1 = " + render(phi1) + " must depend only on u, u1");
    require_nonzero(phi1, "slot phi1");
}

GeneratedFamily finish(Theorem th, const Expr& lambda, const Expr& G, OneForm w1, OneForm w2, OneForm w3,
                       std::vector<ConstraintEntry> constraints, std::map<std::string, Expr> derived) {
    EquationSpec eq = EquationSpec::ch_type(lambda * U() * U() * U3() + G);
    Triad t(std::move(w1), std::move(w2), std::move(w3), 1, std::move(eq));
    ClassifierQuantities q = quantities(t, 2);
    return GeneratedFamily{th, lambda, G, std::move(t), std::move(q), std::move(constraints), std::move(derived)};
}

}  // namespace

GeneratedFamily generate_T32(const FamilySpec& spec) {
    require_pseudospherical(spec);
    Expr mu2 = need(spec, "mu2"), eta2 = need(spec, "eta2");
    if (auto it = spec.params.find("lambda"); it != spec.params.end() && !it->second.is_zero())
        throw AssumptionViolated("T32 forces lambda = 0");
    Expr eps = eps_of(spec);
    Expr f = slot(spec, "f"), phi1 = slot(spec, "phi1");
    Expr fp = check_f(f);
    check_phi1(phi1);
    require_nonzero(eta2, "eta2");
    Expr s = sqrt_of(Expr(1L) + mu2 * mu2);
    Expr is = inverse(s);
    Expr u1 = U1(), u2 = U2();

    Expr G = reciprocal_of_fprime(fp) *
             (diff(phi1, jet(0)) * u1 + diff(phi1, jet(1)) * u2 + eps * eta2 * is * phi1);
    OneForm w1{f, phi1};
    OneForm w2{mu2 * f + eta2, mu2 * phi1};
    OneForm w3{eps * (s * f + mu2 * eta2 * is), eps * s * phi1};
    Expr mu3 = eps * s, eta3 = eps * mu2 * eta2 * is;
    Expr gamma = mu2 * mu3 * eta2 - s * s * eta3;
    std::vector<ConstraintEntry> c{{"gamma", gamma, true}, {"eta2", eta2, false}};
    return finish(Theorem::T32, Expr(), G, w1, w2, w3, c, {{"s", s}, {"mu3", mu3}, {"eta3", eta3}, {"a", eps * eta2 * is}});
}

GeneratedFamily generate_T33(const FamilySpec& spec) {
    require_pseudospherical(spec);
    Expr lambda = need(spec, "lambda"), mu2 = need(spec, "mu2"), eta2 = need(spec, "eta2");
    Expr mu3 = need(spec, "mu3"), eta3 = need(spec, "eta3");
    Expr f = slot(spec, "f");
    Expr fp = check_f(f);
    require_nonzero(lambda * eta2, "lambda*eta2");
    Expr cross = mu2 * eta3 - mu3 * eta2;
    Expr identity = eta2 * eta2 - eta3 * eta3 - cross * cross;
    if (!identity.is_zero())
        throw ConstraintViolated("eta2^2 - eta3^2 - (mu2*eta3 - mu3*eta2)^2 = " + render(identity) + " must vanish");
    Expr gamma = mu2 * mu3 * eta2 - (Expr(1L) + mu2 * mu2) * eta3;
    Expr a = Expr(2L) * eta2 * recip(gamma, "gamma");
    Expr b = -a * cross;
    Expr u = U(), u1 = U1(), u2 = U2();
    Expr uu1 = u * u1, usq = u * u;

    Expr G = -lambda * reciprocal_of_fprime(fp) *
             (Expr(2L) * uu1 * f + usq * u1 * fp + a * (u1 * u1 + u * u2) + b * uu1);
    Expr f21 = mu2 * f + eta2, f31 = mu3 * f + eta3;
    OneForm w1{f, -lambda * (usq * f + a * uu1)};
    OneForm w2{f21, -lambda * (usq * f21 + a * mu2 * uu1)};
    OneForm w3{f31, -lambda * (usq * f31 + a * mu3 * uu1)};
    std::vector<ConstraintEntry> c{{"eta2^2 - eta3^2 - (mu2*eta3 - mu3*eta2)^2", identity, true},
                                   {"gamma", gamma, false},
                                   {"lambda*eta2", lambda * eta2, false}};
    return finish(Theorem::T33, lambda, G, w1, w2, w3, c, {{"a", a}, {"b", b}, {"gamma", gamma}});
}

GeneratedFamily generate_T34(const FamilySpec& spec) {
    require_pseudospherical(spec);
    Expr lambda = need(spec, "lambda"), mu2 = need(spec, "mu2"), eta2 = need(spec, "eta2"), C1 = need(spec, "C1");
    Expr eps = eps_of(spec);
    Expr f = slot(spec, "f"), phi1 = slot(spec, "phi1");
    Expr fp = check_f(f);
    check_phi1(phi1);
    Expr le = lambda * eta2;
    Expr guard = le * le + C1 * C1;
    if (le.is_zero() && C1.is_zero()) throw AssumptionViolated("(lambda*eta2)^2 + C1^2 must be nonzero");
    Expr s = sqrt_of(Expr(1L) + mu2 * mu2);
    Expr is = inverse(s);
    Expr u = U(), u1 = U1(), u2 = U2();
    Expr usq = u * u;

    Expr G = reciprocal_of_fprime(fp) *
             (u1 * diff(phi1, jet(0)) + u2 * diff(phi1, jet(1)) - lambda * usq * u1 * fp + eps * eta2 * is * phi1 -
              (Expr(2L) * lambda * u * u1 + eps * eta2 * is * lambda * usq + eps * C1 * is) * f);
    OneForm w1{f, -(lambda * usq * f - phi1)};
    OneForm w2{mu2 * f + eta2, -(lambda * mu2 * usq * f - mu2 * phi1 - C1)};
    OneForm w3{eps * (s * f + mu2 * eta2 * is), -eps * s * (lambda * usq * f - phi1 - mu2 * C1 * is * is)};
    Expr L2_expected = lambda * eta2 * usq + C1;
    std::vector<ConstraintEntry> c{{"(lambda*eta2)^2 + C1^2", guard, false}};
    GeneratedFamily g = finish(Theorem::T34, lambda, G, w1, w2, w3, c,
                               {{"s", s}, {"mu3", eps * s}, {"eta3", eps * mu2 * eta2 * is}});
    g.constraints.push_back({"Q", g.quantities.Q, true});
    g.constraints.push_back({"L2 - (lambda*eta2*u^2 + C1)", g.quantities.L2 - L2_expected, true});
    g.constraints.push_back({"gamma", g.quantities.gamma, true});
    return g;
}

GeneratedFamily generate_T35i(const FamilySpec& spec) {
    require_pseudospherical(spec);
    Expr lambda = need(spec, "lambda"), mu2 = need(spec, "mu2"), eta2 = need(spec, "eta2");
    Expr C2 = need(spec, "C2"), theta = need(spec, "theta"), nu = need(spec, "nu"), sigma = need(spec, "sigma");
    Expr eps = eps_of(spec);
    if (lambda.is_zero() && C2.is_zero()) throw AssumptionViolated("lambda^2 + C2^2 must be nonzero");
    Expr it = recip(theta, "theta"), in = recip(nu, "nu");
    Expr s = sqrt_of(Expr(1L) + mu2 * mu2);
    Expr is = inverse(s);
    Expr u = U(), u1 = U1(), u2 = U2();
    Expr usq = u * u;
    Expr ex = make_exp(theta * u);

    Expr mu3 = eps * s;
    Expr eta3 = eps * (theta + mu2 * eta2 * nu) * in * is;
    Expr zeta1 = Expr(2L) * sigma * in - it - theta * in * in * is * is -
                 eta2 * (Expr(2L) * theta * mu2 - nu * eta2) * it * in * is * is;
    Expr E = Expr(2L) * lambda * it - theta * C2 * ex + Expr(2L) * lambda * u;

    Expr G = lambda * (Expr(-5L) * usq * u1 + Expr(4L) * u * u1 * u2 + (Expr(2L) * zeta1 - Expr(4L) * it) * u * u1 -
                       Expr(2L) * it * u1 * u2 + Expr(2L) * zeta1 * it * u1) +
             (theta * u1 * u1 * u1 + Expr(2L) * u * u1 + u1 * u2 - zeta1 * u1) * theta * C2 * ex;
    Expr f11 = nu * (u - u2) - sigma;
    Expr f12 = -(lambda * usq * f11 + nu * it * (Expr(2L) * lambda - theta * theta * C2 * ex) * u1 * u1 +
                 E * ((nu * u - sigma) * it + eps * (mu2 - nu * eta2 * it) * u1 * is));
    Expr f21 = mu2 * f11 + eta2;
    Expr f22 = mu2 * f12 - lambda * eta2 * usq + E * (eps * s * u1 - eta2 * it);
    Expr f31 = mu3 * f11 + eta3;
    Expr f32 = mu3 * f12 - lambda * eta3 * usq + E * (mu2 * u1 - eta3 * it);
    std::vector<ConstraintEntry> c{{"lambda^2 + C2^2", lambda * lambda + C2 * C2, false}};
    GeneratedFamily g = finish(Theorem::T35i, lambda, G, {f11, f12}, {f21, f22}, {f31, f32}, c,
                               {{"s", s}, {"mu3", mu3}, {"eta3", eta3}, {"zeta1", zeta1}});
    g.constraints.push_back({"Q", g.quantities.Q, false});
    g.constraints.push_back({"L2", g.quantities.L2, false});
    g.constraints.push_back({"gamma", g.quantities.gamma, false});
    g.constraints.push_back({"alpha", g.quantities.alpha, true});
    return g;
}

GeneratedFamily generate_T35ii(const FamilySpec& spec) {
    require_pseudospherical(spec);
    Expr lambda = need(spec, "lambda"), mu2 = need(spec, "mu2"), eta2 = need(spec, "eta2");
    Expr nu = need(spec, "nu"), sigma = need(spec, "sigma"), tau = need(spec, "tau"), zeta2 = need(spec, "zeta2");
    Expr eps = eps_of(spec);
    Expr phi = slot(spec, "phi");
    if (!depends_only_on(phi, {jet(0)})) throw AssumptionViolated("slot phi = " + render(phi) + " must depend only on u");
    require_nonzero(phi, "slot phi");
    require_positive(tau, "tau");
    Expr itau = recip(tau, "tau"), in = recip(nu, "nu"), ie = recip(eta2, "eta2");
    Expr s = sqrt_of(Expr(1L) + mu2 * mu2);
    Expr s2 = s * s;
    Expr k = sigma * in - zeta2;
    Expr mu3 = eps * tau * (s2 * k * ie - mu2 * in);
    Expr eta3 = eps * tau * (mu2 * k - eta2 * in);
    Expr constraint = tau * tau - nu * nu * (s2 - mu3 * mu3);
    if (!constraint.is_zero())
        throw ConstraintViolated("tau^2 - nu^2*(1 + mu2^2 - mu3^2) = " + render(constraint) + " must vanish");

    Expr u = U(), u1 = U1(), u2 = U2();
    Expr usq = u * u;
    Expr e = make_exp(eps * tau * u1);
    Expr dphi = diff(phi, jet(0)), ddphi = diff(dphi, jet(0));
    Expr G = lambda * (Expr(-3L) * usq * u1 + Expr(2L) * u * u1 * u2 + Expr(2L) * zeta2 * u * u1 -
                       eps * Expr(2L) * itau * (u1 * u1 + u * u2)) +
             ddphi * u1 * u1 * e + tau * (tau * u * u2 + eps * u1 - zeta2 * tau * u2) * phi * e +
             eps * (tau * u * u1 + tau * u1 * u2 + eps * u2 - zeta2 * tau * u1) * dphi * e;
    Expr f11 = nu * (u - u2) - sigma;
    Expr f12 = -(lambda * usq * f11 - (eps * tau * (nu * u - sigma) * phi + nu * dphi * u1) * e +
                 eps * Expr(2L) * lambda * nu * itau * u * u1);
    Expr f21 = mu2 * f11 + eta2;
    Expr f22 = mu2 * f12 - lambda * eta2 * usq + eps * tau * eta2 * phi * e;
    Expr f31 = eps * tau * (k * (s2 * ie * f11 + mu2) - in * f21);
    Expr f32 = eps * tau * (k * (s2 * ie * f12 - mu2 * (lambda * usq - eps * tau * phi * e)) - in * f22);
    Expr zeta2_check = zeta2 - (sigma * in - eps * (mu3 * eta2 - mu2 * eta3) * itau);
    std::vector<ConstraintEntry> c{{"tau^2 - nu^2*(1 + mu2^2 - mu3^2)", constraint, true},
                                   {"zeta2 - (sigma/nu -+ (mu3*eta2 - mu2*eta3)/tau)", zeta2_check, true}};
    GeneratedFamily g = finish(Theorem::T35ii, lambda, G, {f11, f12}, {f21, f22}, {f31, f32}, c,
                               {{"s", s}, {"mu3", mu3}, {"eta3", eta3}, {"k", k}});
    g.constraints.push_back({"L2 -+ eta2*tau*phi*exp(+-tau*u1)", g.quantities.L2 - eps * eta2 * tau * phi * e, true});
    g.constraints.push_back({"Q", g.quantities.Q, false});
    g.constraints.push_back({"gamma", g.quantities.gamma, false});
    g.constraints.push_back({"alpha", g.quantities.alpha, false});
    return g;
}

GeneratedFamily generate(const FamilySpec& spec) {
    switch (spec.theorem) {
    case Theorem::T32: return generate_T32(spec);
    case Theorem::T33: return generate_T33(spec);
    case Theorem::T34: return generate_T34(spec);
    case Theorem::T35i: return generate_T35i(spec);
    case Theorem::T35ii: return generate_T35ii(spec);
    }
    throw MalformedSpec("unknown theorem");
}

const std::vector<Expr>& f_slot_pool() {
    static const std::vector<Expr> pool = [] {
        Expr w = U() - U2();
        return std::vector<Expr>{w, make_exp(w), w * w};
    }();
    return pool;
}

const std::vector<Expr>& phi1_slot_pool() {
    static const std::vector<Expr> pool = [] {
        Expr u = U(), u1 = U1();
        return std::vector<Expr>{u * u1, u * u * u, u * u1 * u1 - Expr(2L) * u * u * u1 + u * u * u};
    }();
    return pool;
}

const std::vector<Expr>& phi_slot_pool() {
    static const std::vector<Expr> pool = [] {
        Expr u = U();
        return std::vector<Expr>{u * u * u, Expr(1L), u};
    }();
    return pool;
}

namespace {

Rational draw_rational(std::mt19937_64& rng, int maxnum = 4, int maxden = 3) {
    std::uniform_int_distribution<int> num(-maxnum, maxnum), den(1, maxden);
    return Rational(num(rng), den(rng));
}

Rational draw_nonzero(std::mt19937_64& rng, int maxnum = 4, int maxden = 3) {
    for (;;) {
        Rational q = draw_rational(rng, maxnum, maxden);
        q.canonicalize();
        if (q != 0) return q;
    }
}

template <class T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
    return v[d(rng)];
}

int draw_sign(std::mt19937_64& rng) { return (rng() & 1) ? 1 : -1; }

Rational canon(Rational q) {
    q.canonicalize();
    return q;
}

}  // namespace

FamilySpec draw_family(Theorem th, std::mt19937_64& rng) {
    FamilySpec s;
    s.theorem = th;
    s.delta = 1;
    auto& p = s.params;
    switch (th) {
    case Theorem::T32:
        p["lambda"] = Expr();
        p["mu2"] = canon(draw_rational(rng));
        p["eta2"] = draw_nonzero(rng);
        s.signs["eps"] = draw_sign(rng);
        s.slots["f"] = pick(f_slot_pool(), rng);
        s.slots["phi1"] = pick(phi1_slot_pool(), rng);
        break;
    case Theorem::T33: {
        // Rational points on the eta identity: mu3 = 1 + a', eta3 = eta2 (mu2 mu3 + k) / (1 + mu2^2)
        // with a' = -(2 + 2 mu2 t) / (1 + t^2) and k = mu2 + t a'.
        for (;;) {
            Rational mu2 = canon(draw_rational(rng)), t = canon(draw_rational(rng));
            Rational ap = canon(-(2 + 2 * mu2 * t) / (1 + t * t));
            Rational mu3 = canon(1 + ap), k = canon(mu2 + t * ap);
            Rational eta2 = draw_nonzero(rng);
            Rational eta3 = canon(eta2 * (mu2 * mu3 + k) / (1 + mu2 * mu2));
            Rational gamma = canon(mu2 * mu3 * eta2 - (1 + mu2 * mu2) * eta3);
            Rational cross = canon(mu2 * eta3 - mu3 * eta2);
            if (k == 0 || gamma == 0 || eta2 * eta2 - eta3 * eta3 - cross * cross != 0) continue;
            p["mu2"] = mu2;
            p["mu3"] = mu3;
            p["eta2"] = eta2;
            p["eta3"] = eta3;
            break;
        }
        p["lambda"] = draw_nonzero(rng);
        s.slots["f"] = pick(f_slot_pool(), rng);
        break;
    }
    case Theorem::T34: {
        Rational lambda = canon(draw_rational(rng)), eta2 = canon(draw_rational(rng)), C1 = canon(draw_rational(rng));
        while (lambda * eta2 == 0 && C1 == 0) C1 = draw_nonzero(rng);
        p["lambda"] = lambda;
        p["mu2"] = canon(draw_rational(rng));
        p["eta2"] = eta2;
        p["C1"] = C1;
        s.signs["eps"] = draw_sign(rng);
        s.slots["f"] = pick(f_slot_pool(), rng);
        s.slots["phi1"] = pick(phi1_slot_pool(), rng);
        break;
    }
    case Theorem::T35i: {
        Rational lambda = canon(draw_rational(rng)), C2 = canon(draw_rational(rng));
        while (lambda == 0 && C2 == 0) lambda = draw_nonzero(rng);
        p["lambda"] = lambda;
        p["C2"] = C2;
        p["mu2"] = canon(draw_rational(rng));
        p["eta2"] = canon(draw_rational(rng));
        p["theta"] = draw_nonzero(rng);
        p["nu"] = draw_nonzero(rng);
        p["sigma"] = canon(draw_rational(rng));
        s.signs["eps"] = draw_sign(rng);
        break;
    }
    case Theorem::T35ii: {
        // mu2 = (m^2 - n^2) / 2mn keeps s rational; mu3 = s (p^2 - q^2) / (p^2 + q^2) and
        // tau = |nu| * 2spq / (p^2 + q^2) then satisfy the constraint.
        std::uniform_int_distribution<int> pos(1, 4);
        int m = pos(rng), n = pos(rng), pp = pos(rng), qq = pos(rng);
        Rational mu2 = canon(Rational(m * m - n * n, 2 * m * n));
        Rational sv = canon(Rational(m * m + n * n, 2 * m * n));
        Rational mu3 = canon(sv * Rational(pp * pp - qq * qq, pp * pp + qq * qq));
        Rational a = canon(sv * Rational(2 * pp * qq, pp * pp + qq * qq));
        Rational nu = draw_nonzero(rng), eta2 = draw_nonzero(rng), sigma = canon(draw_rational(rng));
        int eps = draw_sign(rng);
        Rational tau = canon(abs(nu) * a);
        Rational k = canon(eta2 * (mu3 / (eps * tau) + mu2 / nu) / (sv * sv));
        p["lambda"] = canon(draw_rational(rng));
        p["mu2"] = mu2;
        p["eta2"] = eta2;
        p["nu"] = nu;
        p["sigma"] = sigma;
        p["tau"] = tau;
        p["zeta2"] = canon(sigma / nu - k);
        s.signs["eps"] = eps;
        s.slots["phi"] = pick(phi_slot_pool(), rng);
        break;
    }
    }
    return s;
}

}  // namespace psskit
