#include "psskit/forms.hpp"

#include <cmath>

#include "psskit/errors.hpp"

namespace psskit {

OneForm operator+(const OneForm& a, const OneForm& b) { return {a.cx + b.cx, a.ct + b.ct}; }
OneForm operator-(const OneForm& a, const OneForm& b) { return {a.cx - b.cx, a.ct - b.ct}; }
OneForm operator-(const OneForm& a) { return {-a.cx, -a.ct}; }
OneForm operator*(const Expr& h, const OneForm& a) { return {h * a.cx, h * a.ct}; }
bool operator==(const OneForm& a, const OneForm& b) { return a.cx == b.cx && a.ct == b.ct; }
TwoForm operator+(const TwoForm& a, const TwoForm& b) { return {a.c + b.c}; }
TwoForm operator-(const TwoForm& a, const TwoForm& b) { return {a.c - b.c}; }
TwoForm operator*(const Expr& h, const TwoForm& a) { return {h * a.c}; }

TwoForm wedge(const OneForm& a, const OneForm& b) { return {a.cx * b.ct - a.ct * b.cx}; }

OneForm exterior_d(const Expr& h, const EquationSpec& eq) { return {total_dx(h, eq), total_dt(h, eq)}; }

// d(f dx + g dt) = (D_x g - D_t f) dx^dt
TwoForm exterior_d(const OneForm& a, const EquationSpec& eq) {
    return {total_dx(a.ct, eq) - total_dt(a.cx, eq)};
}

Triad::Triad(OneForm w1, OneForm w2, OneForm w3, int delta, EquationSpec eq)
    : w_{std::move(w1), std::move(w2), std::move(w3)}, delta_(delta), eq_(std::move(eq)) {
    if (delta_ != 1 && delta_ != -1) throw InvalidTriad("delta must be +1 or -1");
    for (const OneForm& w : w_) {
        for (const Expr* c : {&w.cx, &w.ct}) {
            for (JetVar v : jets_of(*c)) {
                if (v.t != 0) throw InvalidTriad("coefficient " + render(*c, eq_.names()) + " contains a t-jet");
                if (v.dep >= eq_.nvars())
                    throw InvalidTriad("coefficient mentions an undeclared dependent variable");
            }
        }
    }
}

Residuals structure_residuals(const Triad& t) {
    const EquationSpec& eq = t.eq();
    Residuals r;
    r.r1 = exterior_d(t.w1(), eq) - wedge(t.w3(), t.w2());
    r.r2 = exterior_d(t.w2(), eq) - wedge(t.w1(), t.w3());
    r.r3 = exterior_d(t.w3(), eq) - Expr(static_cast<long>(t.delta())) * wedge(t.w1(), t.w2());
    return r;
}

Assignment random_assignment(const std::set<JetVar>& jets, const std::set<ParamId>& params, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> jet_dist(-1.5, 1.5);
    std::uniform_real_distribution<double> real_dist(-2.0, 2.0);
    std::uniform_real_distribution<double> mag_dist(0.1, 2.0);
    Assignment s;
    for (JetVar v : jets) s.jets[v] = jet_dist(rng);
    std::set<ParamId> all = params;
    for (ParamId p : params) {
        ParamInfo info = param_info(p);
        if (info.radical == RadicalKind::Shift) all.insert(info.base);
    }
    for (ParamId p : all) {
        ParamInfo info = param_info(p);
        if (info.radical != RadicalKind::None) continue;
        if (info.positive()) {
            s.params[p] = mag_dist(rng);
        } else if (info.nonzero()) {
            double m = mag_dist(rng);
            s.params[p] = (rng() & 1) ? m : -m;
        } else {
            s.params[p] = real_dist(rng);
        }
    }
    return s;
}

Assignment random_assignment_for(const std::vector<Expr>& exprs, std::mt19937_64& rng) {
    std::set<JetVar> jets;
    std::set<ParamId> params;
    for (const Expr& e : exprs) {
        auto j = jets_of(e);
        jets.insert(j.begin(), j.end());
        auto p = params_of(e);
        params.insert(p.begin(), p.end());
    }
    return random_assignment(jets, params, rng);
}

Nondegeneracy nondegenerate(const Triad& t, std::uint64_t seed) {
    Nondegeneracy out;
    out.det = t.f(1, 1) * t.f(2, 2) - t.f(1, 2) * t.f(2, 1);
    if (out.det.is_zero()) return out;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 20; ++i) {
        Assignment s = random_assignment_for({out.det}, rng);
        try {
            if (std::fabs(eval_at(out.det, s)) > 1e-6) {
                out.ok = true;
                out.witness = s;
                return out;
            }
        } catch (const DomainError&) {
        }
    }
    return out;
}

Expr gaussian_curvature(const Triad& t) {
    Residuals r = structure_residuals(t);
    if (!r.r1.c.is_zero() || !r.r2.c.is_zero())
        throw NotACoframe("first two structure equations fail: " + render(r.r1.c, t.eq().names()) + " ; " +
                          render(r.r2.c, t.eq().names()));
    Expr w12 = wedge(t.w1(), t.w2()).c;
    Expr d3 = exterior_d(t.w3(), t.eq()).c;
    auto k = exact_divide(d3, w12);
    if (!k)
        throw NonDivisible("d(w3) = " + render(d3, t.eq().names()) + " is not a multiple of w1^w2 = " +
                           render(w12, t.eq().names()));
    return -*k;
}

MetricForm metric_of(const Triad& t) {
    return {t.f(1, 1) * t.f(1, 1) + t.f(2, 1) * t.f(2, 1), t.f(1, 1) * t.f(1, 2) + t.f(2, 1) * t.f(2, 2),
            t.f(1, 2) * t.f(1, 2) + t.f(2, 2) * t.f(2, 2)};
}

CrossCheck cross_check_structure(const Triad& t, int samples, std::uint64_t seed, double tol) {
    const EquationSpec& eq = t.eq();
    Expr dtf[3], dxg[3];
    std::vector<Expr> all;
    for (int i = 0; i < 3; ++i) {
        dtf[i] = total_dt(t.f(i + 1, 1), eq);
        dxg[i] = total_dx(t.f(i + 1, 2), eq);
        all.push_back(dtf[i]);
        all.push_back(dxg[i]);
        all.push_back(t.f(i + 1, 1));
        all.push_back(t.f(i + 1, 2));
    }
    // The wedge partner of each equation: (w3, w2), (w1, w3), delta (w1, w2).
    const int pa[3] = {3, 1, 1}, pb[3] = {2, 3, 2};
    const double sign[3] = {1.0, 1.0, static_cast<double>(t.delta())};
    CrossCheck out;
    std::mt19937_64 rng(seed);
    for (int attempt = 0; out.samples < samples && attempt < samples * 10; ++attempt) {
        Assignment s = random_assignment_for(all, rng);
        double worst = 0;
        try {
            for (int i = 0; i < 3; ++i) {
                double a1 = eval_at(dxg[i], s), a2 = eval_at(dtf[i], s);
                double x1 = eval_at(t.f(pa[i], 1), s), y2 = eval_at(t.f(pb[i], 2), s);
                double x2 = eval_at(t.f(pa[i], 2), s), y1 = eval_at(t.f(pb[i], 1), s);
                double lhs = a1 - a2;
                double rhs = sign[i] * (x1 * y2 - x2 * y1);
                double scale = eval_magnitude(dxg[i], s) + eval_magnitude(dtf[i], s) +
                               std::fabs(x1 * y2) + std::fabs(x2 * y1);
                double err = std::fabs(lhs - rhs);
                double ratio = scale > 0 ? err / scale : err;
                worst = std::max(worst, ratio);
            }
        } catch (const DomainError&) {
            continue;
        }
        ++out.samples;
        out.worst = std::max(out.worst, worst);
        if (worst > tol && out.ok) {
            out.ok = false;
            out.detail = "sample " + std::to_string(out.samples) + " has relative error " + std::to_string(worst);
        }
    }
    if (out.samples < samples) {
        out.ok = false;
        out.detail = "could not draw enough admissible samples";
    }
    return out;
}

}  // namespace psskit
