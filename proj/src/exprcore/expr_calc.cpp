#include <cmath>
#include <map>
#include <sstream>

#include "psskit/errors.hpp"
#include "psskit/expr.hpp"
#include "term_ops.hpp"

namespace psskit {

namespace {

Expr mono_expr(const Rational& c, Monomial m) {
    detail::Accumulator acc;
    acc.add(c, std::move(m));
    return acc.finish();
}

Expr rebuild_func(FuncKind kind, const Expr& arg, int power) {
    switch (kind) {
    case FuncKind::Exp: return make_exp(arg);
    case FuncKind::Sin: return pow(make_sin(arg), power);
    case FuncKind::Cos: return pow(make_cos(arg), power);
    case FuncKind::Pow: return make_pow(arg, power);
    }
    return Expr();
}

// Derivative of one function factor, given the derivative of its argument.
Expr diff_func(const FuncFactor& f, const Expr& darg) {
    if (darg.is_zero()) return Expr();
    const Expr& a = *f.arg;
    switch (f.kind) {
    case FuncKind::Exp: return darg * make_exp(a);
    case FuncKind::Sin:
        return Expr(static_cast<long>(f.power)) * pow(make_sin(a), f.power - 1) * make_cos(a) * darg;
    case FuncKind::Cos:
        return Expr(static_cast<long>(-f.power)) * pow(make_cos(a), f.power - 1) * make_sin(a) * darg;
    case FuncKind::Pow:
        return Expr(static_cast<long>(f.power)) * make_pow(a, f.power - 1) * darg;
    }
    return Expr();
}

template <class DiffArg>
Expr diff_funcs_of_term(const Term& t, DiffArg&& diff_arg) {
    Expr out;
    for (std::size_t i = 0; i < t.mono.funcs.size(); ++i) {
        const FuncFactor& f = t.mono.funcs[i];
        Expr d = diff_func(f, diff_arg(*f.arg));
        if (d.is_zero()) continue;
        Monomial rest = t.mono;
        rest.funcs.erase(rest.funcs.begin() + static_cast<long>(i));
        out += mono_expr(t.coeff, std::move(rest)) * d;
    }
    return out;
}

}  // namespace

Expr diff(const Expr& a, JetVar v) {
    Expr out;
    detail::Accumulator acc;
    for (const Term& t : a.terms()) {
        for (std::size_t i = 0; i < t.mono.jets.size(); ++i) {
            if (t.mono.jets[i].first != v) continue;
            Monomial m = t.mono;
            int e = m.jets[i].second;
            if (e == 1)
                m.jets.erase(m.jets.begin() + static_cast<long>(i));
            else
                m.jets[i].second = e - 1;
            acc.add(t.coeff * e, std::move(m));
        }
        if (!t.mono.funcs.empty())
            out += diff_funcs_of_term(t, [v](const Expr& arg) { return diff(arg, v); });
    }
    return acc.finish() + out;
}

Expr derivation(const Expr& a, const std::function<Expr(JetVar)>& image) {
    std::map<JetVar, Expr> cache;
    auto img = [&](JetVar v) -> const Expr& {
        auto it = cache.find(v);
        if (it == cache.end()) it = cache.emplace(v, image(v)).first;
        return it->second;
    };
    Expr out;
    detail::Accumulator acc;
    for (const Term& t : a.terms()) {
        for (std::size_t i = 0; i < t.mono.jets.size(); ++i) {
            const Expr& target = img(t.mono.jets[i].first);
            if (target.is_zero()) continue;
            Monomial m = t.mono;
            int e = m.jets[i].second;
            if (e == 1)
                m.jets.erase(m.jets.begin() + static_cast<long>(i));
            else
                m.jets[i].second = e - 1;
            Rational c = t.coeff * e;
            for (const Term& s : target.terms()) acc.add(c * s.coeff, detail::mul_mono(m, s.mono));
        }
        if (!t.mono.funcs.empty())
            out += diff_funcs_of_term(t, [&](const Expr& arg) { return derivation(arg, image); });
    }
    return acc.finish() + out;
}

Expr diff(const Expr& a, ParamId p) {
    ParamId rad_id = 0;
    bool has_rad = radical_info_of_base_fast(p, &rad_id) != nullptr;
    Expr out;
    detail::Accumulator acc;
    for (const Term& t : a.terms()) {
        for (std::size_t i = 0; i < t.mono.params.size(); ++i) {
            auto [id, e] = t.mono.params[i];
            if (id == p) {
                Monomial m = t.mono;
                m.params[i].second = e - 1;
                if (e == 1) m.params.erase(m.params.begin() + static_cast<long>(i));
                acc.add(t.coeff * e, std::move(m));
            } else if (has_rad && id == rad_id) {
                // d s / d m = m / s
                Monomial m = t.mono;
                m.params[i].second = e - 2;
                if (e == 2) m.params.erase(m.params.begin() + static_cast<long>(i));
                Monomial mp;
                mp.params.emplace_back(p, 1);
                acc.add(t.coeff * e, detail::mul_mono(m, mp));
            }
        }
        if (!t.mono.funcs.empty())
            out += diff_funcs_of_term(t, [p](const Expr& arg) { return diff(arg, p); });
    }
    return acc.finish() + out;
}

namespace {

template <class SubstArg>
Expr subst_funcs(const Term& t, Monomial rest, SubstArg&& subst_arg) {
    rest.funcs.clear();
    Expr out = mono_expr(t.coeff, std::move(rest));
    for (const FuncFactor& f : t.mono.funcs) out *= rebuild_func(f.kind, subst_arg(*f.arg), f.power);
    return out;
}

}  // namespace

Expr substitute(const Expr& a, JetVar v, const Expr& r) {
    Expr out;
    for (const Term& t : a.terms()) {
        Monomial rest = t.mono;
        int e = 0;
        for (auto it = rest.jets.begin(); it != rest.jets.end(); ++it) {
            if (it->first == v) {
                e = it->second;
                rest.jets.erase(it);
                break;
            }
        }
        Expr term = t.mono.funcs.empty()
                        ? mono_expr(t.coeff, std::move(rest))
                        : subst_funcs(t, std::move(rest), [&](const Expr& arg) { return substitute(arg, v, r); });
        if (e) term *= pow(r, e);
        out += term;
    }
    return out;
}

Expr substitute(const Expr& a, const std::map<JetVar, Expr>& rules) {
    if (rules.empty()) return a;
    Expr out;
    for (const Term& t : a.terms()) {
        Monomial rest = t.mono;
        std::vector<std::pair<const Expr*, int>> hits;
        for (auto it = rest.jets.begin(); it != rest.jets.end();) {
            auto r = rules.find(it->first);
            if (r != rules.end()) {
                hits.emplace_back(&r->second, it->second);
                it = rest.jets.erase(it);
            } else {
                ++it;
            }
        }
        if (hits.empty() && t.mono.funcs.empty()) {
            out += mono_expr(t.coeff, std::move(rest));
            continue;
        }
        Expr term = t.mono.funcs.empty()
                        ? mono_expr(t.coeff, std::move(rest))
                        : subst_funcs(t, std::move(rest), [&](const Expr& arg) { return substitute(arg, rules); });
        for (auto [r, e] : hits) term *= pow(*r, e);
        out += term;
    }
    return out;
}

Expr substitute(const Expr& a, ParamId p, const Expr& r) {
    ParamId rad_id = 0;
    const ParamInfo* rad = radical_info_of_base_fast(p, &rad_id);
    std::optional<Expr> rad_value;
    if (rad) {
        Rational k = rad->value;
        bool used = false;
        for (const Term& t : a.terms())
            for (auto& [id, e] : t.mono.params) used = used || id == rad_id;
        if (used) rad_value = sqrt_of(Expr(k) + r * r);
    }
    Expr out;
    for (const Term& t : a.terms()) {
        Monomial rest = t.mono;
        int e = 0, es = 0;
        for (auto it = rest.params.begin(); it != rest.params.end();) {
            if (it->first == p) {
                e = it->second;
                it = rest.params.erase(it);
            } else if (rad_value && it->first == rad_id) {
                es = it->second;
                it = rest.params.erase(it);
            } else {
                ++it;
            }
        }
        Expr term = t.mono.funcs.empty()
                        ? mono_expr(t.coeff, std::move(rest))
                        : subst_funcs(t, std::move(rest), [&](const Expr& arg) { return substitute(arg, p, r); });
        if (e) term *= pow(r, e);
        if (es) term *= pow(*rad_value, es);
        out += term;
    }
    return out;
}

namespace {

void collect(const Expr& a, std::set<JetVar>* jets, std::set<ParamId>* params, bool* funcs) {
    for (const Term& t : a.terms()) {
        if (jets)
            for (auto& [v, e] : t.mono.jets) jets->insert(v);
        if (params)
            for (auto& [p, e] : t.mono.params) params->insert(p);
        if (funcs && !t.mono.funcs.empty()) *funcs = true;
        for (const FuncFactor& f : t.mono.funcs) collect(*f.arg, jets, params, nullptr);
    }
}

}  // namespace

std::set<JetVar> jets_of(const Expr& a) {
    std::set<JetVar> s;
    collect(a, &s, nullptr, nullptr);
    return s;
}

std::set<ParamId> params_of(const Expr& a) {
    std::set<ParamId> s;
    collect(a, nullptr, &s, nullptr);
    return s;
}

bool has_funcs(const Expr& a) {
    bool f = false;
    collect(a, nullptr, nullptr, &f);
    return f;
}

int max_xorder(const Expr& a) {
    int m = -1;
    for (JetVar v : jets_of(a)) m = std::max(m, static_cast<int>(v.x));
    return m;
}

bool depends_only_on(const Expr& a, const std::set<JetVar>& allowed) {
    for (JetVar v : jets_of(a))
        if (!allowed.count(v)) return false;
    return true;
}

namespace {

bool perfect_square(const mpz_class& z, mpz_class* root) {
    if (z < 0) return false;
    if (!mpz_perfect_square_p(z.get_mpz_t())) return false;
    if (root) mpz_sqrt(root->get_mpz_t(), z.get_mpz_t());
    return true;
}

Expr sqrt_rational(const Rational& q) {
    if (q == 0) return Expr();
    // sqrt(n/d) = sqrt(n d) / d, then pull square factors out of n d.
    mpz_class n = q.get_num() * q.get_den();
    bool negative = n < 0;
    if (negative) n = -n;
    mpz_class outside = 1, inside = 1;
    mpz_class rest = n;
    for (mpz_class p = 2; p * p <= rest; ++p) {
        while (rest % (p * p) == 0) {
            rest /= p * p;
            outside *= p;
        }
        if (rest % p == 0) {
            rest /= p;
            inside *= p;
        }
    }
    inside *= rest;
    Expr out(Rational(outside, q.get_den()));
    if (inside != 1) {
        ParamId id = declare_radical_const("sqrt_" + inside.get_str(), Rational(inside));
        out *= Expr::param(id);
    }
    if (negative) out *= Expr::param(declare_radical_const("i", Rational(-1)));
    return out;
}

}  // namespace

Expr sqrt_of(const Expr& radicand) {
    if (auto q = radicand.as_rational()) {
        if (*q < 0) return sqrt_rational(*q);
        mpz_class rn, rd;
        if (perfect_square(q->get_num(), &rn) && perfect_square(q->get_den(), &rd)) return Expr(Rational(rn, rd));
        return sqrt_rational(*q);
    }
    if (radicand.size() == 1) {
        const Term& t = radicand.terms()[0];
        mpz_class rn, rd;
        bool ok = t.mono.jets.empty() && t.mono.funcs.empty() && perfect_square(t.coeff.get_num(), &rn) &&
                  perfect_square(t.coeff.get_den(), &rd);
        Monomial m;
        for (auto& [id, e] : t.mono.params) {
            if (!ok) break;
            ok = e % 2 == 0 && param_info_fast(id).positive();
            m.params.emplace_back(id, e / 2);
        }
        if (ok) return mono_expr(Rational(rn, rd), std::move(m));
    }
    if (radicand.size() == 2) {
        const Term& sq = radicand.terms()[0];
        const Term& k = radicand.terms()[1];
        mpz_class rn, rd;
        if (k.mono.empty() && sq.mono.jets.empty() && sq.mono.funcs.empty() && sq.mono.params.size() == 1 &&
            sq.mono.params[0].second == 2 && k.coeff > 0 && perfect_square(sq.coeff.get_num(), &rn) &&
            perfect_square(sq.coeff.get_den(), &rd)) {
            ParamId base = sq.mono.params[0].first;
            Rational scale(rn, rd);
            Rational shift = k.coeff / sq.coeff;
            std::string base_name = param_name(base);
            ParamId rid;
            if (auto existing = radical_of_base(base)) {
                if (param_info(*existing).value != shift)
                    throw DomainError("'" + base_name + "' already has a radical with a different shift");
                rid = *existing;
            } else {
                rid = declare_radical_shift("s_" + base_name, base, shift);
            }
            return Expr(scale) * Expr::param(rid);
        }
    }
    throw DomainError("no closed-form square root for " + render(radicand));
}

namespace {

double param_value(ParamId id, const Assignment& s) {
    ParamInfo info = param_info(id);
    if (info.radical == RadicalKind::Shift) {
        double m = param_value(info.base, s);
        return std::sqrt(info.value.get_d() + m * m);
    }
    if (info.radical == RadicalKind::Const) {
        if (info.value < 0) throw DomainError("'" + info.name + "' has no real value");
        return std::sqrt(info.value.get_d());
    }
    auto it = s.params.find(id);
    if (it == s.params.end()) throw MissingAssignment("no value for parameter '" + info.name + "'");
    return it->second;
}

double eval_term(const Term& t, const Assignment& s) {
    double v = t.coeff.get_d();
    for (auto& [id, e] : t.mono.params) {
        double p = param_value(id, s);
        if (e < 0 && p == 0) throw DomainError("parameter '" + param_name(id) + "' is zero");
        v *= std::pow(p, e);
    }
    for (auto& [j, e] : t.mono.jets) {
        auto it = s.jets.find(j);
        if (it == s.jets.end()) throw MissingAssignment("no value for " + DepNames{}.jet_name(j));
        v *= std::pow(it->second, e);
    }
    for (const FuncFactor& f : t.mono.funcs) {
        double a = eval_at(*f.arg, s);
        switch (f.kind) {
        case FuncKind::Exp: v *= std::exp(a); break;
        case FuncKind::Sin: v *= std::pow(std::sin(a), f.power); break;
        case FuncKind::Cos: v *= std::pow(std::cos(a), f.power); break;
        case FuncKind::Pow:
            if (a == 0 && f.power < 0) throw DomainError("division by zero in pow");
            v *= std::pow(a, f.power);
            break;
        }
    }
    return v;
}

}  // namespace

double eval_at(const Expr& a, const Assignment& s) {
    double v = 0;
    for (const Term& t : a.terms()) v += eval_term(t, s);
    return v;
}

double eval_magnitude(const Expr& a, const Assignment& s) {
    double v = 0;
    for (const Term& t : a.terms()) v += std::fabs(eval_term(t, s));
    return v;
}

std::string DepNames::jet_name(JetVar v) const {
    std::string s = v.dep < names.size() ? names[v.dep] : "w" + std::to_string(v.dep);
    if (v.x > 0) s += std::to_string(v.x);
    s.append(v.t, 't');
    return s;
}

std::string render(const Rational& q) { return q.get_str(); }

namespace {

void render_factors(std::ostringstream& os, const Monomial& m, const DepNames& names, bool& first) {
    auto sep = [&] {
        if (!first) os << '*';
        first = false;
    };
    for (auto& [v, e] : m.jets) {
        sep();
        os << names.jet_name(v);
        if (e != 1) os << '^' << e;
    }
    for (auto& [p, e] : m.params) {
        sep();
        os << param_name(p);
        if (e != 1) os << '^' << e;
    }
    for (const FuncFactor& f : m.funcs) {
        sep();
        std::string arg = render(*f.arg, names);
        switch (f.kind) {
        case FuncKind::Exp: os << "exp(" << arg << ')'; break;
        case FuncKind::Sin: os << "sin(" << arg << ')'; break;
        case FuncKind::Cos: os << "cos(" << arg << ')'; break;
        case FuncKind::Pow: os << "pow(" << arg << ", " << f.power << ')'; break;
        }
        if (f.kind != FuncKind::Pow && f.power != 1) os << '^' << f.power;
    }
}

}  // namespace

std::string render(const Expr& a, const DepNames& names) {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool lead = true;
    for (const Term& t : a.terms()) {
        Rational c = t.coeff;
        if (lead) {
            if (c < 0) os << '-';
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        lead = false;
        c = abs(c);
        bool first = true;
        if (c != 1 || t.mono.empty()) {
            os << c.get_str();
            first = false;
        }
        render_factors(os, t.mono, names, first);
    }
    return os.str();
}

}  // namespace psskit
