#include "psskit/expr.hpp"

#include <algorithm>

#include "psskit/errors.hpp"
#include "term_ops.hpp"

namespace psskit {

namespace {

int sgn(int v) { return (v > 0) - (v < 0); }

int compare_jets(const std::vector<std::pair<JetVar, int>>& a,
                 const std::vector<std::pair<JetVar, int>>& b) {
    int da = 0, db = 0;
    for (auto& [v, e] : a) da += e;
    for (auto& [v, e] : b) db += e;
    if (da != db) return da > db ? -1 : 1;
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].first != b[i].first) return a[i].first < b[i].first ? -1 : 1;
        if (a[i].second != b[i].second) return a[i].second > b[i].second ? -1 : 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

int compare_params(const std::vector<std::pair<ParamId, int>>& a,
                   const std::vector<std::pair<ParamId, int>>& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].first != b[i].first) return a[i].first < b[i].first ? -1 : 1;
        if (a[i].second != b[i].second) return a[i].second > b[i].second ? -1 : 1;
    }
    if (a.size() != b.size()) return a.size() > b.size() ? -1 : 1;
    return 0;
}

int compare_funcs(const std::vector<FuncFactor>& a, const std::vector<FuncFactor>& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (int c = compare(a[i], b[i])) return c;
    if (a.size() != b.size()) return a.size() > b.size() ? -1 : 1;
    return 0;
}

}  // namespace

int compare(const FuncFactor& a, const FuncFactor& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    if (int c = compare(*a.arg, *b.arg)) return c;
    if (a.power != b.power) return a.power > b.power ? -1 : 1;
    return 0;
}

int compare(const Monomial& a, const Monomial& b) {
    if (int c = compare_jets(a.jets, b.jets)) return c;
    if (int c = compare_params(a.params, b.params)) return c;
    return compare_funcs(a.funcs, b.funcs);
}

int compare(const Expr& a, const Expr& b) {
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    std::size_t n = std::min(ta.size(), tb.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(ta[i].mono, tb[i].mono)) return c;
        if (int c = cmp(ta[i].coeff, tb[i].coeff)) return sgn(c);
    }
    if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
    return 0;
}

namespace detail {

void normalize_funcs(std::vector<FuncFactor>& fs) {
    if (fs.empty()) return;
    Expr exp_arg;
    bool has_exp = false;
    std::vector<FuncFactor> rest;
    rest.reserve(fs.size());
    for (auto& f : fs) {
        if (f.kind == FuncKind::Exp) {
            exp_arg += *f.arg;
            has_exp = true;
        } else if (f.power != 0) {
            rest.push_back(std::move(f));
        }
    }
    std::sort(rest.begin(), rest.end(), [](const FuncFactor& a, const FuncFactor& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return compare(*a.arg, *b.arg) < 0;
    });
    std::vector<FuncFactor> out;
    out.reserve(rest.size() + 1);
    if (has_exp && !exp_arg.is_zero())
        out.push_back(FuncFactor{FuncKind::Exp, std::make_shared<const Expr>(std::move(exp_arg)), 1});
    for (auto& f : rest) {
        if (!out.empty() && out.back().kind == f.kind && out.back().kind != FuncKind::Exp &&
            compare(*out.back().arg, *f.arg) == 0) {
            out.back().power += f.power;
            if (out.back().power == 0) out.pop_back();
        } else {
            out.push_back(std::move(f));
        }
    }
    fs = std::move(out);
}

Monomial mul_mono(const Monomial& a, const Monomial& b) {
    Monomial m;
    {
        auto i = a.params.begin(), j = b.params.begin();
        while (i != a.params.end() || j != b.params.end()) {
            if (j == b.params.end() || (i != a.params.end() && i->first < j->first)) {
                m.params.push_back(*i++);
            } else if (i == a.params.end() || j->first < i->first) {
                m.params.push_back(*j++);
            } else {
                int e = i->second + j->second;
                if (e != 0) m.params.emplace_back(i->first, e);
                ++i;
                ++j;
            }
        }
    }
    {
        auto i = a.jets.begin(), j = b.jets.begin();
        while (i != a.jets.end() || j != b.jets.end()) {
            if (j == b.jets.end() || (i != a.jets.end() && i->first < j->first)) {
                m.jets.push_back(*i++);
            } else if (i == a.jets.end() || j->first < i->first) {
                m.jets.push_back(*j++);
            } else {
                m.jets.emplace_back(i->first, i->second + j->second);
                ++i;
                ++j;
            }
        }
    }
    if (!a.funcs.empty() || !b.funcs.empty()) {
        m.funcs = a.funcs;
        m.funcs.insert(m.funcs.end(), b.funcs.begin(), b.funcs.end());
        if (!a.funcs.empty() && !b.funcs.empty()) normalize_funcs(m.funcs);
    }
    return m;
}

Rational rational_pow(const Rational& base, int e) {
    Rational r = 1;
    Rational b = base;
    if (e < 0) {
        b = 1 / b;
        e = -e;
    }
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

namespace {

mpz_class binomial(int n, int k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

void set_param_exp(std::vector<std::pair<ParamId, int>>& ps, ParamId id, int e) {
    auto it = std::lower_bound(ps.begin(), ps.end(), id,
                               [](const std::pair<ParamId, int>& p, ParamId v) { return p.first < v; });
    if (it != ps.end() && it->first == id) {
        it->second += e;
        if (it->second == 0) ps.erase(it);
    } else if (e != 0) {
        ps.insert(it, {id, e});
    }
}

}  // namespace

void Accumulator::add(Rational c, Monomial m) {
    if (c == 0) return;
    // Reduce r^e for constant radicals and rewrite m^2 -> s^2 - k for shifted
    // radicals; the latter may split the term.
    bool simple = true;
    for (auto& [id, e] : m.params) {
        const ParamInfo& info = param_info_fast(id);
        if (info.radical == RadicalKind::Const && (e < 0 || e > 1)) simple = false;
        if (info.radical == RadicalKind::None && e >= 2 && radical_info_of_base_fast(id, nullptr))
            simple = false;
    }
    if (simple) {
        insert(std::move(c), std::move(m));
        return;
    }
    for (auto it = m.params.begin(); it != m.params.end();) {
        const ParamInfo& info = param_info_fast(it->first);
        if (info.radical == RadicalKind::Const && (it->second < 0 || it->second > 1)) {
            int e = it->second;
            int q = e >= 0 ? e / 2 : -((-e + 1) / 2);
            int r = e - 2 * q;
            c *= rational_pow(info.value, q);
            if (r == 0) {
                it = m.params.erase(it);
                continue;
            }
            it->second = r;
        }
        ++it;
    }
    for (std::size_t i = 0; i < m.params.size(); ++i) {
        auto [id, e] = m.params[i];
        ParamId sid = 0;
        const ParamInfo* rad = e >= 2 ? radical_info_of_base_fast(id, &sid) : nullptr;
        if (!rad) continue;
        Rational k = rad->value;
        int n = e / 2;
        Monomial base = m;
        base.params[i].second = e % 2;
        if (base.params[i].second == 0) base.params.erase(base.params.begin() + static_cast<long>(i));
        for (int j = 0; j <= n; ++j) {
            Monomial mj = base;
            set_param_exp(mj.params, sid, 2 * j);
            Rational cj = c * Rational(binomial(n, j)) * rational_pow(-k, n - j);
            add(cj, std::move(mj));
        }
        return;
    }
    insert(std::move(c), std::move(m));
}

void Accumulator::insert(Rational c, Monomial m) {
    auto [it, fresh] = map_.try_emplace(std::move(m), c);
    if (!fresh) it->second += c;
}

Expr Accumulator::finish() {
    std::vector<Term> out;
    out.reserve(map_.size());
    for (auto& [m, c] : map_)
        if (c != 0) out.push_back(Term{c, m});
    map_.clear();
    bool cancel = needs_cancel(out);
    Expr e = make_expr_unchecked(std::move(out));
    return cancel ? cancel_atoms(std::move(e)) : e;
}

}  // namespace detail

Expr detail::make_expr_unchecked(std::vector<Term> terms) {
    Expr e;
    ExprAccess::terms(e) = std::move(terms);
    return e;
}

Expr::Expr(long v) {
    if (v != 0) terms_.push_back(Term{Rational(v), Monomial{}});
}

Expr::Expr(const Rational& v) {
    if (v != 0) terms_.push_back(Term{v, Monomial{}});
}

Expr Expr::from_terms(std::vector<Term> terms) {
    detail::Accumulator acc;
    for (auto& t : terms) {
        detail::normalize_funcs(t.mono.funcs);
        std::sort(t.mono.params.begin(), t.mono.params.end());
        std::sort(t.mono.jets.begin(), t.mono.jets.end());
        acc.add(t.coeff, t.mono);
    }
    return acc.finish();
}

Expr Expr::param(ParamId id, int exponent) {
    if (exponent < 0 && !param_info_fast(id).nonzero())
        throw NotInvertible("parameter '" + param_name(id) + "' may vanish");
    if (exponent == 0) return Expr(1L);
    Monomial m;
    m.params.emplace_back(id, exponent);
    detail::Accumulator acc;
    acc.add(Rational(1), std::move(m));
    return acc.finish();
}

Expr Expr::param(const std::string& name) {
    auto id = find_param(name);
    if (!id) throw UnknownIdentifier("parameter '" + name + "' is not declared");
    return param(*id);
}

Expr Expr::var(JetVar v, int exponent) {
    if (exponent < 0) throw DomainError("negative jet exponent");
    if (exponent == 0) return Expr(1L);
    Monomial m;
    m.jets.emplace_back(v, exponent);
    return detail::make_expr_unchecked({Term{Rational(1), std::move(m)}});
}

std::optional<Rational> Expr::as_rational() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_[0].mono.empty()) return terms_[0].coeff;
    return std::nullopt;
}

Expr add(const Expr& a, const Expr& b) {
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    if (ta.empty()) return b;
    if (tb.empty()) return a;
    std::vector<Term> out;
    out.reserve(ta.size() + tb.size());
    std::size_t i = 0, j = 0;
    while (i < ta.size() && j < tb.size()) {
        int c = compare(ta[i].mono, tb[j].mono);
        if (c < 0) {
            out.push_back(ta[i++]);
        } else if (c > 0) {
            out.push_back(tb[j++]);
        } else {
            Rational s = ta[i].coeff + tb[j].coeff;
            if (s != 0) out.push_back(Term{s, ta[i].mono});
            ++i;
            ++j;
        }
    }
    for (; i < ta.size(); ++i) out.push_back(ta[i]);
    for (; j < tb.size(); ++j) out.push_back(tb[j]);
    bool cancel = detail::needs_cancel(out);
    Expr e = detail::make_expr_unchecked(std::move(out));
    return cancel ? detail::cancel_atoms(std::move(e)) : e;
}

Expr operator-(const Expr& a) {
    std::vector<Term> out = a.terms();
    for (auto& t : out) t.coeff = -t.coeff;
    return detail::make_expr_unchecked(std::move(out));
}

Expr mul(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return Expr();
    if (auto q = a.as_rational()) {
        std::vector<Term> out = b.terms();
        for (auto& t : out) t.coeff *= *q;
        return detail::make_expr_unchecked(std::move(out));
    }
    if (auto q = b.as_rational()) return mul(b, a);
    detail::Accumulator acc;
    for (const auto& x : a.terms())
        for (const auto& y : b.terms()) acc.add(x.coeff * y.coeff, detail::mul_mono(x.mono, y.mono));
    return acc.finish();
}

Expr operator+(const Expr& a, const Expr& b) { return add(a, b); }
Expr operator-(const Expr& a, const Expr& b) { return add(a, -b); }
Expr operator*(const Expr& a, const Expr& b) { return mul(a, b); }
Expr operator/(const Expr& a, const Expr& b) { return mul(a, inverse(b)); }
Expr& operator+=(Expr& a, const Expr& b) { return a = add(a, b); }
Expr& operator-=(Expr& a, const Expr& b) { return a = add(a, -b); }
Expr& operator*=(Expr& a, const Expr& b) { return a = mul(a, b); }

Expr pow(const Expr& a, int n) {
    if (n < 0) return pow(inverse(a), -n);
    Expr result(1L);
    Expr base = a;
    while (n > 0) {
        if (n & 1) result = mul(result, base);
        n >>= 1;
        if (n) base = mul(base, base);
    }
    return result;
}

Expr term_expr(const Term& t) {
    detail::Accumulator acc;
    acc.add(t.coeff, t.mono);
    return acc.finish();
}

bool is_zero(const Expr& a) { return a.is_zero(); }

bool is_unit(const Expr& a) {
    if (a.size() != 1) return false;
    const Term& t = a.terms()[0];
    if (!t.mono.jets.empty()) return false;
    for (auto& [id, e] : t.mono.params) {
        const ParamInfo& info = param_info_fast(id);
        if (e > 0 && !info.nonzero()) return false;
    }
    for (auto& f : t.mono.funcs)
        if (f.kind == FuncKind::Sin || f.kind == FuncKind::Cos) return false;
    return true;
}

Expr inverse(const Expr& a) {
    if (!is_unit(a)) throw NotInvertible("cannot invert " + render(a));
    const Term& t = a.terms()[0];
    Monomial m;
    for (auto& [id, e] : t.mono.params) m.params.emplace_back(id, -e);
    Expr expanded(1L);
    for (auto& f : t.mono.funcs) {
        if (f.kind == FuncKind::Exp)
            m.funcs.push_back(FuncFactor{FuncKind::Exp, std::make_shared<const Expr>(-*f.arg), 1});
        else if (f.kind == FuncKind::Pow)
            expanded *= pow(*f.arg, -f.power);
        else
            m.funcs.push_back(FuncFactor{f.kind, f.arg, -f.power});
    }
    detail::Accumulator acc;
    acc.add(1 / t.coeff, std::move(m));
    return acc.finish() * expanded;
}

namespace {

Expr single_func(FuncKind k, Expr arg, int power) {
    Monomial m;
    m.funcs.push_back(FuncFactor{k, std::make_shared<const Expr>(std::move(arg)), power});
    return detail::make_expr_unchecked({Term{Rational(1), std::move(m)}});
}

}  // namespace

Expr make_exp(const Expr& arg) {
    if (arg.is_zero()) return Expr(1L);
    return single_func(FuncKind::Exp, arg, 1);
}

Expr make_sin(const Expr& arg) {
    if (arg.is_zero()) return Expr();
    return single_func(FuncKind::Sin, arg, 1);
}

Expr make_cos(const Expr& arg) {
    if (arg.is_zero()) return Expr(1L);
    return single_func(FuncKind::Cos, arg, 1);
}

Expr make_pow(const Expr& base, int n) {
    if (n == 0) return Expr(1L);
    if (base.is_zero()) {
        if (n > 0) return Expr();
        throw DomainError("zero base raised to a negative power");
    }
    if (n > 0 || (base.size() == 1 && is_unit(base))) return pow(base, n);
    Rational lead = base.terms()[0].coeff;
    Expr monic = mul(Expr(1 / lead), base);
    return mul(Expr(detail::rational_pow(lead, n)), single_func(FuncKind::Pow, std::move(monic), n));
}

}  // namespace psskit
