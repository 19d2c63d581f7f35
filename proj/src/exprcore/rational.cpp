#include <map>

#include "psskit/expr.hpp"
#include "term_ops.hpp"

namespace psskit {

namespace {

thread_local bool in_cancel = false;

std::optional<Monomial> divide_mono(const Monomial& a, const Monomial& b) {
    Monomial q;
    {
        std::map<ParamId, int> e;
        for (auto& [p, k] : a.params) e[p] += k;
        for (auto& [p, k] : b.params) e[p] -= k;
        for (auto& [p, k] : e) {
            if (k == 0) continue;
            if (k < 0 && !param_info_fast(p).nonzero()) return std::nullopt;
            q.params.emplace_back(p, k);
        }
    }
    {
        std::map<JetVar, int> e;
        for (auto& [v, k] : a.jets) e[v] += k;
        for (auto& [v, k] : b.jets) e[v] -= k;
        for (auto& [v, k] : e) {
            if (k < 0) return std::nullopt;
            if (k > 0) q.jets.emplace_back(v, k);
        }
    }
    q.funcs = a.funcs;
    for (const FuncFactor& f : b.funcs) {
        if (f.kind == FuncKind::Exp) {
            q.funcs.push_back(FuncFactor{FuncKind::Exp, std::make_shared<const Expr>(-*f.arg), 1});
            continue;
        }
        if (f.kind == FuncKind::Pow) {
            q.funcs.push_back(FuncFactor{FuncKind::Pow, f.arg, -f.power});
            continue;
        }
        bool found = false;
        for (auto& g : q.funcs) {
            if (g.kind == f.kind && *g.arg == *f.arg && g.power >= f.power) {
                g.power -= f.power;
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;
    }
    return q;
}

const Expr* first_negative_base(const Expr& e, const std::vector<const Expr*>& done) {
    for (const Term& t : e.terms())
        for (const FuncFactor& f : t.mono.funcs) {
            if (f.kind != FuncKind::Pow || f.power >= 0) continue;
            bool seen = false;
            for (const Expr* d : done) seen = seen || *d == *f.arg;
            if (!seen) return f.arg.get();
        }
    return nullptr;
}

// Rewrites the P-dependent part of e as N * P^-k with P not dividing N.
Expr cancel_base(const Expr& e, const Expr& P) {
    std::vector<std::pair<Term, int>> split;
    int k = 0;
    for (const Term& t : e.terms()) {
        Term r = t;
        int kj = 0;
        for (auto it = r.mono.funcs.begin(); it != r.mono.funcs.end(); ++it) {
            if (it->kind == FuncKind::Pow && *it->arg == P) {
                kj = -it->power;
                r.mono.funcs.erase(it);
                break;
            }
        }
        k = std::max(k, kj);
        split.emplace_back(std::move(r), kj);
    }
    if (k == 0) return e;
    std::vector<Expr> powers{Expr(1L)};
    for (int i = 1; i <= k; ++i) powers.push_back(powers.back() * P);
    Expr N;
    for (auto& [r, kj] : split) N += term_expr(r) * powers[static_cast<std::size_t>(k - kj)];
    while (k > 0) {
        auto q = exact_divide(N, P);
        if (!q) break;
        N = std::move(*q);
        --k;
    }
    if (k == 0) return N;
    Monomial atom;
    atom.funcs.push_back(FuncFactor{FuncKind::Pow, std::make_shared<const Expr>(P), -k});
    detail::Accumulator acc;
    for (const Term& t : N.terms()) acc.add(t.coeff, detail::mul_mono(t.mono, atom));
    return acc.finish();
}

}  // namespace

namespace detail {

bool needs_cancel(const std::vector<Term>& terms) {
    if (in_cancel) return false;
    for (const Term& t : terms)
        for (const FuncFactor& f : t.mono.funcs)
            if (f.kind == FuncKind::Pow && f.power < 0) return true;
    return false;
}

Expr cancel_atoms(Expr e) {
    in_cancel = true;
    try {
        std::vector<Expr> done_store;
        std::vector<const Expr*> done;
        done_store.reserve(16);
        while (const Expr* P = first_negative_base(e, done)) {
            done_store.push_back(*P);
            e = cancel_base(e, done_store.back());
            done.clear();
            for (const Expr& d : done_store) done.push_back(&d);
        }
    } catch (...) {
        in_cancel = false;
        throw;
    }
    in_cancel = false;
    return e;
}

}  // namespace detail

std::optional<Expr> exact_divide(const Expr& a, const Expr& b, int max_steps) {
    if (b.is_zero()) return std::nullopt;
    Expr q;
    Expr r = a;
    const Term& lb = b.terms()[0];
    for (int step = 0; !r.is_zero(); ++step) {
        if (step >= max_steps) return std::nullopt;
        const Term& lr = r.terms()[0];
        auto m = divide_mono(lr.mono, lb.mono);
        if (!m) return std::nullopt;
        Expr t = Expr::from_terms({Term{lr.coeff / lb.coeff, *m}});
        q += t;
        r -= t * b;
    }
    return q;
}

}  // namespace psskit
