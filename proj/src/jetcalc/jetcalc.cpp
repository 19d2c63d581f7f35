#include "psskit/jetcalc.hpp"

#include <map>
#include <mutex>

#include "psskit/errors.hpp"

namespace psskit {

namespace detail {
struct TJetCache {
    std::mutex mu;
    std::map<JetVar, Expr> images;
};
}  // namespace detail

namespace {

bool has_tjets(const Expr& a) {
    for (JetVar v : jets_of(a))
        if (v.t > 0) return true;
    return false;
}

void check_order(const Expr& a, const EquationSpec& eq) {
    int m = max_xorder(a);
    if (m > eq.order_cap())
        throw JetOrderExceeded("jet order " + std::to_string(m) + " exceeds cap " + std::to_string(eq.order_cap()));
}

JetVar shift_x(JetVar v) { return JetVar{v.dep, v.t, static_cast<std::uint16_t>(v.x + 1)}; }

}  // namespace

EquationSpec::EquationSpec(std::vector<EquationRule> rules, DepNames names)
    : rules_(std::move(rules)), names_(std::move(names)), cache_(std::make_shared<detail::TJetCache>()) {
    if (rules_.empty()) throw MalformedSpec("no dependent variables");
    if (rules_.size() > 255) throw MalformedSpec("too many dependent variables");
    while (names_.names.size() < rules_.size()) names_.names.push_back("w" + std::to_string(names_.names.size()));
    for (const auto& r : rules_) {
        if (r.cls == EqClass::ChType && rules_.size() != 1)
            throw MalformedSpec("CH-type rules are only supported for a single dependent variable");
        if (has_tjets(r.rhs)) throw MalformedSpec("right-hand side contains t-jets");
        for (JetVar v : jets_of(r.rhs))
            if (v.dep >= rules_.size()) throw MalformedSpec("right-hand side mentions an undeclared variable");
        maxorder_ = std::max(maxorder_, max_xorder(r.rhs));
    }
}

EquationSpec EquationSpec::evolution(std::vector<Expr> rhs, DepNames names) {
    std::vector<EquationRule> rules;
    for (auto& r : rhs) rules.push_back(EquationRule{EqClass::Evolution, std::move(r)});
    return EquationSpec(std::move(rules), std::move(names));
}

EquationSpec EquationSpec::ch_type(Expr lambda_rhs, DepNames names) {
    return EquationSpec({EquationRule{EqClass::ChType, std::move(lambda_rhs)}}, std::move(names));
}

EquationSpec EquationSpec::xt_type(Expr rhs, DepNames names) {
    return EquationSpec({EquationRule{EqClass::XtType, std::move(rhs)}}, std::move(names));
}

bool EquationSpec::is_free(JetVar v) const {
    if (v.t == 0) return true;
    if (v.t > 1 || v.dep >= rules_.size()) return false;
    switch (rules_[v.dep].cls) {
    case EqClass::Evolution: return false;
    case EqClass::XtType: return v.x == 0;
    case EqClass::ChType: return v.x <= 1;
    }
    return false;
}

const Expr& EquationSpec::tjet_image(JetVar v) const {
    if (!cache_) throw MalformedSpec("empty equation spec");
    {
        std::lock_guard lock(cache_->mu);
        auto it = cache_->images.find(v);
        if (it != cache_->images.end()) return it->second;
    }
    if (v.t != 1 || v.dep >= rules_.size())
        throw UnreducibleJet("no rule for " + names_.jet_name(v));
    Expr image;
    if (is_free(v)) {
        image = Expr::var(v);
    } else {
        const EquationRule& r = rules_[v.dep];
        if (v.x > order_cap()) throw JetOrderExceeded("t-jet " + names_.jet_name(v) + " beyond cap");
        switch (r.cls) {
        case EqClass::Evolution:
            image = v.x == 0 ? r.rhs : total_dx(tjet_image(JetVar{v.dep, 1, static_cast<std::uint16_t>(v.x - 1)}), *this);
            break;
        case EqClass::XtType:
            image = v.x == 1 ? r.rhs : total_dx(tjet_image(JetVar{v.dep, 1, static_cast<std::uint16_t>(v.x - 1)}), *this);
            break;
        case EqClass::ChType: {
            // u_{k,t} = u_{k-2,t} - D_x^{k-2} rhs; D_x^{k-2} rhs comes from the
            // image of u_{k-1,t} shifted once.
            JetVar lower{v.dep, 1, static_cast<std::uint16_t>(v.x - 2)};
            Expr dl = r.rhs;
            for (int i = 0; i < v.x - 2; ++i) dl = total_dx(dl, *this);
            image = tjet_image(lower) - dl;
            break;
        }
        }
    }
    std::lock_guard lock(cache_->mu);
    return cache_->images.emplace(v, std::move(image)).first->second;
}

Expr total_dx(const Expr& a, const EquationSpec& eq) {
    Expr out = derivation(a, [&](JetVar v) -> Expr {
        JetVar s = shift_x(v);
        return s.t == 0 ? Expr::var(s) : eq.tjet_image(s);
    });
    check_order(out, eq);
    return out;
}

Expr total_dt(const Expr& a, const EquationSpec& eq) {
    Expr out = derivation(a, [&](JetVar v) -> Expr {
        if (v.t != 0) throw DomainError("total_dt is defined only for expressions without t-jets");
        return eq.tjet_image(JetVar{v.dep, 1, v.x});
    });
    check_order(out, eq);
    return out;
}

Expr reduce_tjets(const Expr& a, const EquationSpec& eq) {
    std::map<JetVar, Expr> rules;
    for (JetVar v : jets_of(a))
        if (!eq.is_free(v)) rules.emplace(v, eq.tjet_image(v));
    return substitute(a, rules);
}

}  // namespace psskit
