#pragma once

#include <memory>
#include <vector>

#include "psskit/expr.hpp"

namespace psskit {

enum class EqClass : std::uint8_t { Evolution, ChType, XtType };

// Evolution:  u_t = rhs
// ChType:     u_t - u_{2,t} = rhs   (the free t-jets are u_t and u_{1,t})
// XtType:     u_{1,t} = rhs         (u_t stays free)
struct EquationRule {
    EqClass cls = EqClass::Evolution;
    Expr rhs;
};

namespace detail {
struct TJetCache;
}

class EquationSpec {
public:
    EquationSpec() = default;
    EquationSpec(std::vector<EquationRule> rules, DepNames names = {});

    static EquationSpec evolution(std::vector<Expr> rhs, DepNames names = {});
    static EquationSpec ch_type(Expr lambda_rhs, DepNames names = {});
    static EquationSpec xt_type(Expr rhs, DepNames names = {});

    int nvars() const { return static_cast<int>(rules_.size()); }
    const std::vector<EquationRule>& rules() const { return rules_; }
    const EquationRule& rule(int dep) const { return rules_.at(static_cast<std::size_t>(dep)); }
    int maxorder() const { return maxorder_; }
    int order_cap() const { return maxorder_ + 4; }
    const DepNames& names() const { return names_; }

    bool is_free(JetVar v) const;
    // The reduced image of a single t-jet; memoized.
    const Expr& tjet_image(JetVar v) const;

private:
    std::vector<EquationRule> rules_;
    DepNames names_;
    int maxorder_ = 0;
    std::shared_ptr<detail::TJetCache> cache_;
};

Expr total_dx(const Expr& a, const EquationSpec& eq);
// Defined for expressions free of t-jets.
Expr total_dt(const Expr& a, const EquationSpec& eq);
Expr reduce_tjets(const Expr& a, const EquationSpec& eq);

}  // namespace psskit
