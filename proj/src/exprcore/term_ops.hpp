#pragma once

#include <map>
#include <vector>

#include "psskit/expr.hpp"

namespace psskit::detail {

struct ExprAccess {
    static std::vector<Term>& terms(Expr& e) { return e.terms_; }
};

Expr make_expr_unchecked(std::vector<Term> terms);
void normalize_funcs(std::vector<FuncFactor>& fs);
Monomial mul_mono(const Monomial& a, const Monomial& b);
Rational rational_pow(const Rational& base, int e);

// Common-denominator normal form for negative powers of polynomial atoms.
bool needs_cancel(const std::vector<Term>& terms);
Expr cancel_atoms(Expr e);

// Collects terms, applying the radical relations as they arrive.
class Accumulator {
public:
    void add(Rational c, Monomial m);
    Expr finish();

private:
    void insert(Rational c, Monomial m);
    std::map<Monomial, Rational, MonoLess> map_;
};

}  // namespace psskit::detail
