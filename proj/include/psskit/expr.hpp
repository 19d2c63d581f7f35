#pragma once

#include <compare>
#include <functional>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "psskit/params.hpp"

namespace psskit {

// Field order gives the (dep, torder, xorder) lexicographic ordering.
struct JetVar {
    std::uint8_t dep = 0;
    std::uint8_t t = 0;
    std::uint16_t x = 0;

    auto operator<=>(const JetVar&) const = default;
};

inline JetVar jet(int x, int dep = 0, int t = 0) {
    return JetVar{static_cast<std::uint8_t>(dep), static_cast<std::uint8_t>(t),
                  static_cast<std::uint16_t>(x)};
}

// Pow is an opaque negative power of a polynomial base with a leading
// coefficient of 1, e.g. (u - u2)^-1; factors with equal base merge by adding
// exponents, and sums are kept over a common denominator per base.
// Exp factors merge by adding arguments, so a term carries at most one.
enum class FuncKind : std::uint8_t { Exp, Sin, Cos, Pow };

class Expr;
namespace detail {
struct ExprAccess;
}

struct FuncFactor {
    FuncKind kind;
    std::shared_ptr<const Expr> arg;
    int power = 1;
};

struct Monomial {
    std::vector<std::pair<ParamId, int>> params;
    std::vector<std::pair<JetVar, int>> jets;
    std::vector<FuncFactor> funcs;

    bool empty() const { return params.empty() && jets.empty() && funcs.empty(); }
};

struct Term {
    Rational coeff;
    Monomial mono;
};

int compare(const Monomial& a, const Monomial& b);
int compare(const FuncFactor& a, const FuncFactor& b);
int compare(const Expr& a, const Expr& b);

struct MonoLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
};

class Expr {
public:
    Expr() = default;
    Expr(long v);  // NOLINT: integer literals read naturally in formulas
    Expr(const Rational& v);  // NOLINT

    static Expr from_terms(std::vector<Term> terms);
    static Expr param(ParamId id, int exponent = 1);
    static Expr var(JetVar v, int exponent = 1);
    static Expr param(const std::string& name);

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    std::optional<Rational> as_rational() const;
    bool is_rational() const { return as_rational().has_value(); }

    friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }

private:
    friend struct detail::ExprAccess;
    std::vector<Term> terms_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);  // b must be a unit
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

Expr add(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr pow(const Expr& a, int n);  // n < 0 requires a unit
Expr term_expr(const Term& t);

bool is_zero(const Expr& a);
bool is_unit(const Expr& a);
Expr inverse(const Expr& a);

Expr make_exp(const Expr& arg);
Expr make_sin(const Expr& arg);
Expr make_cos(const Expr& arg);
Expr make_pow(const Expr& base, int n);

Expr diff(const Expr& a, JetVar v);
Expr diff(const Expr& a, ParamId p);
// Applies the derivation sending each jet v to image(v) and every parameter
// to zero: sum over v of diff(a, v) * image(v), including inside functions.
Expr derivation(const Expr& a, const std::function<Expr(JetVar)>& image);

Expr substitute(const Expr& a, JetVar v, const Expr& r);
Expr substitute(const Expr& a, const std::map<JetVar, Expr>& rules);
Expr substitute(const Expr& a, ParamId p, const Expr& r);

// Exact quotient a / b by leading-term division; nullopt when b does not
// divide a within max_steps reduction steps.
std::optional<Expr> exact_divide(const Expr& a, const Expr& b, int max_steps = 10000);

std::set<JetVar> jets_of(const Expr& a);
std::set<ParamId> params_of(const Expr& a);
bool has_funcs(const Expr& a);
int max_xorder(const Expr& a);
bool depends_only_on(const Expr& a, const std::set<JetVar>& allowed);

// Square root of a radicand that is either a rational constant or k + m^2
// for a single parameter m; declares the needed radical parameter on demand.
Expr sqrt_of(const Expr& radicand);

struct Assignment {
    std::map<JetVar, double> jets;
    std::map<ParamId, double> params;
};

double eval_at(const Expr& a, const Assignment& s);
double eval_magnitude(const Expr& a, const Assignment& s);

struct DepNames {
    std::vector<std::string> names{"u", "v"};
    std::string jet_name(JetVar v) const;
};

std::string render(const Expr& a, const DepNames& names = {});
std::string render(const Rational& q);

}  // namespace psskit
