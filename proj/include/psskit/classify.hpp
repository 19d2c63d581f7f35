#pragma once

#include <array>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "psskit/forms.hpp"

namespace psskit {

enum class Theorem : std::uint8_t { T32, T33, T34, T35i, T35ii };

std::string theorem_name(Theorem t);
std::optional<Theorem> parse_theorem(const std::string& s);
const std::vector<Theorem>& all_theorems();

// f_{21} = mu2 f_{11} + eta2 and f_{31} = mu3 f_{11} + eta3 with jet-free mu, eta.
struct MuEta {
    Expr mu2, eta2, mu3, eta3;
};

MuEta extract_mu_eta(const Triad& t);

// Splits an expression by its jet and function content: e = sum c_J * J with
// jet-free coefficients c_J.
std::map<Monomial, Expr, MonoLess> split_by_jets(const Expr& e);

// Lambda is the coefficient of u^power * u3 in the CH-type right-hand side
// and G the remainder. The classified family uses power 2; the quadratic
// Camassa-Holm class corresponds to power 1.
struct LambdaSplit {
    Expr lambda;
    Expr G;
};
LambdaSplit split_lambda(const EquationSpec& eq, int power = 2);

// phi_i = f_{i2} + lambda u^power f_{i1}; throws PhiNotRecoverable when some
// phi_i depends on anything beyond u and u1.
std::array<Expr, 3> recover_phi(const Triad& t, const Expr& lambda, int power = 2);

struct Condition {
    // jet_order: f_{i1} free of u1, no jets of order 3 or more
    // shift_invariance: f_{i1,u} + f_{i1,u2} = 0
    // phi_recovery: f_{i2} + lambda u^p f_{i1} depends on u, u1 only
    // structure_1..3: the reduced structure equations vanish
    // coframe: -L2 f11 + eta2 phi1 is not identically zero
    std::string name;
    bool ok = false;
    std::string detail;
    // structure_1..3 presuppose jet_order, shift_invariance and phi_recovery
    // and are skipped when one of those fails; coframe needs phi only.
    bool evaluated = true;
};

struct Lemma31Report {
    int power = 2;
    Expr lambda, G;
    std::optional<MuEta> mu_eta;
    std::optional<std::array<Expr, 3>> phi;
    std::vector<Condition> conditions;

    bool passed() const;
    const Condition* find(const std::string& name) const;
    std::vector<std::string> failed() const;
};

Lemma31Report lemma31_check(const Triad& t, int power = 2, std::uint64_t seed = 1);

struct ClassifierQuantities {
    Expr L2, L3, M, N, Q, gamma, alpha;
    int delta = 1;
    std::string pattern;  // T32, T33, T34, T35 or "none"
};

ClassifierQuantities quantities(const Triad& t, int power = 2);
std::string case_pattern(const Expr& Q, const Expr& L2, const Expr& gamma);

struct FamilySpec {
    Theorem theorem = Theorem::T34;
    // lambda, mu2, eta2, mu3, eta3, C1, C2, theta, nu, sigma, tau, zeta2
    std::map<std::string, Expr> params;
    // f (a function of u - u2), phi1 (a function of u, u1), phi (a function of u)
    std::map<std::string, Expr> slots;
    int delta = 1;
    std::map<std::string, int> signs;  // "eps"
};

struct ConstraintEntry {
    std::string name;
    Expr value;
    bool expect_zero = true;
    bool holds() const { return expect_zero ? value.is_zero() : !value.is_zero(); }
};

struct GeneratedFamily {
    Theorem theorem = Theorem::T34;
    Expr lambda;
    Expr G;
    Triad triad;
    ClassifierQuantities quantities;
    std::vector<ConstraintEntry> constraints;
    std::map<std::string, Expr> derived;  // e.g. a, b for T33; zeta1; s
};

GeneratedFamily generate(const FamilySpec& spec);
GeneratedFamily generate_T32(const FamilySpec& spec);
GeneratedFamily generate_T33(const FamilySpec& spec);
GeneratedFamily generate_T34(const FamilySpec& spec);
GeneratedFamily generate_T35i(const FamilySpec& spec);
GeneratedFamily generate_T35ii(const FamilySpec& spec);

// A random admissible FamilySpec with exact rational parameters and slots
// drawn from the fixed pool.
FamilySpec draw_family(Theorem th, std::mt19937_64& rng);

// Slot pools used by draw_family.
const std::vector<Expr>& f_slot_pool();
const std::vector<Expr>& phi1_slot_pool();
const std::vector<Expr>& phi_slot_pool();

struct FamilyVerdict {
    Theorem theorem = Theorem::T34;
    bool matched = false;
    std::optional<FamilySpec> spec;
    std::string reason;
};

struct MatchReport {
    std::vector<FamilyVerdict> verdicts;
    bool any() const;
};

// Tries every family against u_t - u_{2,t} = lambda u^2 u3 + G. Supports G
// with rational coefficients in u, u1, u2 and at most one exponential factor.
MatchReport match_family(const Expr& lambda, const Expr& G, int max_degree = 4);

}  // namespace psskit
