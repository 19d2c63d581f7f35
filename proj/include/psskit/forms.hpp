#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "psskit/expr.hpp"
#include "psskit/jetcalc.hpp"

namespace psskit {

struct OneForm {
    Expr cx;  // dx coefficient
    Expr ct;  // dt coefficient
};

// Coefficient on dx^dt.
struct TwoForm {
    Expr c;
};

OneForm operator+(const OneForm& a, const OneForm& b);
OneForm operator-(const OneForm& a, const OneForm& b);
OneForm operator-(const OneForm& a);
OneForm operator*(const Expr& h, const OneForm& a);
bool operator==(const OneForm& a, const OneForm& b);
TwoForm operator+(const TwoForm& a, const TwoForm& b);
TwoForm operator-(const TwoForm& a, const TwoForm& b);
TwoForm operator*(const Expr& h, const TwoForm& a);

TwoForm wedge(const OneForm& a, const OneForm& b);
OneForm exterior_d(const Expr& h, const EquationSpec& eq);
TwoForm exterior_d(const OneForm& a, const EquationSpec& eq);

class Triad {
public:
    Triad(OneForm w1, OneForm w2, OneForm w3, int delta, EquationSpec eq);

    const OneForm& w1() const { return w_[0]; }
    const OneForm& w2() const { return w_[1]; }
    const OneForm& w3() const { return w_[2]; }
    const OneForm& w(int i) const { return w_[static_cast<std::size_t>(i - 1)]; }
    // f(i, j) with i in 1..3 and j in 1..2, as in f_{ij}.
    const Expr& f(int i, int j) const { return j == 1 ? w(i).cx : w(i).ct; }
    int delta() const { return delta_; }
    const EquationSpec& eq() const { return eq_; }

    Triad with_delta(int delta) const { return Triad(w_[0], w_[1], w_[2], delta, eq_); }

private:
    OneForm w_[3];
    int delta_;
    EquationSpec eq_;
};

struct Residuals {
    TwoForm r1, r2, r3;
    bool all_zero() const { return r1.c.is_zero() && r2.c.is_zero() && r3.c.is_zero(); }
};

Residuals structure_residuals(const Triad& t);

struct Nondegeneracy {
    bool ok = false;
    Expr det;
    std::optional<Assignment> witness;
};

Nondegeneracy nondegenerate(const Triad& t, std::uint64_t seed = 1);

Expr gaussian_curvature(const Triad& t);

struct MetricForm {
    Expr E, F, G2;
};

MetricForm metric_of(const Triad& t);

// Random assignment of the given symbols; nonzero parameters get |value| >= 0.1
// and positive parameters a value in [0.1, 2].
Assignment random_assignment(const std::set<JetVar>& jets, const std::set<ParamId>& params, std::mt19937_64& rng);
Assignment random_assignment_for(const std::vector<Expr>& exprs, std::mt19937_64& rng);

struct CrossCheck {
    bool ok = true;
    int samples = 0;
    double worst = 0;  // worst |A - B| / S seen
    std::string detail;
};

// Numeric cross-check of the three structure equations, evaluated from the
// unexpanded pieces: D_t f_{i1} - D_x f_{i2} against products of the
// coefficient values.
CrossCheck cross_check_structure(const Triad& t, int samples, std::uint64_t seed, double tol = 1e-9);

}  // namespace psskit
