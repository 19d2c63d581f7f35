#pragma once

#include <array>
#include <string>
#include <vector>

#include "psskit/forms.hpp"

namespace psskit {

enum class Algebra : std::uint8_t { sl2r, su2, so21, so3 };

std::string algebra_name(Algebra a);
Algebra parse_algebra(const std::string& s);

struct MatrixForm {
    Algebra algebra = Algebra::sl2r;
    int n = 2;
    std::vector<OneForm> entries;  // row-major

    OneForm& at(int i, int j) { return entries[static_cast<std::size_t>(i * n + j)]; }
    const OneForm& at(int i, int j) const { return entries[static_cast<std::size_t>(i * n + j)]; }
};

struct MatrixTwoForm {
    int n = 2;
    std::vector<TwoForm> entries;

    TwoForm& at(int i, int j) { return entries[static_cast<std::size_t>(i * n + j)]; }
    const TwoForm& at(int i, int j) const { return entries[static_cast<std::size_t>(i * n + j)]; }
    bool all_zero() const;
};

// Constant matrix with exact entries (rationals and constant radicals such
// as i or sqrt_2).
struct ConstMatrix {
    int n = 2;
    std::vector<Expr> a;

    const Expr& at(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
};

ConstMatrix const_matrix(std::vector<std::vector<Expr>> rows);
Expr determinant(const ConstMatrix& m);

MatrixForm omega_sl2(const Triad& t);
MatrixForm omega_so(const Triad& t);
// The su(2) pattern (1/2)[[i w3, w1 - i w2], [w1 + i w2, -i w3]].
MatrixForm omega_su2(const Triad& t);

// d(Omega) - Omega ^ Omega, entrywise.
MatrixTwoForm zc_residual(const MatrixForm& m, const EquationSpec& eq);

// A * Omega * A^-1 for constant A with det A = 1.
MatrixForm gauge_transform(const MatrixForm& m, const ConstMatrix& A);
MatrixTwoForm conjugate(const MatrixTwoForm& m, const ConstMatrix& A);

// The gauge matrix (sqrt 2 / 2)[[1, i], [i, 1]] carrying sl(2,R) to su(2).
ConstMatrix su2_gauge();

struct AknsData {
    Expr q, r, A, B, C, F;
    // A_x + rB - qC - F_t,  q_t - B_x + 2FB - 2qA,  r_t - C_x - 2FC + 2rA
    std::array<Expr, 3> residuals;
    // The same system with the opposite signs on the 2FB and 2FC terms and
    // without F_t, for comparison.
    std::array<Expr, 3> alt_residuals;

    bool ok() const { return residuals[0].is_zero() && residuals[1].is_zero() && residuals[2].is_zero(); }
};

AknsData akns_extract(const Triad& t);

}  // namespace psskit
