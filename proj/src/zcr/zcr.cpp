#include "psskit/zcr.hpp"

#include "psskit/errors.hpp"

namespace psskit {

std::string algebra_name(Algebra a) {
    switch (a) {
    case Algebra::sl2r: return "sl2r";
    case Algebra::su2: return "su2";
    case Algebra::so21: return "so21";
    case Algebra::so3: return "so3";
    }
    return "?";
}

Algebra parse_algebra(const std::string& s) {
    if (s == "sl2r") return Algebra::sl2r;
    if (s == "su2") return Algebra::su2;
    if (s == "so21") return Algebra::so21;
    if (s == "so3") return Algebra::so3;
    throw DomainError("unknown algebra '" + s + "'");
}

bool MatrixTwoForm::all_zero() const {
    for (const auto& e : entries)
        if (!e.c.is_zero()) return false;
    return true;
}

ConstMatrix const_matrix(std::vector<std::vector<Expr>> rows) {
    ConstMatrix m;
    m.n = static_cast<int>(rows.size());
    for (auto& row : rows) {
        if (static_cast<int>(row.size()) != m.n) throw DomainError("matrix must be square");
        for (auto& e : row) {
            if (!jets_of(e).empty()) throw DomainError("gauge matrix entries must be constant");
            m.a.push_back(std::move(e));
        }
    }
    return m;
}

Expr determinant(const ConstMatrix& m) {
    if (m.n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    if (m.n == 3) {
        Expr d;
        for (int j = 0; j < 3; ++j) {
            Expr minor = m.at(1, (j + 1) % 3) * m.at(2, (j + 2) % 3) - m.at(1, (j + 2) % 3) * m.at(2, (j + 1) % 3);
            d += m.at(0, j) * minor;
        }
        return d;
    }
    throw DomainError("determinant only for 2x2 and 3x3 matrices");
}

namespace {

Expr half(const Expr& e) { return Expr(Rational(1, 2)) * e; }
OneForm half(const OneForm& w) { return Expr(Rational(1, 2)) * w; }

ConstMatrix inverse_unimodular(const ConstMatrix& A) {
    Expr det = determinant(A);
    if (det != Expr(1L)) throw NotUnimodular("det A = " + render(det) + ", expected 1");
    if (A.n != 2) throw DomainError("gauge transformations are 2x2");
    return ConstMatrix{2, {A.at(1, 1), -A.at(0, 1), -A.at(1, 0), A.at(0, 0)}};
}

Expr imaginary_unit() { return sqrt_of(Expr(-1L)); }

}  // namespace

MatrixForm omega_sl2(const Triad& t) {
    MatrixForm m{Algebra::sl2r, 2, {}};
    m.entries = {half(t.w2()), half(t.w1() - t.w3()), half(t.w1() + t.w3()), half(-t.w2())};
    return m;
}

MatrixForm omega_su2(const Triad& t) {
    Expr i = imaginary_unit();
    MatrixForm m{Algebra::su2, 2, {}};
    m.entries = {half(i * t.w3()), half(t.w1() - i * t.w2()), half(t.w1() + i * t.w2()), half(-(i * t.w3()))};
    return m;
}

MatrixForm omega_so(const Triad& t) {
    Expr d(static_cast<long>(t.delta()));
    OneForm zero{0L, 0L};
    MatrixForm m{t.delta() == 1 ? Algebra::so21 : Algebra::so3, 3, {}};
    m.entries = {zero, t.w1(), t.w2(), d * t.w1(), zero, t.w3(), d * t.w2(), -t.w3(), zero};
    return m;
}

MatrixTwoForm zc_residual(const MatrixForm& m, const EquationSpec& eq) {
    MatrixTwoForm out{m.n, {}};
    for (int i = 0; i < m.n; ++i) {
        for (int k = 0; k < m.n; ++k) {
            TwoForm e = exterior_d(m.at(i, k), eq);
            for (int j = 0; j < m.n; ++j) e = e - wedge(m.at(i, j), m.at(j, k));
            out.entries.push_back(e);
        }
    }
    return out;
}

MatrixForm gauge_transform(const MatrixForm& m, const ConstMatrix& A) {
    if (m.n != A.n) throw DomainError("gauge matrix size does not match");
    ConstMatrix Ainv = inverse_unimodular(A);
    MatrixForm out{m.algebra, m.n, std::vector<OneForm>(m.entries.size(), OneForm{0L, 0L})};
    for (int i = 0; i < m.n; ++i)
        for (int l = 0; l < m.n; ++l)
            for (int j = 0; j < m.n; ++j)
                for (int k = 0; k < m.n; ++k) {
                    Expr c = A.at(i, j) * Ainv.at(k, l);
                    if (!c.is_zero()) out.at(i, l) = out.at(i, l) + c * m.at(j, k);
                }
    return out;
}

MatrixTwoForm conjugate(const MatrixTwoForm& m, const ConstMatrix& A) {
    ConstMatrix Ainv = inverse_unimodular(A);
    MatrixTwoForm out{m.n, std::vector<TwoForm>(m.entries.size())};
    for (int i = 0; i < m.n; ++i)
        for (int l = 0; l < m.n; ++l)
            for (int j = 0; j < m.n; ++j)
                for (int k = 0; k < m.n; ++k) out.at(i, l) = out.at(i, l) + A.at(i, j) * Ainv.at(k, l) * m.at(j, k);
    return out;
}

ConstMatrix su2_gauge() {
    Expr c = half(sqrt_of(Expr(2L)));
    Expr i = imaginary_unit();
    return const_matrix({{c, c * i}, {c * i, c}});
}

AknsData akns_extract(const Triad& t) {
    const EquationSpec& eq = t.eq();
    AknsData d;
    d.F = half(t.f(2, 1));
    d.A = half(t.f(2, 2));
    d.q = half(t.f(1, 1) - t.f(3, 1));
    d.r = half(t.f(1, 1) + t.f(3, 1));
    d.B = half(t.f(1, 2) - t.f(3, 2));
    d.C = half(t.f(1, 2) + t.f(3, 2));
    Expr Ax = total_dx(d.A, eq), Bx = total_dx(d.B, eq), Cx = total_dx(d.C, eq);
    Expr qt = total_dt(d.q, eq), rt = total_dt(d.r, eq), Ft = total_dt(d.F, eq);
    Expr two(2L);
    d.residuals = {Ax + d.r * d.B - d.q * d.C - Ft, qt - Bx + two * d.F * d.B - two * d.q * d.A,
                   rt - Cx - two * d.F * d.C + two * d.r * d.A};
    d.alt_residuals = {Ax + d.r * d.B - d.q * d.C, qt - Bx - two * d.F * d.B - two * d.q * d.A,
                       rt - Cx + two * d.F * d.C + two * d.r * d.A};
    return d;
}

}  // namespace psskit
