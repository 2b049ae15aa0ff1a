#pragma once
//
// Ordered complex Schur factorization M = Q T Q* and the split of an upper
// triangular matrix into real diagonal, imaginary diagonal and strictly upper
// parts.
//
// Eigenvalue selection works on indices into the sorted eigenvalue list
// (real part descending, then imaginary part descending).  Selected
// eigenvalues are moved to the leading diagonal positions by adjacent swaps
// with 2x2 unitary rotations, so the leading columns of Q span the invariant
// subspace belonging to the selection.
//

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "specvar/linalg.hpp"

namespace specvar {

using EigenMultiset = std::vector<Complex>;

struct SchurForm
{
    ComplexMatrix q;
    ComplexMatrix t;
    EigenMultiset eigenvalue_order;

    /// ||Q T Q* - m||_F
    double residual(const ComplexMatrix& m) const { return (q * t * q.adjoint() - m).norm(); }
};

inline EigenMultiset diagonal_values(const ComplexMatrix& t)
{
    EigenMultiset d(static_cast<std::size_t>(t.diagonalSize()));
    for (Index i = 0; i < t.diagonalSize(); ++i)
        d[static_cast<std::size_t>(i)] = t(i, i);
    return d;
}

/// Sort key: real part descending, imaginary part descending.
inline bool eigenvalue_precedes(const Complex& x, const Complex& y)
{
    if (x.real() != y.real())
        return x.real() > y.real();
    return x.imag() > y.imag();
}

/// Positions of `values` listed in eigenvalue sort order (stable under ties).
inline std::vector<std::size_t> sorted_positions(std::span<const Complex> values)
{
    std::vector<std::size_t> pos(values.size());
    std::iota(pos.begin(), pos.end(), std::size_t{0});
    std::stable_sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
        return eigenvalue_precedes(values[a], values[b]);
    });
    return pos;
}

inline EigenMultiset sorted_eigenvalues(std::span<const Complex> values)
{
    EigenMultiset out;
    out.reserve(values.size());
    for (auto p : sorted_positions(values))
        out.push_back(values[p]);
    return out;
}

/// Validates an index selection into a list of n eigenvalues.
inline void validate_selection(std::span<const std::size_t> selection, std::size_t n)
{
    std::vector<bool> seen(n, false);
    for (auto s : selection)
    {
        if (s >= n)
            throw ParameterError("eigenvalue index " + std::to_string(s) + " out of range [0, " +
                                 std::to_string(n) + ")");
        if (seen[s])
            throw ParameterError("eigenvalue index " + std::to_string(s) + " selected twice");
        seen[s] = true;
    }
}

namespace detail {

/// Exchange the diagonal entries T(k,k) and T(k+1,k+1) of an upper-triangular T
/// by a unitary similarity acting on coordinates k, k+1; Q accumulates it.
inline void swap_adjacent(ComplexMatrix& t, ComplexMatrix& q, Index k)
{
    const Index   n  = t.rows();
    const Complex a  = t(k, k);
    const Complex c  = t(k + 1, k + 1);
    if (a == c)
        return;

    // eigenvector of the 2x2 block for eigenvalue c
    const Complex x1 = t(k, k + 1);
    const Complex x2 = c - a;
    const double  r  = std::hypot(std::abs(x1), std::abs(x2));

    Eigen::Matrix2cd g;
    g << x1 / r, -std::conj(x2) / r,
         x2 / r,  std::conj(x1) / r;

    t.block(k, k, 2, n - k) = g.adjoint() * t.block(k, k, 2, n - k);
    t.block(0, k, k + 2, 2) = t.block(0, k, k + 2, 2) * g;
    q.middleCols(k, 2)      = q.middleCols(k, 2) * g;

    t(k + 1, k)     = 0.0;
    t(k, k)         = c;
    t(k + 1, k + 1) = a;
}

} // namespace detail

/// Schur factorization of `m`.  When `leading` is non-empty, the eigenvalues
/// with these indices (into the sorted eigenvalue list) occupy the first
/// leading.size() diagonal positions of T, in sorted order.
inline SchurForm schur_decompose(const ComplexMatrix& m, std::span<const std::size_t> leading = {})
{
    require_square(m, "schur_decompose argument");
    require_finite(m, "schur_decompose argument");
    const Index n = m.rows();

    SchurForm s;
    if (n == 0)
        return s;
    if (n == 1)
    {
        s.q = ComplexMatrix::Identity(1, 1);
        s.t = m;
    }
    else
    {
        Eigen::ComplexSchur<ComplexMatrix> solver(m, true);
        if (solver.info() != Eigen::Success)
            throw NumericalError("complex Schur iteration did not converge");
        s.q = solver.matrixU();
        s.t = solver.matrixT();
        s.t.triangularView<Eigen::StrictlyLower>().setZero();
    }

    if (!leading.empty())
    {
        validate_selection(leading, static_cast<std::size_t>(n));

        const EigenMultiset diag  = diagonal_values(s.t);
        const auto          order = sorted_positions(diag);

        // identity[pos] = original diagonal position of the entry now at pos
        std::vector<std::size_t> identity(static_cast<std::size_t>(n));
        std::iota(identity.begin(), identity.end(), std::size_t{0});

        std::vector<std::size_t> targets;
        targets.reserve(leading.size());
        std::vector<std::size_t> sorted_sel(leading.begin(), leading.end());
        std::sort(sorted_sel.begin(), sorted_sel.end());
        for (auto idx : sorted_sel)
            targets.push_back(order[idx]);

        for (std::size_t slot = 0; slot < targets.size(); ++slot)
        {
            auto j = static_cast<std::size_t>(
                std::find(identity.begin(), identity.end(), targets[slot]) - identity.begin());
            while (j > slot)
            {
                detail::swap_adjacent(s.t, s.q, static_cast<Index>(j - 1));
                std::swap(identity[j - 1], identity[j]);
                --j;
            }
        }
    }

    const double res = s.residual(m);
    if (!(res <= 1e-8 * tolerance_scale(m)))
        throw NumericalError("Schur residual " + std::to_string(res) + " exceeds tolerance");

    s.eigenvalue_order = diagonal_values(s.t);
    return s;
}

/// B_1 = R_1 + i I_1 + U_1 with R_1, I_1 real diagonal and U_1 strictly upper.
struct TriangularSplit
{
    Eigen::VectorXd r1;   // diagonal of R_1
    Eigen::VectorXd i1;   // diagonal of I_1
    ComplexMatrix   u1;

    ComplexMatrix r1_matrix() const { return ComplexMatrix(r1.cast<Complex>().asDiagonal()); }
    ComplexMatrix i1_matrix() const { return ComplexMatrix(i1.cast<Complex>().asDiagonal()); }
    ComplexMatrix reassemble() const { return r1_matrix() + kI * i1_matrix() + u1; }
};

inline TriangularSplit strict_upper_split(const ComplexMatrix& b1)
{
    require_square(b1, "strict_upper_split argument");
    if (strictly_lower_defect(b1) > 1e-12)
        throw ShapeError("strict_upper_split expects an upper-triangular matrix");

    TriangularSplit s;
    s.r1 = b1.diagonal().real();
    s.i1 = b1.diagonal().imag();
    s.u1 = strictly_upper_part(b1);
    return s;
}

} // namespace specvar
