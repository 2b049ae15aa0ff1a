#pragma once
//
// Dense complex matrices: Hermitian structure, real/imaginary parts and
// 2x2 block decompositions with respect to H = E (+) F, E = span(e_1..e_N).
//

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "specvar/errors.hpp"

namespace specvar {

using Complex       = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Index         = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Relative tolerance scale used throughout: 1 + ||m||_F.
inline double tolerance_scale(const ComplexMatrix& m) { return 1.0 + m.norm(); }

inline bool is_finite(const ComplexMatrix& m)
{
    return m.allFinite();
}

inline void require_finite(const ComplexMatrix& m, const char* what = "matrix")
{
    if (!is_finite(m))
        throw ParameterError(std::string(what) + " has a non-finite entry");
}

inline void require_square(const ComplexMatrix& m, const char* what = "matrix")
{
    if (m.rows() != m.cols())
        throw DimensionError(std::string(what) + " is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected square");
}

inline void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("shape mismatch: " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                             "x" + std::to_string(b.cols()));
}

/// max_ij |m_ij - conj(m_ji)|
inline double hermitian_defect(const ComplexMatrix& m)
{
    if (m.size() == 0)
        return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Hermitian up to tol * (1 + ||m||_F).
inline bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10)
{
    return m.rows() == m.cols() && hermitian_defect(m) <= tol * tolerance_scale(m);
}

inline void require_hermitian(const ComplexMatrix& m, const char* what = "matrix")
{
    require_square(m, what);
    if (!is_hermitian(m))
        throw StructureError(std::string(what) + " is not Hermitian (defect " +
                             std::to_string(hermitian_defect(m)) + ")");
}

/// Re(T) = (T + T*) / 2
inline ComplexMatrix real_part(const ComplexMatrix& t)
{
    require_square(t, "real_part argument");
    return (t + t.adjoint()) * 0.5;
}

/// Im(T) = (T - T*) / (2i)
inline ComplexMatrix imag_part(const ComplexMatrix& t)
{
    require_square(t, "imag_part argument");
    // multiplying by -i/2 keeps the result exactly Hermitian
    return (t - t.adjoint()) * Complex(0.0, -0.5);
}

/// Diagonal part K_D of a square matrix.
inline ComplexMatrix diagonal_part(const ComplexMatrix& k)
{
    require_square(k, "diagonal_part argument");
    return ComplexMatrix(k.diagonal().asDiagonal());
}

/// Off-diagonal part K_O = K - K_D.
inline ComplexMatrix off_diagonal_part(const ComplexMatrix& k)
{
    ComplexMatrix o = k;
    o.diagonal().setZero();
    return o;
}

inline ComplexMatrix strictly_upper_part(const ComplexMatrix& m)
{
    ComplexMatrix u = ComplexMatrix::Zero(m.rows(), m.cols());
    u.triangularView<Eigen::StrictlyUpper>() = m.triangularView<Eigen::StrictlyUpper>();
    return u;
}

/// Largest |entry| on or below the diagonal, i.e. the distance from strictly upper-triangular.
inline double non_strictly_upper_defect(const ComplexMatrix& m)
{
    double d = 0.0;
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = j; i < m.rows(); ++i)
            d = std::max(d, std::abs(m(i, j)));
    return d;
}

inline double strictly_lower_defect(const ComplexMatrix& m)
{
    double d = 0.0;
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = j + 1; i < m.rows(); ++i)
            d = std::max(d, std::abs(m(i, j)));
    return d;
}

inline ComplexMatrix block_diagonal(const ComplexMatrix& s1, const ComplexMatrix& s2)
{
    ComplexMatrix s = ComplexMatrix::Zero(s1.rows() + s2.rows(), s1.cols() + s2.cols());
    s.topLeftCorner(s1.rows(), s1.cols())         = s1;
    s.bottomRightCorner(s2.rows(), s2.cols())     = s2;
    return s;
}

/// T = [t1 t2; t3 t4] with t1 of size split_dim x split_dim.
struct BlockPartition
{
    Index         split_dim = 0;
    ComplexMatrix t1;
    ComplexMatrix t2;
    ComplexMatrix t3;
    ComplexMatrix t4;

    ComplexMatrix reassemble() const
    {
        const Index n = t1.rows() + t4.rows();
        ComplexMatrix t(n, n);
        t.topLeftCorner(split_dim, split_dim)                 = t1;
        t.topRightCorner(split_dim, n - split_dim)            = t2;
        t.bottomLeftCorner(n - split_dim, split_dim)          = t3;
        t.bottomRightCorner(n - split_dim, n - split_dim)     = t4;
        return t;
    }
};

inline BlockPartition block_decompose(const ComplexMatrix& t, Index split_dim)
{
    require_square(t, "block_decompose argument");
    const Index n = t.rows();
    if (split_dim <= 0 || split_dim >= n)
        throw DimensionError("split_dim " + std::to_string(split_dim) + " outside (0, " +
                             std::to_string(n) + ")");
    BlockPartition b;
    b.split_dim = split_dim;
    b.t1        = t.topLeftCorner(split_dim, split_dim);
    b.t2        = t.topRightCorner(split_dim, n - split_dim);
    b.t3        = t.bottomLeftCorner(n - split_dim, split_dim);
    b.t4        = t.bottomRightCorner(n - split_dim, n - split_dim);
    return b;
}

} // namespace specvar
