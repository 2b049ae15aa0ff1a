#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "specvar/linalg.hpp"

namespace specvar {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Singular values, descending, with round-off negatives clamped to zero.
using SingularSpectrum = Eigen::VectorXd;

inline SingularSpectrum singular_values(const ComplexMatrix& t)
{
    if (t.size() == 0)
        return SingularSpectrum();
    require_finite(t, "singular_values argument");
    if (t.rows() == t.cols() && hermitian_defect(t) == 0.0)
    {
        // exactly Hermitian: singular values are |eigenvalues|
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(t, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw NumericalError("Hermitian eigensolver did not converge");
        SingularSpectrum s = es.eigenvalues().cwiseAbs();
        std::sort(s.begin(), s.end(), std::greater<>());
        return s;
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(t);
    SingularSpectrum s = svd.singularValues();
    if (!s.allFinite())
        throw NumericalError("SVD produced non-finite singular values");
    return s.cwiseMax(0.0);
}

inline void require_schatten_exponent(double p)
{
    if (!(p >= 1.0))
        throw ParameterError("Schatten exponent p = " + std::to_string(p) + " must satisfy p >= 1");
}

/// sum_k s_k^p for finite p.
inline double schatten_power_sum(const SingularSpectrum& s, double p)
{
    double acc = 0.0;
    for (Index k = 0; k < s.size(); ++k)
        acc += std::pow(s[k], p);
    return acc;
}

/// ||t||_p; p = kInfinity gives the operator norm.
inline double schatten_norm(const ComplexMatrix& t, double p)
{
    require_schatten_exponent(p);
    const SingularSpectrum s = singular_values(t);
    if (s.size() == 0)
        return 0.0;
    if (std::isinf(p))
        return s[0];
    if (p == 2.0)
        return std::sqrt(s.squaredNorm());
    return std::pow(schatten_power_sum(s, p), 1.0 / p);
}

/// ||t||_p^p, computed without the root for accuracy.  Finite p only.
inline double schatten_pow(const ComplexMatrix& t, double p)
{
    require_schatten_exponent(p);
    if (std::isinf(p))
        throw ParameterError("schatten_pow requires finite p");
    return schatten_power_sum(singular_values(t), p);
}

} // namespace specvar
