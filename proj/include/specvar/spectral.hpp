#pragma once
//
// Eigenvalue multisets and the spectrum-distance functionals built on them.
//
// Finite-dimensional reading throughout: the discrete spectrum of B is its
// full eigenvalue multiset (algebraic multiplicity, taken from the Schur
// diagonal) and sigma(A) is the eigenvalue set of the Hermitian matrix A.
//

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "specvar/schur.hpp"

namespace specvar {

/// Eigenvalues of b with algebraic multiplicity (the Schur diagonal).
inline EigenMultiset eigenvalues(const ComplexMatrix& b)
{
    return schur_decompose(b).eigenvalue_order;
}

/// Real spectrum of a Hermitian matrix, ascending.
inline std::vector<double> hermitian_spectrum(const ComplexMatrix& a)
{
    require_hermitian(a, "Hermitian argument");
    require_finite(a, "Hermitian argument");
    if (a.rows() == 0)
        return {};
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("Hermitian eigensolver did not converge");
    const Eigen::VectorXd& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

inline double spectrum_distance(Complex lambda, std::span<const Complex> spectrum)
{
    if (spectrum.empty())
        throw ParameterError("spectrum_distance: empty spectrum");
    double d = std::numeric_limits<double>::infinity();
    for (const auto& mu : spectrum)
        d = std::min(d, std::abs(lambda - mu));
    return d;
}

inline double spectrum_distance(Complex lambda, std::span<const double> spectrum)
{
    if (spectrum.empty())
        throw ParameterError("spectrum_distance: empty spectrum");
    double d = std::numeric_limits<double>::infinity();
    for (double mu : spectrum)
        d = std::min(d, std::abs(lambda - mu));
    return d;
}

/// Multiset equality up to tol: greedy nearest matching of x against y.
inline bool multisets_match(std::span<const Complex> x, std::span<const Complex> y, double tol)
{
    if (x.size() != y.size())
        return false;
    std::vector<bool> used(y.size(), false);
    for (const auto& v : x)
    {
        std::size_t best = y.size();
        double      bd   = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < y.size(); ++j)
            if (!used[j] && std::abs(v - y[j]) < bd)
            {
                bd   = std::abs(v - y[j]);
                best = j;
            }
        if (best == y.size() || bd > tol)
            return false;
        used[best] = true;
    }
    return true;
}

namespace detail {

inline void require_variation_args(const ComplexMatrix& a, const ComplexMatrix& b, double p)
{
    require_hermitian(a, "A");
    require_square(b, "B");
    require_same_shape(a, b);
    if (!(p >= 1.0) || std::isinf(p))
        throw ParameterError("exponent p = " + std::to_string(p) + " must be finite and >= 1");
}

} // namespace detail

/// sum_k dist(lambda_k, spectrum)^p for precomputed eigenvalues.
inline double variation_sum(std::span<const Complex> lambdas, std::span<const double> spectrum, double p)
{
    double acc = 0.0;
    for (const auto& l : lambdas)
        acc += std::pow(spectrum_distance(l, spectrum), p);
    return acc;
}

/// sum_k ( dist(Re lambda_k, spectrum)^p + imag_weight |Im lambda_k|^p ).
inline double split_variation_sum(std::span<const Complex> lambdas, std::span<const double> spectrum,
                                  double p, double imag_weight)
{
    double acc = 0.0;
    for (const auto& l : lambdas)
        acc += std::pow(spectrum_distance(Complex(l.real(), 0.0), spectrum), p) +
               imag_weight * std::pow(std::abs(l.imag()), p);
    return acc;
}

/// sum over eigenvalues lambda of B of dist(lambda, sigma(A))^p.
inline double spectral_variation(const ComplexMatrix& a, const ComplexMatrix& b, double p)
{
    detail::require_variation_args(a, b, p);
    const auto spec = hermitian_spectrum(a);
    const auto lam  = eigenvalues(b);
    return variation_sum(lam, spec, p);
}

inline double split_variation(const ComplexMatrix& a, const ComplexMatrix& b, double p, double imag_weight)
{
    detail::require_variation_args(a, b, p);
    if (!(imag_weight >= 0.0))
        throw ParameterError("imag_weight must be non-negative");
    const auto spec = hermitian_spectrum(a);
    const auto lam  = eigenvalues(b);
    return split_variation_sum(lam, spec, p, imag_weight);
}

/// Distance from lambda to the real segment [a, b].
inline double interval_distance(Complex lambda, double a, double b)
{
    if (!(a <= b))
        throw ParameterError("interval_distance: a > b");
    const double x = std::clamp(lambda.real(), a, b);
    return std::abs(lambda - Complex(x, 0.0));
}

/// Outer polygonal approximation of the numerical range Num(A): the
/// intersection of the supporting half-planes
///   { z : Re(e^{-i theta_j} z) <= lambda_max(Re(e^{-i theta_j} A)) },
///   theta_j = 2 pi j / angle_count.
/// It contains Num(A), so distances to it never exceed distances to Num(A).
class NumericalRangeOuter
{
public:
    NumericalRangeOuter(const ComplexMatrix& a, int angle_count)
    {
        require_square(a, "numerical range argument");
        require_finite(a, "numerical range argument");
        if (a.rows() == 0)
            throw DimensionError("numerical range of an empty matrix");
        if (angle_count < 8)
            throw ParameterError("angle_count must be >= 8");

        const ComplexMatrix re = real_part(a);
        const ComplexMatrix im = imag_part(a);
        const auto          m  = static_cast<std::size_t>(angle_count);

        cos_.resize(m);
        sin_.resize(m);
        support_.assign(m, 0.0);
        for (std::size_t j = 0; j < m; ++j)
        {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / angle_count;
            cos_[j]            = std::cos(theta);
            sin_[j]            = std::sin(theta);
        }

        // the operator at theta + pi is the negative of the one at theta, so for
        // even angle counts one eigensolve yields both support values
        const bool   paired = m % 2 == 0;
        const size_t solves = paired ? m / 2 : m;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es;
        for (std::size_t j = 0; j < solves; ++j)
        {
            es.compute(cos_[j] * re + sin_[j] * im, Eigen::EigenvaluesOnly);
            if (es.info() != Eigen::Success)
                throw NumericalError("Hermitian eigensolver did not converge in angle sweep");
            support_[j] = es.eigenvalues().maxCoeff();
            if (paired)
                support_[j + m / 2] = -es.eigenvalues().minCoeff();
        }

        // vertex j = boundary line j  intersected with boundary line j+1
        vertices_.resize(m);
        for (std::size_t j = 0; j < m; ++j)
        {
            const std::size_t k   = (j + 1) % m;
            const double      det = cos_[j] * sin_[k] - sin_[j] * cos_[k];
            const double      x   = (support_[j] * sin_[k] - sin_[j] * support_[k]) / det;
            const double      y   = (cos_[j] * support_[k] - support_[j] * cos_[k]) / det;
            vertices_[j]          = Complex(x, y);
        }
    }

    int angle_count() const { return static_cast<int>(support_.size()); }

    /// lambda_max(Re(e^{-i theta_j} A))
    std::span<const double> support_values() const { return support_; }
    std::span<const Complex> vertices() const { return vertices_; }

    double distance(Complex z) const
    {
        const std::size_t m = support_.size();
        double            violation = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            violation = std::max(violation, cos_[j] * z.real() + sin_[j] * z.imag() - support_[j]);
        if (violation <= 0.0)
            return 0.0;

        double d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j)
            d = std::min(d, segment_distance(z, vertices_[(j + m - 1) % m], vertices_[j]));
        return d;
    }

private:
    static double segment_distance(Complex z, Complex u, Complex v)
    {
        const Complex e  = v - u;
        const double  ee = std::norm(e);
        if (ee == 0.0)
            return std::abs(z - u);
        const double t = std::clamp(((z - u) * std::conj(e)).real() / ee, 0.0, 1.0);
        return std::abs(z - (u + t * e));
    }

    std::vector<double>  cos_;
    std::vector<double>  sin_;
    std::vector<double>  support_;
    std::vector<Complex> vertices_;
};

/// Lower bound on dist(lambda, Num(a)), converging as angle_count grows.
inline double numerical_range_distance(Complex lambda, const ComplexMatrix& a, int angle_count)
{
    return NumericalRangeOuter(a, angle_count).distance(lambda);
}

/// Band spectrum [a1,a2] u [a3,a4] u ... with strictly increasing endpoints.
class BandSpectrum
{
public:
    explicit BandSpectrum(std::vector<double> endpoints)
        : endpoints_(std::move(endpoints))
    {
        if (endpoints_.empty() || endpoints_.size() % 2 != 0)
            throw ParameterError("band spectrum needs a non-empty, even number of endpoints");
        for (std::size_t i = 1; i < endpoints_.size(); ++i)
            if (!(endpoints_[i - 1] < endpoints_[i]))
                throw ParameterError("band endpoints must be strictly increasing");
    }

    std::span<const double> endpoints() const { return endpoints_; }
    std::size_t band_count() const { return endpoints_.size() / 2; }

    double distance(Complex lambda) const
    {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < band_count(); ++k)
            d = std::min(d, interval_distance(lambda, endpoints_[2 * k], endpoints_[2 * k + 1]));
        return d;
    }

    double edge_distance(Complex lambda) const
    {
        return spectrum_distance(lambda, std::span<const double>(endpoints_));
    }

private:
    std::vector<double> endpoints_;
};

/// sum_lambda dist(lambda, bands)^{p+1+eps} / ( dist(lambda, band edges) (1 + |lambda|) )
inline double gk_functional(const BandSpectrum& bands, const ComplexMatrix& b, double p, double epsilon)
{
    require_square(b, "B");
    if (!(p >= 1.0) || std::isinf(p))
        throw ParameterError("exponent p must be finite and >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ParameterError("epsilon must lie in (0, 1)");

    double acc = 0.0;
    for (const auto& l : eigenvalues(b))
    {
        const double d = bands.distance(l);
        if (d < 1e-12)
            throw DegenerateTermError("eigenvalue (" + std::to_string(l.real()) + ", " +
                                      std::to_string(l.imag()) + ") lies on the band set");
        acc += std::pow(d, p + 1.0 + epsilon) / (bands.edge_distance(l) * (1.0 + std::abs(l)));
    }
    return acc;
}

/// Orthonormal basis (n x N) of the invariant subspace of the selected
/// eigenvalues (indices into the sorted eigenvalue list).
inline ComplexMatrix riesz_subspace(const ComplexMatrix& b, std::span<const std::size_t> selection)
{
    if (selection.empty())
        throw ParameterError("riesz_subspace: empty selection");
    const SchurForm s = schur_decompose(b, selection);
    return s.q.leftCols(static_cast<Index>(selection.size()));
}

} // namespace specvar
