#include <gtest/gtest.h>

#include "oracles.hpp"
#include "specvar/harness.hpp"
#include "specvar/schur.hpp"

using namespace specvar;

namespace {

ComplexMatrix m2(Complex a, Complex b, Complex c, Complex d)
{
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

const Complex i1{0.0, 1.0};

} // namespace

TEST(RealPart, JordanBlock)
{
    const auto r = real_part(m2(0, 1, 0, 0));
    EXPECT_EQ(r, m2(0, 0.5, 0.5, 0));
}

TEST(RealPart, HermitianIsFixedPoint)
{
    const auto h = gen_hermitian(5, 3);
    EXPECT_LE((real_part(h) - h).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RealPart, PurelyImaginaryScalar)
{
    ComplexMatrix m(1, 1);
    m << i1;
    EXPECT_EQ(real_part(m)(0, 0), Complex(0.0));
}

TEST(RealPart, RejectsNonSquare)
{
    EXPECT_THROW(real_part(ComplexMatrix::Zero(2, 3)), DimensionError);
    EXPECT_THROW(imag_part(ComplexMatrix::Zero(3, 2)), DimensionError);
}

TEST(ImagPart, JordanBlock)
{
    const auto im = imag_part(m2(0, 1, 0, 0));
    EXPECT_EQ(im(0, 1), Complex(0.0, -0.5));
    EXPECT_EQ(im(1, 0), Complex(0.0, 0.5));
    EXPECT_EQ(im(0, 0), Complex(0.0));
    EXPECT_EQ(im(1, 1), Complex(0.0));
}

TEST(ImagPart, HermitianGivesZero)
{
    const auto h = gen_hermitian(6, 4);
    EXPECT_LE(imag_part(h).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ImagPart, ImaginaryScalar)
{
    ComplexMatrix m(1, 1);
    m << i1;
    EXPECT_EQ(imag_part(m)(0, 0), Complex(1.0));
}

TEST(RealImagParts, ReassembleAndAreHermitian)
{
    for (std::uint64_t seed = 0; seed < 200; ++seed)
    {
        const Index         n  = 1 + static_cast<Index>(seed % 9);
        const ComplexMatrix t  = gen_ginibre(n, n, seed) * (1.0 + static_cast<double>(seed % 5));
        const ComplexMatrix re = real_part(t);
        const ComplexMatrix im = imag_part(t);
        EXPECT_LE((re + kI * im - t).cwiseAbs().maxCoeff(), 1e-14 * (1.0 + t.cwiseAbs().maxCoeff()));
        EXPECT_LE(hermitian_defect(re), 1e-14);
        EXPECT_LE(hermitian_defect(im), 1e-14);
    }
}

TEST(BlockDecompose, Identity)
{
    const auto b = block_decompose(ComplexMatrix::Identity(2, 2), 1);
    EXPECT_EQ(b.t1(0, 0), Complex(1.0));
    EXPECT_EQ(b.t2(0, 0), Complex(0.0));
    EXPECT_EQ(b.t3(0, 0), Complex(0.0));
    EXPECT_EQ(b.t4(0, 0), Complex(1.0));
}

TEST(BlockDecompose, TwoByTwo)
{
    const auto b = block_decompose(m2(1, 2, 3, 4), 1);
    EXPECT_EQ(b.t1(0, 0), Complex(1.0));
    EXPECT_EQ(b.t2(0, 0), Complex(2.0));
    EXPECT_EQ(b.t3(0, 0), Complex(3.0));
    EXPECT_EQ(b.t4(0, 0), Complex(4.0));
}

TEST(BlockDecompose, SplitOutOfRange)
{
    const ComplexMatrix t = ComplexMatrix::Identity(3, 3);
    EXPECT_THROW(block_decompose(t, 0), DimensionError);
    EXPECT_THROW(block_decompose(t, 3), DimensionError);
    EXPECT_THROW(block_decompose(t, -1), DimensionError);
}

TEST(BlockDecompose, ReassemblyIsBitIdentical)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
        const Index         n = 2 + static_cast<Index>(seed % 8);
        const ComplexMatrix t = gen_ginibre(n, n, seed);
        for (Index s = 1; s < n; ++s)
            EXPECT_EQ(block_decompose(t, s).reassemble(), t);
    }
}

TEST(BlockDecompose, HermitianBlocksAreAdjoint)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed)
    {
        const Index         n = 2 + static_cast<Index>(seed % 7);
        const ComplexMatrix h = gen_hermitian(n, seed);
        for (Index s = 1; s < n; ++s)
        {
            const auto b = block_decompose(h, s);
            EXPECT_EQ(b.t3, ComplexMatrix(b.t2.adjoint()));
            EXPECT_LE(hermitian_defect(b.t1), 0.0);
            EXPECT_LE(hermitian_defect(b.t4), 0.0);
        }
    }
}

TEST(Schur, DiagonalSelectionMovesToFront)
{
    ComplexMatrix d = m2(1, 0, 0, 2);
    // sorted order is (2, 1): index 0 is the eigenvalue 2
    const std::size_t sel[] = {0};
    const SchurForm   s     = schur_decompose(d, sel);
    ASSERT_EQ(s.eigenvalue_order.size(), 2u);
    EXPECT_NEAR(std::abs(s.eigenvalue_order[0] - Complex(2.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.eigenvalue_order[1] - Complex(1.0)), 0.0, 1e-12);
}

TEST(Schur, TriangularInputKeepsItsShape)
{
    const ComplexMatrix m = m2(i1, 1, 0, i1);
    const SchurForm     s = schur_decompose(m);
    EXPECT_NEAR(std::abs(s.eigenvalue_order[0] - i1), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.eigenvalue_order[1] - i1), 0.0, 1e-12);
    // T equals M up to a unitary diagonal phase
    EXPECT_NEAR(std::abs(s.t(0, 1)), 1.0, 1e-12);
    EXPECT_EQ(s.t(1, 0), Complex(0.0));
    EXPECT_LE(s.residual(m), 1e-12);
}

TEST(Schur, SwapMatrix)
{
    const ComplexMatrix m = m2(0, 1, 1, 0);
    const SchurForm     s = schur_decompose(m);
    EXPECT_LE(oracle::multiset_distance(s.eigenvalue_order, {1.0, -1.0}), 1e-12);
    EXPECT_LE(s.residual(m), 1e-12);
}

TEST(Schur, RejectsNonSquareAndNonFinite)
{
    EXPECT_THROW(schur_decompose(ComplexMatrix::Zero(2, 3)), DimensionError);
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1)         = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(schur_decompose(m), ParameterError);
}

TEST(Schur, RejectsBadSelection)
{
    const ComplexMatrix m       = gen_ginibre(3, 3, 1);
    const std::size_t   out[]   = {3};
    const std::size_t   twice[] = {1, 1};
    EXPECT_THROW(schur_decompose(m, out), ParameterError);
    EXPECT_THROW(schur_decompose(m, twice), ParameterError);
}

TEST(Schur, ResidualUnitarityAndLowerZeroOnRandomGinibre)
{
    for (std::uint64_t seed = 0; seed < 10000; ++seed)
    {
        const Index         n = 1 + static_cast<Index>(seed % 16);
        const ComplexMatrix m = gen_ginibre(n, n, seed);
        const SchurForm     s = schur_decompose(m);
        ASSERT_LE(s.residual(m), 1e-8 * (1.0 + m.norm())) << "seed " << seed;
        ASSERT_LE((s.q * s.q.adjoint() - ComplexMatrix::Identity(n, n)).norm(), 1e-10 * static_cast<double>(n));
        ASSERT_EQ(strictly_lower_defect(s.t), 0.0);
        ASSERT_LE(oracle::power_sum_defect(m, s.eigenvalue_order), 1e-9) << "seed " << seed;
    }
}

TEST(Schur, ReorderedLeadingEntriesMatchEverySubset)
{
    for (std::uint64_t seed = 0; seed < 12; ++seed)
    {
        const Index         n      = 2 + static_cast<Index>(seed % 9);
        const ComplexMatrix m      = gen_ginibre(n, n, 1000 + seed);
        const EigenMultiset sorted = sorted_eigenvalues(schur_decompose(m).eigenvalue_order);
        for (unsigned mask = 1; mask < (1u << n); ++mask)
        {
            std::vector<std::size_t> sel;
            std::vector<Complex>     expect;
            for (Index k = 0; k < n; ++k)
                if (mask & (1u << k))
                {
                    sel.push_back(static_cast<std::size_t>(k));
                    expect.push_back(sorted[static_cast<std::size_t>(k)]);
                }
            const SchurForm      s = schur_decompose(m, sel);
            std::vector<Complex> leading(s.eigenvalue_order.begin(), s.eigenvalue_order.begin() + sel.size());
            ASSERT_LE(oracle::multiset_distance(leading, expect), 1e-7) << "seed " << seed << " mask " << mask;
            ASSERT_LE(s.residual(m), 1e-8 * (1.0 + m.norm()));
            ASSERT_EQ(strictly_lower_defect(s.t), 0.0);
        }
    }
}

TEST(StrictUpperSplit, ShiftedJordan)
{
    const auto s = strict_upper_split(m2(i1, 1, 0, i1));
    EXPECT_EQ(s.r1, Eigen::Vector2d(0, 0));
    EXPECT_EQ(s.i1, Eigen::Vector2d(1, 1));
    EXPECT_EQ(s.u1, m2(0, 1, 0, 0));
}

TEST(StrictUpperSplit, RealDiagonal)
{
    const ComplexMatrix d = m2(3, 0, 0, -2);
    const auto          s = strict_upper_split(d);
    EXPECT_EQ(s.r1, Eigen::Vector2d(3, -2));
    EXPECT_EQ(s.i1, Eigen::Vector2d(0, 0));
    EXPECT_EQ(s.u1, ComplexMatrix::Zero(2, 2));
}

TEST(StrictUpperSplit, GeneralTriangular)
{
    const auto s = strict_upper_split(m2(Complex(1, 2), 3, 0, 4));
    EXPECT_EQ(s.r1, Eigen::Vector2d(1, 4));
    EXPECT_EQ(s.i1, Eigen::Vector2d(2, 0));
    EXPECT_EQ(s.u1, m2(0, 3, 0, 0));
}

TEST(StrictUpperSplit, RejectsLowerEntries)
{
    EXPECT_THROW(strict_upper_split(m2(1, 0, 1e-6, 1)), ShapeError);
}

TEST(StrictUpperSplit, ReassemblyAndParts)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        const Index         n  = 1 + static_cast<Index>(seed % 8);
        const ComplexMatrix b1 = schur_decompose(gen_ginibre(n, n, seed)).t;
        const auto          s  = strict_upper_split(b1);
        EXPECT_EQ(s.reassemble(), b1);
        EXPECT_LE((real_part(b1) - (s.r1_matrix() + real_part(s.u1))).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LE((imag_part(b1) - (s.i1_matrix() + imag_part(s.u1))).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_EQ(non_strictly_upper_defect(s.u1), 0.0);
    }
}
