#include <gtest/gtest.h>

#include "support.hpp"

using evec::CoordinateVector;
using evec::VectorSequence;
using evt::cplx;

TEST(Inner, OrthogonalAxesGiveZero) {
    EXPECT_EQ(evec::inner(CoordinateVector<double>{1, 0}, CoordinateVector<double>{0, 1}), 0.0);
}

TEST(Inner, ConjugatesFirstArgument) {
    auto v = evec::inner(CoordinateVector<cplx>{cplx(0, 1), 0}, CoordinateVector<cplx>{1, 0});
    EXPECT_EQ(v, cplx(0, -1));
}

TEST(Inner, DirectSum) {
    // 2*3 + 1*4
    EXPECT_EQ(evec::inner(CoordinateVector<double>{2, 1}, CoordinateVector<double>{3, 4}), 10.0);
}

TEST(Inner, DimensionMismatchThrows) {
    EXPECT_THROW(evec::inner(CoordinateVector<double>{1, 2}, CoordinateVector<double>{1, 2, 3}), evec::DimensionError);
    auto w = evec::Weighting<double>::ones(2);
    EXPECT_THROW(w(CoordinateVector<double>{1, 2, 3}), evec::DimensionError);
}

TEST(Inner, WeightedUsesPositiveWeights) {
    evec::Weighting<double> w(CoordinateVector<double>{1, 1}, {2.0, 3.0});
    EXPECT_EQ(evec::inner(w, CoordinateVector<double>{1, 1}, CoordinateVector<double>{1, 2}), 8.0);
    EXPECT_EQ(w(CoordinateVector<double>{1, 1}), 5.0);
}

TEST(Weighting, RejectsZeroAndBadWeights) {
    EXPECT_THROW(evec::Weighting<double>(CoordinateVector<double>{0, 0}), evec::Error);
    EXPECT_THROW(evec::Weighting<double>(CoordinateVector<double>(0)), evec::DimensionError);
    EXPECT_THROW(evec::Weighting<double>(CoordinateVector<double>{1, 0}, {1.0, -1.0}), evec::Error);
    EXPECT_THROW(evec::Weighting<double>(CoordinateVector<double>{1, 0}, {1.0}), evec::DimensionError);
}

TEST(Norm, Examples) {
    EXPECT_EQ(evec::norm(CoordinateVector<double>{0, 0, 0}), 0.0);
    EXPECT_EQ(evec::norm(CoordinateVector<double>{3, 4}), 5.0);
    EXPECT_EQ(evec::norm(CoordinateVector<double>{1, 1, 1, 1}), 2.0);
    EXPECT_DOUBLE_EQ(evec::norm(CoordinateVector<cplx>{cplx(3, 4)}), 5.0);
}

TEST(Delta, ConstantSequenceGivesZero) {
    auto seq = VectorSequence<double>::constant(CoordinateVector<double>{1.5, -2}, 5);
    for (std::size_t m = 0; m < 4; ++m) EXPECT_TRUE(evec::delta(seq, m).is_zero());
}

TEST(Delta, LinearSequence) {
    VectorSequence<double> seq([](std::size_t m) { return CoordinateVector<double>{double(m), 2.0 * m}; }, 10, 2);
    for (std::size_t m = 0; m < 9; ++m) EXPECT_EQ(evec::delta(seq, m), (CoordinateVector<double>{1, 2}));
}

TEST(Delta, GeometricSequence) {
    VectorSequence<double> seq([](std::size_t m) { return CoordinateVector<double>{std::pow(0.5, m)}; }, 10, 1);
    // 0.5^{m+1} - 0.5^m = -0.5^{m+1}
    EXPECT_EQ(evec::delta(seq, 0)[0], -0.5);
    EXPECT_EQ(evec::delta(seq, 1)[0], -0.25);
    EXPECT_EQ(evec::delta(seq, 2)[0], -0.125);
}

TEST(Delta, OutOfRangeThrows) {
    auto seq = VectorSequence<double>::constant(CoordinateVector<double>{1}, 3);
    EXPECT_NO_THROW(evec::delta(seq, 1));
    EXPECT_THROW(evec::delta(seq, 2), evec::RangeError);
    EXPECT_THROW(seq.at(3), evec::RangeError);
}

TEST(VectorSequence, FromVectorsRejectsRaggedRows) {
    std::vector<CoordinateVector<double>> rows{{1, 2}, {3}};
    EXPECT_THROW(VectorSequence<double>::from_vectors(rows), evec::DimensionError);
}

TEST(VectorSequence, EmptyIsValid) {
    auto seq = VectorSequence<double>::from_vectors({});
    EXPECT_EQ(seq.size(), 0u);
    EXPECT_FALSE(seq.contains(0));
}

TEST(CoordinateVector, ArithmeticChecksDimension) {
    CoordinateVector<double> a{1, 2};
    CoordinateVector<double> b{1, 2, 3};
    EXPECT_THROW(a += b, evec::DimensionError);
    EXPECT_EQ(a + a, (CoordinateVector<double>{2, 4}));
    EXPECT_EQ(2.0 * a - a, a);
}

// ---------------------------------------------------------------------------
// Properties

TEST(CoreProperty, Sesquilinearity) {
    evt::Gen gen(101);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = gen.index(1, 8);
        auto a = gen.vec<cplx>(dim);
        auto b = gen.vec<cplx>(dim);
        const cplx al = gen.scalar<cplx>();
        const cplx be = gen.scalar<cplx>();
        const cplx lhs = evec::inner(al * a, be * b);
        const cplx rhs = std::conj(al) * be * evec::inner(a, b);
        EXPECT_LE(std::abs(lhs - rhs), 1e-14 * std::max(1.0, std::abs(rhs))) << "trial " << trial;
    }
}

TEST(CoreProperty, SesquilinearityWeighted) {
    evt::Gen gen(102);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = gen.index(1, 6);
        std::vector<double> weights;
        for (std::size_t j = 0; j < dim; ++j) weights.push_back(gen.uniform(0.1, 3.0));
        evec::Weighting<cplx> w(gen.vec<cplx>(dim), weights);
        auto a = gen.vec<cplx>(dim);
        auto b = gen.vec<cplx>(dim);
        const cplx al = gen.scalar<cplx>();
        const cplx be = gen.scalar<cplx>();
        const cplx lhs = evec::inner(w, al * a, be * b);
        const cplx rhs = std::conj(al) * be * evec::inner(w, a, b);
        EXPECT_LE(std::abs(lhs - rhs), 1e-14 * std::max(1.0, std::abs(rhs)));
    }
}

TEST(CoreProperty, NormZeroIffZeroAndTriangle) {
    evt::Gen gen(103);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = gen.index(1, 8);
        auto a = gen.vec<cplx>(dim);
        auto b = gen.vec<cplx>(dim);
        EXPECT_GT(evec::norm(a), 0.0);
        EXPECT_EQ(evec::norm(a - a), 0.0);
        EXPECT_LE(evec::norm(a + b), evec::norm(a) + evec::norm(b) + 1e-15);
        EXPECT_NEAR(evec::norm(a) * evec::norm(a), std::real(evec::inner(a, a)), 1e-13);
    }
}

TEST(CoreProperty, DeltaIsLinear) {
    evt::Gen gen(104);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim = gen.index(1, 5);
        std::vector<CoordinateVector<double>> us, vs;
        for (int m = 0; m < 12; ++m) {
            us.push_back(gen.vec<double>(dim));
            vs.push_back(gen.vec<double>(dim));
        }
        auto u = VectorSequence<double>::from_vectors(us);
        auto v = VectorSequence<double>::from_vectors(vs);
        const double a = gen.uniform(-2, 2);
        auto sum = u.combined(1.0, v, 1.0);
        auto lin = u.combined(a, v, 0.0);
        for (std::size_t m = 0; m + 1 < 12; ++m) {
            EXPECT_LE(evt::rel_diff(evec::delta(sum, m), evec::delta(u, m) + evec::delta(v, m)), 1e-14);
            EXPECT_LE(evt::rel_diff(evec::delta(lin, m), a * evec::delta(u, m)), 1e-14);
        }
    }
}
