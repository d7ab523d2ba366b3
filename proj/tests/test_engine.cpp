#include <gtest/gtest.h>

#include "support.hpp"

using evec::CoordinateVector;
using evec::FunctionalPath;
using evec::VectorSequence;
using V = CoordinateVector<double>;
using evt::cplx;

namespace {

struct Scalar05 {
    evec::ScaleFamily<double> g = evec::make_geometric_scale<double>({V{1}}, {0.5}, 60);
    evec::ModelSequence<double> model{V{1}, {1.0}, g};
    VectorSequence<double> x = model.as_sequence();
    evec::Weighting<double> w = evec::Weighting<double>::ones(1);
};

struct TwoDim {
    evec::ScaleFamily<double> g = evec::make_geometric_scale<double>({V{1, 1}, V{0, 1}}, {0.5, 0.25}, 60);
    evec::ModelSequence<double> model{V{1, 0}, {1.0, 1.0}, g};
    VectorSequence<double> x = model.as_sequence();
    evec::Weighting<double> w{V{1, 1}};
};

evec::ScaleFamily<double> duplicated_scale(std::size_t size) {
    std::vector<V> col;
    for (std::size_t m = 0; m < size; ++m) col.push_back(V{std::pow(0.5, m), std::pow(0.5, m + 1)});
    return evec::make_tabulated_scale<double>({col, col});
}

} // namespace

TEST(BuildSystem, ScalarHandEvaluation) {
    Scalar05 f;
    for (std::size_t n = 0; n < 5; ++n) {
        auto sys = evec::build_system(f.x, f.g, f.w, n, 1);
        EXPECT_EQ(sys.matrix(0, 0), -std::pow(0.5, n + 1));
        EXPECT_EQ(sys.rhs[0], -std::pow(0.5, n + 1));
    }
}

TEST(BuildSystem, ConstantSequenceGivesZeroRhs) {
    TwoDim f;
    auto x = VectorSequence<double>::constant(V{2, 3}, 10);
    auto sys = evec::build_system(x, f.g, f.w, 1, 2);
    for (double r : sys.rhs) EXPECT_EQ(r, 0.0);
}

TEST(BuildSystem, DuplicateScalesGiveEqualColumns) {
    auto g = duplicated_scale(10);
    auto x = VectorSequence<double>::constant(V{1, 1}, 10);
    auto sys = evec::build_system(x, g, evec::Weighting<double>::ones(2), 0, 2);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(sys.matrix(j, 0), sys.matrix(j, 1));
}

TEST(BuildSystem, RangeErrors) {
    Scalar05 f;
    auto short_x = f.model.as_sequence(5);
    EXPECT_NO_THROW(evec::build_system(short_x, f.g, f.w, 3, 1));
    EXPECT_THROW(evec::build_system(short_x, f.g, f.w, 4, 1), evec::RangeError);
    EXPECT_THROW(evec::build_system(f.x, f.g, f.w, 0, 2), evec::RangeError);
    EXPECT_THROW(evec::build_system(f.x, f.g, f.w, 0, 0), evec::Error);
}

TEST(SolveCoefficients, ScalarModel) {
    Scalar05 f;
    for (std::size_t n = 0; n < 10; ++n)
        EXPECT_DOUBLE_EQ(evec::solve_coefficients(f.x, f.g, f.w, n, 1).alpha_tilde[0], 1.0);
}

TEST(SolveCoefficients, RecoversModelCoefficients) {
    evt::Gen gen(501);
    auto g = evec::make_geometric_scale<double>({gen.vec<double>(3), gen.vec<double>(3)}, {0.8, 0.4});
    evec::ModelSequence<double> model(gen.vec<double>(3), {2.0, 3.0}, g);
    auto x = model.as_sequence();
    auto w = evec::Weighting<double>::ones(3);
    // Larger n loses digits to cancellation in the differences of x.
    for (std::size_t n = 0; n < 4; ++n) {
        auto sol = evec::solve_coefficients(x, g, w, n, 2);
        EXPECT_NEAR(sol.alpha_tilde[0], 2.0, 1e-12);
        EXPECT_NEAR(sol.alpha_tilde[1], 3.0, 1e-12);
        EXPECT_GE(sol.condition_estimate, 1.0);
        EXPECT_LE(sol.residual_norm, 1e-15);
    }
}

TEST(SolveCoefficients, DuplicateScalesAreSingular) {
    auto g = duplicated_scale(10);
    VectorSequence<double> x([](std::size_t m) { return V{1.0 / (m + 1), 2.0}; }, 10, 2);
    EXPECT_THROW(evec::solve_coefficients(x, g, evec::Weighting<double>::ones(2), 0, 2), evec::SingularSystem);
    EXPECT_THROW(evec::functional(x, g, evec::Weighting<double>::ones(2), 0, 2, FunctionalPath::Determinant),
                 evec::SingularSystem);
}

TEST(Extrapolate, KZeroIsInput) {
    TwoDim f;
    EXPECT_EQ(evec::extrapolate(f.x, f.g, f.w, 3, 0), f.x.at(3));
}

TEST(Extrapolate, ScalarExactAnnihilation) {
    Scalar05 f;
    EXPECT_EQ(evec::extrapolate(f.x, f.g, f.w, 0, 1), V{1});
}

TEST(Extrapolate, TwoDimensionalExactModel) {
    TwoDim f;
    auto s = evec::extrapolate(f.x, f.g, f.w, 0, 2);
    EXPECT_LE(evec::norm(s - V{1, 0}), 1e-12);
    auto d = evec::functional(f.x, f.g, f.w, 0, 2, FunctionalPath::Determinant);
    EXPECT_LE(evec::norm(d - V{1, 0}), 1e-12);
}

TEST(Functional, AnnihilatesLeadingScales) {
    TwoDim f;
    for (auto path : {FunctionalPath::Solve, FunctionalPath::Determinant})
        for (std::size_t n = 0; n < 8; ++n)
            for (std::size_t i = 1; i <= 2; ++i) {
                auto r = evec::functional(f.g.sequence(i), f.g, f.w, n, 2, path);
                EXPECT_LE(evec::norm(r), 1e-10 * evec::norm(f.g.at(i, n)));
            }
}

TEST(Functional, OnDataEqualsExtrapolation) {
    evt::Gen gen(502);
    auto model = evt::random_model<double>(gen, 3, 4);
    auto x = model.as_sequence();
    auto w = evec::Weighting<double>(gen.vec<double>(3));
    for (std::size_t k = 1; k <= 3; ++k)
        for (std::size_t n = 0; n < 5; ++n) {
            auto s = evec::extrapolate(x, model.scale(), w, n, k);
            EXPECT_EQ(evec::functional(x, model.scale(), w, n, k), s);
            EXPECT_LE(evt::rel_diff(evec::functional(x, model.scale(), w, n, k, FunctionalPath::Determinant), s), 1e-10);
        }
}

TEST(Functional, ConstantSequenceIsFixed) {
    TwoDim f;
    const V t{0.3, -7};
    auto c = VectorSequence<double>::constant(t, 60);
    for (auto path : {FunctionalPath::Solve, FunctionalPath::Determinant}) {
        auto r = evec::functional(c, f.g, f.w, 2, 2, path);
        EXPECT_LE(evec::norm(r - t), 1e-13 * evec::norm(t));
    }
}

TEST(FillTable, KmaxZeroIsInput) {
    TwoDim f;
    auto t = evec::fill_table(f.x, f.g, f.w, 0, 9, 0);
    for (std::size_t n = 0; n <= 9; ++n) EXPECT_EQ(t.cell(n, 0).value, f.x.at(n));
}

TEST(FillTable, ExactModelColumnIsConstant) {
    evt::Gen gen(503);
    auto g = evec::make_geometric_scale<double>({gen.vec<double>(4), gen.vec<double>(4), gen.vec<double>(4)},
                                                {0.8, 0.4, 0.2});
    evec::ModelSequence<double> model(gen.vec<double>(4), {1.0, 1.0, 1.0}, g);
    auto t = evec::fill_table(model.as_sequence(40), g, evec::Weighting<double>::ones(4), 0, 10, 3);
    for (std::size_t n = 0; n <= 10; ++n) {
        ASSERT_EQ(t.cell(n, 3).status, evec::CellStatus::Ok);
        EXPECT_LE(evec::norm(t.cell(n, 3).value - model.limit()), 1e-10 * (1 + evec::norm(model.limit())));
    }
}

TEST(FillTable, RefillAndThreadedFillAreBitIdentical) {
    evt::Gen gen(504);
    auto model = evt::random_model<double>(gen, 4, 4);
    auto x = model.as_sequence(30);
    auto w = evec::Weighting<double>(gen.vec<double>(4));
    auto a = evec::fill_table(x, model.scale(), w, 0, 25, 4);
    auto b = evec::fill_table(x, model.scale(), w, 0, 25, 4);
    auto c = evec::fill_table(x, model.scale(), w, 0, 25, 4, {}, 4);
    for (std::size_t n = 0; n <= 25; ++n)
        for (std::size_t k = 0; k <= 4; ++k) {
            EXPECT_EQ(a.cell(n, k).status, b.cell(n, k).status);
            EXPECT_EQ(a.cell(n, k).value, b.cell(n, k).value);
            EXPECT_EQ(a.cell(n, k).status, c.cell(n, k).status);
            EXPECT_EQ(a.cell(n, k).value, c.cell(n, k).value);
            EXPECT_EQ(a.cell(n, k).condition, c.cell(n, k).condition);
        }
}

TEST(FillTable, OutOfDataAndSingularCellsAreFlagged) {
    TwoDim f;
    auto t = evec::fill_table(f.model.as_sequence(6), f.g, f.w, 0, 5, 2);
    EXPECT_EQ(t.cell(3, 2).status, evec::CellStatus::Ok);
    EXPECT_EQ(t.cell(4, 2).status, evec::CellStatus::OutOfData);
    EXPECT_EQ(t.cell(5, 1).status, evec::CellStatus::OutOfData);
    EXPECT_EQ(t.cell(5, 0).status, evec::CellStatus::Ok);
    EXPECT_EQ(t.count(evec::CellStatus::OutOfData), 3u);

    auto dup = duplicated_scale(10);
    VectorSequence<double> x([](std::size_t m) { return V{1.0 / (m + 1), 2.0}; }, 10, 2);
    auto s = evec::fill_table(x, dup, evec::Weighting<double>::ones(2), 0, 5, 2);
    EXPECT_EQ(s.cell(0, 1).status, evec::CellStatus::Ok);
    EXPECT_EQ(s.cell(0, 2).status, evec::CellStatus::Singular);
}

TEST(FillTable, RangeErrorOnlyWithoutKZeroColumn) {
    TwoDim f;
    auto x = f.model.as_sequence(3);
    EXPECT_THROW(evec::fill_table(x, f.g, f.w, 3, 5, 1), evec::RangeError);
    EXPECT_THROW(evec::fill_table(x, f.g, f.w, 2, 1, 1), evec::RangeError);
    EXPECT_NO_THROW(evec::fill_table(x, f.g, f.w, 2, 5, 1));
}

TEST(FillTable, IllConditionedCellsMarkedUntrusted) {
    evt::Gen gen(505);
    auto g = evec::make_geometric_scale<double>({gen.vec<double>(2), gen.vec<double>(2), gen.vec<double>(2)},
                                                {0.9, 0.3, 0.05});
    evec::ModelSequence<double> model(gen.vec<double>(2), {1.0, 1.0, 1.0}, g);
    auto t = evec::fill_table(model.as_sequence(), g, evec::Weighting<double>::ones(2), 0, 12, 3);
    EXPECT_FALSE(t.cell(0, 1).untrusted);
    bool any = false;
    for (std::size_t n = 0; n <= 12; ++n)
        if (t.cell(n, 3).status == evec::CellStatus::Ok && t.cell(n, 3).untrusted) any = true;
    EXPECT_TRUE(any);
}

TEST(Psi, KOneIsOne) {
    TwoDim f;
    EXPECT_EQ(evec::psi(f.g, f.w, 4, 1), 1.0);
}

TEST(Psi, GeometricEqualsVandermonde) {
    evt::Gen gen(506);
    auto g = evec::make_geometric_scale<double>({gen.vec<double>(4), gen.vec<double>(4), gen.vec<double>(4)},
                                                {0.8, 0.4, 0.2});
    auto w = evec::Weighting<double>::ones(4);
    const double v = evt::vandermonde_oracle({0.8, 0.4, 0.2});
    for (std::size_t n = 0; n < 30; ++n) EXPECT_LE(evt::rel_diff(evec::psi(g, w, n, 3), v), 1e-12) << n;
}

TEST(Psi, PerturbedApproachesVandermonde) {
    evt::Gen gen(507);
    auto g = evec::make_perturbed_geometric_scale<double>(
        {gen.vec<double>(4), gen.vec<double>(4), gen.vec<double>(4)}, {0.8, 0.4, 0.2}, {0.3, 0.3, 0.3});
    auto w = evec::Weighting<double>::ones(4);
    EXPECT_LE(evt::rel_diff(evec::psi(g, w, 40, 3), -0.048), 0.05);
}

TEST(Psi, DegenerateNormalization) {
    auto g = evec::make_geometric_scale<double>({V{1, 0}, V{1, -1}}, {0.8, 0.4});
    EXPECT_THROW(evec::psi(g, evec::Weighting<double>::ones(2), 0, 2), evec::DegenerateNormalization);
}

// ---------------------------------------------------------------------------
// Properties on seeded random instances

namespace {

template <class T>
struct Instance {
    evec::ModelSequence<T> model;
    evec::Weighting<T> w;
    std::size_t k;
};

template <class T>
Instance<T> random_instance(evt::Gen& gen) {
    const std::size_t dim = gen.index(1, 5);
    const std::size_t p = gen.index(1, 5);
    auto model = evt::random_model<T>(gen, dim, p + gen.index(0, 1));
    auto w = evt::well_posed_weighting(gen, model.scale());
    return {model, w, gen.index(1, p)};
}

template <class T>
double cell_diff(const evec::CoordinateVector<T>& a, const evec::CoordinateVector<T>& b, const evec::CoordinateVector<T>& s) {
    return static_cast<double>(evec::norm(a - b)) / (1.0 + static_cast<double>(evec::norm(s)));
}

} // namespace

TEST(EngineProperty, AnnihilationOnRandomModels) {
    evt::Gen gen(511);
    for (int t = 0; t < 30; ++t) {
        auto inst = random_instance<cplx>(gen);
        const auto& g = inst.model.scale();
        for (std::size_t n = 0; n < 6; ++n)
            for (std::size_t i = 1; i <= inst.k; ++i) {
                auto r = evec::functional(g.sequence(i), g, inst.w, n, inst.k);
                EXPECT_LE(evec::norm(r), 1e-10 * evec::norm(g.at(i, n)));
            }
    }
}

TEST(EngineProperty, ExactReproduction) {
    evt::Gen gen(512);
    for (int t = 0; t < 30; ++t) {
        const std::size_t dim = gen.index(1, 5);
        const std::size_t k = gen.index(1, 4);
        auto model = evt::random_model<double>(gen, dim, k);
        auto w = evec::Weighting<double>(gen.vec<double>(dim));
        auto x = model.as_sequence();
        for (std::size_t n = 0; n < 8; ++n) {
            auto s = evec::extrapolate(x, model.scale(), w, n, k);
            EXPECT_LE(evec::norm(s - model.limit()), 1e-10 * evec::norm(model.limit())) << "k=" << k << " n=" << n;
        }
    }
}

TEST(EngineProperty, OracleEquivalence) {
    evt::Gen gen(513);
    for (int t = 0; t < 30; ++t) {
        auto inst = random_instance<cplx>(gen);
        auto x = inst.model.as_sequence();
        for (std::size_t n = 0; n < 6; ++n)
            for (std::size_t k = 1; k <= inst.model.scale().count(); ++k) {
                auto a = evec::functional(x, inst.model.scale(), inst.w, n, k, FunctionalPath::Solve);
                auto b = evec::functional(x, inst.model.scale(), inst.w, n, k, FunctionalPath::Determinant);
                EXPECT_LE(evt::rel_diff(a, b), 1e-8);
            }
    }
}

TEST(EngineProperty, WeightingScaleInvariance) {
    evt::Gen gen(514);
    for (int t = 0; t < 30; ++t) {
        auto inst = random_instance<cplx>(gen);
        const cplx c = std::polar(gen.uniform(0.1, 10.0), gen.uniform(0, 6.28));
        auto x = inst.model.as_sequence(20);
        auto a = evec::fill_table(x, inst.model.scale(), inst.w, 0, 8, inst.k);
        auto b = evec::fill_table(x, inst.model.scale(), inst.w.scaled(c), 0, 8, inst.k);
        for (std::size_t n = 0; n <= 8; ++n)
            for (std::size_t k = 0; k <= inst.k; ++k) {
                ASSERT_EQ(a.cell(n, k).status, b.cell(n, k).status);
                if (a.cell(n, k).status == evec::CellStatus::Ok)
                    EXPECT_LE(cell_diff(a.cell(n, k).value, b.cell(n, k).value, inst.model.limit()), 1e-12);
            }
    }
}

TEST(EngineProperty, TranslationCovariance) {
    evt::Gen gen(515);
    for (int t = 0; t < 30; ++t) {
        auto inst = random_instance<double>(gen);
        auto x = inst.model.as_sequence(20);
        auto shift = gen.vec<double>(x.dimension());
        auto xt = x.shifted(shift);
        for (std::size_t n = 0; n < 8; ++n) {
            auto a = evec::extrapolate(x, inst.model.scale(), inst.w, n, inst.k);
            auto b = evec::extrapolate(xt, inst.model.scale(), inst.w, n, inst.k);
            EXPECT_LE(cell_diff(a + shift, b, inst.model.limit() + shift), 1e-12);
        }
    }
}

TEST(EngineProperty, ScalePermutationInvariance) {
    evt::Gen gen(516);
    for (int t = 0; t < 30; ++t) {
        auto inst = random_instance<double>(gen);
        const auto& g = inst.model.scale();
        std::vector<std::size_t> order(g.count());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i + 1;
        for (std::size_t i = inst.k; i > 1; --i) std::swap(order[i - 1], order[gen.index(0, i - 1)]);
        auto gp = g.permuted(order);
        auto x = inst.model.as_sequence(20);
        for (std::size_t n = 0; n < 8; ++n) {
            auto a = evec::extrapolate(x, g, inst.w, n, inst.k);
            auto b = evec::extrapolate(x, gp, inst.w, n, inst.k);
            EXPECT_LE(cell_diff(a, b, inst.model.limit()), 1e-12);
        }
    }
}

TEST(EngineProperty, FunctionalLinearity) {
    evt::Gen gen(517);
    for (int t = 0; t < 30; ++t) {
        auto inst = random_instance<cplx>(gen);
        const auto& g = inst.model.scale();
        const std::size_t dim = g.dimension();
        std::vector<CoordinateVector<cplx>> us, vs;
        for (int m = 0; m < 20; ++m) {
            us.push_back(gen.vec<cplx>(dim));
            vs.push_back(gen.vec<cplx>(dim));
        }
        auto u = VectorSequence<cplx>::from_vectors(us);
        auto v = VectorSequence<cplx>::from_vectors(vs);
        const cplx c = gen.scalar<cplx>();
        for (std::size_t n = 0; n < 6; ++n) {
            auto fu = evec::functional(u, g, inst.w, n, inst.k);
            auto fv = evec::functional(v, g, inst.w, n, inst.k);
            auto fsum = evec::functional(u.combined(1.0, v, 1.0), g, inst.w, n, inst.k);
            auto fcu = evec::functional(u.combined(c, v, 0.0), g, inst.w, n, inst.k);
            const double scale = std::max({1.0, evec::norm(fu), evec::norm(fv)});
            EXPECT_LE(evec::norm(fsum - fu - fv) / scale, 1e-12);
            EXPECT_LE(evec::norm(fcu - c * fu) / scale, 1e-12);
        }
    }
}
