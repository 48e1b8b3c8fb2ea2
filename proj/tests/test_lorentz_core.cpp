#include "generators.hpp"

#include <gtest/gtest.h>

using namespace ldsq;
using namespace ldsq::testing;

namespace {
Vec<Q> q3(int a, int b, int c) { return {Q(a), Q(b), Q(c)}; }
} // namespace

TEST(LorentzInner, Examples) {
    EXPECT_EQ(lorentz_inner(q3(1, 1, 0), q3(1, 1, 0)), Q(0));
    EXPECT_EQ(lorentz_inner(q3(1, 0, 0), q3(1, 0, 0)), Q(-1));
    EXPECT_EQ(lorentz_inner(q3(2, 1, 0), q3(2, 1, 0)), Q(-3));
    EXPECT_THROW(lorentz_inner(q3(1, 0, 0), Vec<Q>{Q(1), Q(0)}), error);
}

TEST(LorentzInner, SymmetricAndBilinear) {
    Rng rng(1);
    for (int t = 0; t < 50; ++t) {
        const auto x = random_vector(rng, 5), y = random_vector(rng, 5), z = random_vector(rng, 5);
        const Q a = random_rational(rng);
        EXPECT_EQ(lorentz_inner(x, y), lorentz_inner(y, x));
        Vec<Q> ax_z(5);
        for (int i = 0; i < 5; ++i) ax_z[i] = a * x[i] + z[i];
        EXPECT_EQ(lorentz_inner(ax_z, y), a * lorentz_inner(x, y) + lorentz_inner(z, y));
    }
}

TEST(VectorLikeness, Examples) {
    EXPECT_EQ(vector_likeness(q3(1, 1, 0)), VectorClass::LightLike);
    EXPECT_EQ(vector_likeness(q3(0, 1, 0)), VectorClass::SpaceLike);
    EXPECT_EQ(vector_likeness(q3(2, 1, 0)), VectorClass::TimeLike);
    try {
        vector_likeness(q3(0, 0, 0));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroVector);
        EXPECT_NE(std::string(e.what()).find("zero vector"), std::string::npos);
    }
}

TEST(VectorLikeness, ScaleInvariant) {
    Rng rng(2);
    for (int t = 0; t < 100; ++t) {
        auto v = random_vector(rng, 4);
        if (is_zero_vector<Q>(v)) continue;
        Q c = random_rational(rng);
        if (c == 0) c = -3;
        Vec<Q> w = v;
        for (auto& x : w) x *= c;
        EXPECT_EQ(vector_likeness(v), vector_likeness(w));
    }
}

TEST(GramMatrix, Examples) {
    EXPECT_EQ(gram_matrix(SubspaceBasis<Q>(2, {q3(1, 1, 0)})), (Matrix<Q>{{Q(0)}}));
    EXPECT_EQ(gram_matrix(SubspaceBasis<Q>(2, {q3(0, 1, 0), q3(0, 0, 1)})), Matrix<Q>::identity(2));
    EXPECT_EQ(gram_matrix(SubspaceBasis<Q>(2, {q3(2, 1, 0), q3(1, 2, 0)})), (Matrix<Q>{{Q(-3), Q(0)}, {Q(0), Q(3)}}));
}

TEST(SubspaceBasis, RejectsBadInput) {
    try {
        SubspaceBasis<Q>(2, {});
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyBasis);
    }
    EXPECT_THROW(SubspaceBasis<Q>(2, std::vector<Vec<Q>>{q3(1, 1, 0), q3(2, 2, 0)}), error);
    EXPECT_THROW(SubspaceBasis<Q>(2, std::vector<Vec<Q>>{Vec<Q>{Q(1), Q(1)}}), error);
}

TEST(SubspaceLikeness, Examples) {
    EXPECT_EQ(subspace_likeness(SubspaceBasis<Q>(2, {q3(1, 1, 0)})), Likeness::LightLike);
    EXPECT_EQ(subspace_likeness(SubspaceBasis<Q>(2, {q3(0, 1, 0), q3(0, 0, 1)})), Likeness::SpaceLike);
    EXPECT_EQ(subspace_likeness(SubspaceBasis<Q>(2, {q3(2, 1, 0), q3(1, 2, 0)})), Likeness::TimeLike);
    // a light-like plane whose Gram matrix has a zero diagonal
    EXPECT_EQ(subspace_likeness(SubspaceBasis<Q>(2, {q3(1, 1, 0), q3(1, 1, 1)})), Likeness::LightLike);
    // two null vectors spanning a time-like plane
    EXPECT_EQ(subspace_likeness(SubspaceBasis<Q>(2, {q3(1, 1, 0), q3(1, -1, 0)})), Likeness::TimeLike);
}

TEST(SubspaceLikeness, FloatPathFlagsBorderline) {
    const auto v = subspace_likeness_detail(SubspaceBasis<double>(2, {Vec<double>{1.0, 1.0 + 1e-12, 0.0}}));
    EXPECT_EQ(v.likeness, Likeness::LightLike);
    EXPECT_TRUE(v.borderline);
    const auto w = subspace_likeness_detail(SubspaceBasis<double>(2, {Vec<double>{1.0, 2.0, 0.0}}));
    EXPECT_EQ(w.likeness, Likeness::SpaceLike);
    EXPECT_FALSE(w.borderline);
}

TEST(SubspaceLikeness, BasisChangeInvariant) {
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = uniform_int(rng, 1, 5);
        const std::size_t m = uniform_int(rng, 1, int(n) + 1);
        const auto vs = random_subspace(rng, n, m, m == n + 1 ? Kind::Spanning : static_cast<Kind>(uniform_int(rng, 0, 3)));
        auto mixed = random_subspace(rng, n, m, Kind::Spanning); // reuse as random coefficients
        Matrix<Q> c(m, m);
        do {
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b) c(a, b) = Q(uniform_int(rng, -3, 3));
        } while (determinant(c) == 0);
        for (std::size_t a = 0; a < m; ++a) {
            mixed[a].assign(n + 1, Q(0));
            for (std::size_t b = 0; b < m; ++b)
                for (std::size_t d = 0; d <= n; ++d) mixed[a][d] += c(a, b) * vs[b][d];
        }
        EXPECT_EQ(subspace_likeness(SubspaceBasis<Q>(n, vs)), subspace_likeness(SubspaceBasis<Q>(n, mixed)));
    }
}

TEST(SubspaceLikeness, GeneratorKindsLandWhereIntended) {
    Rng rng(4);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = uniform_int(rng, 2, 6);
        const std::size_t j = uniform_int(rng, 1, int(n) - 1);
        EXPECT_EQ(subspace_likeness(SubspaceBasis<Q>(n, random_subspace(rng, n, j, Kind::TimeLike))), Likeness::TimeLike);
        EXPECT_EQ(subspace_likeness(SubspaceBasis<Q>(n, random_subspace(rng, n, j, Kind::SpaceLike))), Likeness::SpaceLike);
        EXPECT_EQ(subspace_likeness(SubspaceBasis<Q>(n, random_subspace(rng, n, j, Kind::LightLike))), Likeness::LightLike);
    }
}

TEST(HyperplaneLikeness, Examples) {
    EXPECT_EQ(hyperplane_likeness(Vec<Q>{Q(1), Q(0)}), Likeness::LightLike);
    EXPECT_EQ(hyperplane_likeness(Vec<Q>{Q(0), Q(0), Q(0)}), Likeness::SpaceLike);
    const Vec<Q> a{Q(3, 5), Q(4, 5), Q(1)};
    EXPECT_EQ(hyperplane_likeness(a), Likeness::TimeLike);
    EXPECT_EQ(subspace_likeness(hyperplane_basis<Q>(a)), Likeness::TimeLike);
}

TEST(HyperplaneLikeness, MatchesInertiaOnRandomAlpha) {
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = uniform_int(rng, 1, 6);
        const Vec<Q> a = t % 3 == 0 ? rational_unit_vector(rng, n) : random_vector(rng, n, 3);
        EXPECT_EQ(hyperplane_likeness(a), subspace_likeness(hyperplane_basis<Q>(a)));
    }
}

TEST(GraphExtension, KeepsLikeness) {
    Rng rng(6);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = uniform_int(rng, 2, 6), k = uniform_int(rng, 1, int(n) - 1);
        const Vec<Q> a = t % 2 ? rational_unit_vector(rng, k) : random_vector(rng, k, 3);
        const auto ext = graph_extension_vectors<Q>(a, n);
        ASSERT_EQ(ext.size(), n);
        const std::vector<Vec<Q>> head(ext.begin(), ext.begin() + static_cast<std::ptrdiff_t>(k));
        EXPECT_EQ(subspace_likeness(SubspaceBasis<Q>(n, head)), subspace_likeness(SubspaceBasis<Q>(n, ext)));
    }
    EXPECT_THROW(graph_extension_vectors<Q>(Vec<Q>{Q(1), Q(1)}, 2), error);
}

TEST(RankExact, Examples) {
    EXPECT_EQ(rank_exact(Matrix<Q>::identity(2)), 2u);
    EXPECT_EQ(rank_exact(Matrix<Q>(3, 4)), 0u);
    EXPECT_EQ(rank_exact(Matrix<Q>{{Q(1), Q(2)}, {Q(2), Q(4)}, {Q(3), Q(6)}}), 1u);
    EXPECT_EQ(rank_exact(Matrix<Q>{{Q(1, 3), Q(2, 7)}, {Q(2, 3), Q(4, 7)}}), 1u);
    EXPECT_EQ(numeric_rank(Matrix<double>{{1.0, 2.0}, {2.0, 4.0 + 1e-13}}), 1u);
}

TEST(LorentzTransforms, DefiningProperty) {
    for (std::size_t n = 1; n <= 6; ++n)
        for (std::uint64_t seed = 0; seed < 10; ++seed) EXPECT_LT(lorentz_defect(random_lorentz_transform(n, seed)), 1e-10);
    EXPECT_EQ(random_lorentz_transform(3, 9), random_lorentz_transform(3, 9));
    EXPECT_EQ(boost_matrix(2, 1, 0.0), Matrix<double>::identity(3));
    const auto g = boost_matrix(1, 1, std::log(2.0));
    EXPECT_NEAR(g(0, 0), 1.25, 1e-15);
    EXPECT_NEAR(g(0, 1), 0.75, 1e-15);
    EXPECT_NEAR(g(1, 0), 0.75, 1e-15);
    EXPECT_NEAR(g(1, 1), 1.25, 1e-15);
}

TEST(LorentzTransforms, RationalTransformsAreExact) {
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = uniform_int(rng, 1, 5);
        const Matrix<Q> g = rational_lorentz_transform(rng, n);
        const Matrix<Q> j = minkowski_metric<Q>(n);
        EXPECT_EQ(g.transpose() * j * g, j);
    }
}

TEST(LorentzTransforms, PreserveLikeness) {
    Rng rng(8);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = uniform_int(rng, 1, 5);
        const std::size_t m = uniform_int(rng, 1, int(n));
        const auto vs = random_subspace(rng, n, m, static_cast<Kind>(uniform_int(rng, 0, 3)));
        const Matrix<Q> g = rational_lorentz_transform(rng, n);
        std::vector<Vec<Q>> moved;
        for (const auto& v : vs) moved.push_back(g * v);
        EXPECT_EQ(subspace_likeness(SubspaceBasis<Q>(n, vs)), subspace_likeness(SubspaceBasis<Q>(n, moved)));
    }
}
