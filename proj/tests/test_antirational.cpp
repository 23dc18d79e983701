#include <gasketlab/antirational.hpp>
#include <gasketlab/verify.hpp>

#include "test_support.hpp"

using namespace gasket;
using gasket::testing::random_point;

namespace {

// f(z) = 3z^2 / (2z^3 + 1) written out; g(z) = f(conj z).
cplx hand_g(cplx z) {
    const cplx u = std::conj(z);
    return 3.0 * u * u / (2.0 * u * u * u + 1.0);
}

}  // namespace

TEST(Eval, FixedCriticalPoints) {
    EXPECT_EQ(eval_g(0.0).value(), cplx(0));
    EXPECT_NEAR(std::abs(eval_g(1.0).value() - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(eval_g(omega).value() - omega), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(eval_g(omega * omega).value() - omega * omega), 0.0, 1e-15);
}

TEST(Eval, ExactFixedPointsInEisensteinRationals) {
    using detail::Eisenstein;
    const Eisenstein zero{Fraction(0), Fraction(0)}, one{Fraction(1), Fraction(0)};
    const Eisenstein w{Fraction(0), Fraction(1)}, w2{Fraction(-1), Fraction(-1)};
    EXPECT_TRUE(w * w == w2);
    EXPECT_TRUE(w * w2 == one);
    for (const auto& z : {zero, one, w, w2}) EXPECT_TRUE(detail::exact_g(z) == z);
    // a non-fixed point for contrast: g(2) = 12/17
    const Eisenstein two{Fraction(2), Fraction(0)};
    EXPECT_TRUE(detail::exact_g(two) == (Eisenstein{Fraction(12, 17), Fraction(0)}));
}

TEST(Eval, InfinityMapsToZero) {
    const auto z = eval_g(SpherePoint::infinity());
    ASSERT_TRUE(z.is_finite());
    EXPECT_EQ(z.value(), cplx(0));
}

TEST(Eval, PolesMapToInfinity) {
    for (const auto& p : g_preimages(SpherePoint::infinity())) {
        const auto img = eval_g(p);
        EXPECT_TRUE(img.is_infinite() || std::abs(img.value()) > 1e12);
    }
}

TEST(Eval, MatchesDirectFormula) {
    std::mt19937 rng(21);
    for (int k = 0; k < 10000; ++k) {
        const cplx z = random_point(rng, 3.0);
        EXPECT_LT(chordal(eval_g(z), hand_g(z)), 1e-13);
    }
    EXPECT_LT(chordal(eval_g(1e8), hand_g(1e8)), 1e-13);
}

TEST(Eval, RotationAndConjugationEquivariance) {
    std::mt19937 rng(22);
    for (int k = 0; k < 10000; ++k) {
        const cplx z = random_point(rng, 3.0);
        const auto gz = eval_g(z);
        if (!gz.is_finite() || std::abs(gz.value()) > 1e6) continue;
        EXPECT_LT(chordal(eval_g(omega * z), omega * gz.value()), 1e-12);
        EXPECT_LT(chordal(eval_g(std::conj(z)), std::conj(gz.value())), 1e-12);
    }
}

TEST(Critical, DerivativeVanishes) {
    // f'(z) = 6z(1 - z^3) / (2z^3 + 1)^2
    for (cplx c : critical_points()) EXPECT_LT(std::abs(6.0 * c * (1.0 - c * c * c)), 1e-14);
}

TEST(Critical, LocalDegreeTwo) {
    const auto data = fixed_critical_data();
    ASSERT_EQ(data.size(), 4u);
    for (const auto& d : data) EXPECT_EQ(d.local_degree, 2);
}

TEST(Critical, ContractionOnCaptureDisks) { EXPECT_TRUE(contraction_verified()); }

TEST(Basin, Examples) {
    EXPECT_NEAR(std::abs(eval_g(0.1).value() - 0.03 / 1.002), 0.0, 1e-16);
    const auto a = classify_basin(0.1, 50);
    EXPECT_TRUE(a.attracted());
    EXPECT_EQ(a.target, 0);

    const double r = (std::sqrt(3.0) - 1) / 2;
    for (int maxiter : {1, 10, 100, 10000}) EXPECT_FALSE(classify_basin(r, maxiter).attracted());

    EXPECT_NEAR(eval_g(10.0).value().real(), 300.0 / 2001.0, 1e-15);
    const auto b = classify_basin(10.0, 50);
    EXPECT_TRUE(b.attracted());
    EXPECT_EQ(b.target, 0);

    EXPECT_EQ(classify_basin(cplx(1.01, 0), 50).target, 1);
}

TEST(Basin, EpsOutsideVerifiedRangeRejected) {
    EXPECT_THROW(classify_basin(0.1, 10, 0.1), std::invalid_argument);
    EXPECT_THROW(classify_basin(0.1, 10, 0.0), std::invalid_argument);
}

TEST(Basin, RefinementNeverFlipsATarget) {
    const Region r{-2, 2, -2, 2};
    for (int j = 0; j < 200; ++j)
        for (int i = 0; i < 200; ++i) {
            const SpherePoint z(pixel_point(r, 200, 200, i, j));
            const auto lo = classify_basin(z, 30), hi = classify_basin(z, 60);
            if (lo.attracted()) {
                ASSERT_TRUE(hi.attracted());
                EXPECT_EQ(lo.target, hi.target);
            }
        }
}

TEST(JuliaFixed, SixPointsOnRealRootsAndTheirRotations) {
    const auto pts = julia_fixed_points();
    ASSERT_EQ(pts.size(), 6u);
    const double r = (std::sqrt(3.0) - 1) / 2;
    EXPECT_NEAR(2 * r * r * r - 3 * r + 1, 0.0, 1e-15);
    EXPECT_NEAR(std::abs(eval_g(r).value() - r), 0.0, 1e-14);
    for (cplx z : pts) EXPECT_LT(std::abs(eval_g(z).value() - z), 1e-14);
}

TEST(JuliaFixed, InventoryOfTheSecondIterate) {
    const auto roots = second_iterate_fixed_points();
    ASSERT_EQ(roots.size(), 10u);
    std::vector<cplx> known(critical_points().begin(), critical_points().end());
    for (cplx z : julia_fixed_points()) known.push_back(z);
    std::vector<bool> used(10, false);
    for (cplx k : known) {
        std::size_t best = 10;
        double d = INFINITY;
        for (std::size_t i = 0; i < 10; ++i)
            if (!used[i] && std::abs(roots[i] - k) < d) {
                d = std::abs(roots[i] - k);
                best = i;
            }
        ASSERT_LT(best, 10u);
        used[best] = true;
        EXPECT_LT(d, 1e-8);
    }
}

TEST(JuliaFixed, Repelling) {
    for (cplx z : julia_fixed_points()) EXPECT_GT(second_iterate_derivative(z), 1.0);
    for (cplx c : critical_points()) EXPECT_LT(second_iterate_derivative(c), 1e-3);
}

TEST(JuliaFixed, EachTouchesTwoInvariantBasins) {
    std::map<int, int> per_basin;
    std::set<std::pair<int, int>> pairs;
    for (cplx z : julia_fixed_points()) {
        const auto b = touching_invariant_basins(z);
        ASSERT_EQ(b.size(), 2u);
        for (int k : b) ++per_basin[k];
        pairs.insert({*b.begin(), *b.rbegin()});
    }
    // every basin touches three others, each pair at exactly one point
    for (int k = 0; k < 4; ++k) EXPECT_EQ(per_basin[k], 3);
    EXPECT_EQ(pairs.size(), 6u);
}

TEST(JuliaFixed, RawNeighbourhoodsSeeAllFourTargets) {
    // preimage components of the other two basins accumulate at each point
    for (cplx z : julia_fixed_points()) EXPECT_EQ(touching_basins(z).size(), 4u);
}

TEST(Preimages, MapBackToTarget) {
    std::mt19937 rng(23);
    for (int k = 0; k < 1000; ++k) {
        const cplx w = random_point(rng, 3.0);
        for (const auto& p : g_preimages(w)) EXPECT_LT(chordal(eval_g(p), w), 1e-10);
    }
}

TEST(Render, PixelAtZeroIsBasinZero) {
    const auto img = render_julia({-2, 2, -2, 2}, 64, {50, max_basin_eps, 2});
    ASSERT_EQ(img.width, 64);
    ASSERT_EQ(img.height, 64);
    EXPECT_EQ(img.at(32, 32), palette::shade(palette::categorical[0], 0, 50));
}

TEST(Render, RotationSymmetric) { EXPECT_GE(julia_rotation_agreement(120, 60), 0.99); }

TEST(Coding, PieceCodesNeverRepeat) {
    const JuliaPieces pieces(2.5, 512, 150);
    EXPECT_GT(pieces.labelled_fraction(), 0.99);
    const auto rep = julia_piece_coding(pieces, 300, 8, 0);
    EXPECT_GT(rep.decided_pairs, 500);
    EXPECT_EQ(rep.repeats, 0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) {
                EXPECT_GT(rep.transitions[std::size_t(i)][std::size_t(j)], 0) << i << "->" << j;
            }
}
