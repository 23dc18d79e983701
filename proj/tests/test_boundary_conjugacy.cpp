#include <gtest/gtest.h>

#include <random>

#include <gasketlab/boundary_conjugacy.hpp>

using namespace gasket;

namespace {

Fraction fr(long p, long q) { return Fraction(BigInt(p), BigInt(q)); }

// Minkowski's question mark through the continued fraction [0; a1, a2, ...]:
// ?(x) = 2 sum_k (-1)^(k+1) 2^-(a1 + ... + ak).
std::vector<BigInt> partial_quotients(Fraction x) {
    std::vector<BigInt> a;
    BigInt p = x.num(), q = x.den();
    p %= q;
    while (p != 0) {
        a.push_back(q / p);
        const BigInt r = q % p;
        q = p;
        p = r;
    }
    return a;
}

// Level of the dyadic ?(x): one less than the sum of the partial quotients.
BigInt dyadic_level(Fraction x) {
    BigInt s = -1;
    for (const auto& v : partial_quotients(x)) s += v;
    return s;
}

Fraction questionmark_by_continued_fraction(Fraction x) {
    if (x == Fraction(1)) return x;
    const auto a = partial_quotients(x);
    Fraction sum(0);
    BigInt partial = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        partial += a[k];
        const Fraction term(BigInt(2), BigInt(1) << unsigned(partial));
        sum = k % 2 == 0 ? sum + term : sum - term;
    }
    return sum;
}

Fraction random_rational(std::mt19937& rng) {
    std::uniform_int_distribution<long> dq(1, 5000);
    const long q = dq(rng);
    std::uniform_int_distribution<long> dp(0, q);
    return fr(dp(rng), q);
}

bool adjacent_in(const FareyLevel& f, const Fraction& a, const Fraction& b) {
    for (std::size_t k = 0; k + 1 < f.size(); ++k)
        if (f.fraction(k) == a && f.fraction(k + 1) == b) return true;
    return false;
}

}  // namespace

TEST(Box, DyadicExamples) {
    EXPECT_EQ(box_dyadic(Dyadic{1, 1}), fr(1, 2));
    EXPECT_EQ(box_dyadic(Dyadic{1, 2}), fr(1, 3));
    EXPECT_EQ(box_dyadic(Dyadic{3, 2}), fr(2, 3));
    EXPECT_EQ(box_dyadic(Dyadic{3, 3}), fr(2, 5));
    EXPECT_EQ(box_dyadic(Dyadic{0, 0}), fr(0, 1));
    EXPECT_EQ(box_dyadic(Dyadic{1, 0}), fr(1, 1));
}

TEST(Box, RejectsBadInput) {
    EXPECT_THROW(box_dyadic(Dyadic{5, 2}), not_in_image);
    EXPECT_THROW(box_dyadic(Dyadic{1, 63}), level_too_large);
    EXPECT_THROW(questionmark(fr(3, 2)), not_in_image);
    EXPECT_THROW(box_real(1.5), not_in_image);
}

TEST(Questionmark, Examples) {
    auto same = [](Dyadic a, Dyadic b) { return a.k == b.k && a.n == b.n; };
    EXPECT_TRUE(same(questionmark(fr(1, 3)), Dyadic{1, 2}));
    EXPECT_TRUE(same(questionmark(fr(2, 5)), Dyadic{3, 3}));
    EXPECT_TRUE(same(questionmark(fr(1, 2)), Dyadic{1, 1}));
}

TEST(Questionmark, AgreesWithContinuedFractionFormula) {
    std::mt19937 rng(31);
    for (int k = 0; k < 3000; ++k) {
        const Fraction x = random_rational(rng);
        if (dyadic_level(x) > 62) {
            EXPECT_THROW(questionmark(x), level_too_large) << x;
            continue;
        }
        EXPECT_EQ(questionmark(x).fraction(), questionmark_by_continued_fraction(x)) << x;
    }
}

TEST(Questionmark, InvertsBoxAtEveryDyadicOfLevel14) {
    const int n = 14;
    for (std::uint64_t k = 0; k <= (1u << n); ++k) {
        const Dyadic x{k, n};
        const Dyadic back = questionmark(box_dyadic(x));
        const Dyadic want = x.reduced();
        ASSERT_EQ(back.k, want.k);
        ASSERT_EQ(back.n, want.n);
    }
}

TEST(Box, InvertsQuestionmarkOnRandomRationals) {
    std::mt19937 rng(32);
    for (int k = 0; k < 3000; ++k) {
        const Fraction x = random_rational(rng);
        if (dyadic_level(x) > 62) continue;
        EXPECT_EQ(box_dyadic(questionmark(x)), x);
    }
}

TEST(Box, CheckedAndBigIntegersAgree) {
    for (std::uint64_t k = 0; k <= 4096; ++k) {
        const auto a = box_dyadic<CheckedInt>(Dyadic{k, 12});
        const auto b = box_dyadic<BigInt>(Dyadic{k, 12});
        EXPECT_EQ(BigInt(a.num().value()), b.num());
        EXPECT_EQ(BigInt(a.den().value()), b.den());
    }
}

TEST(Box, FunctionalEquationExactToLevel14) {
    // independent of the Farey table used by the acceptance check
    for (int n = 0; n <= 14; ++n)
        for (std::uint64_t k = 0; k <= (std::uint64_t(1) << n); ++k) {
            const Dyadic x{k, n};
            ASSERT_EQ(box_dyadic(m_minus2(x)), tau(box_dyadic(x))) << k << "/2^" << n;
        }
}

TEST(Box, RealArgumentExamples) {
    EXPECT_NEAR(box_real(1.0 / 3), (3 - std::sqrt(5.0)) / 2, 1e-12);
    EXPECT_NEAR(box_real(2.0 / 3), (std::sqrt(5.0) - 1) / 2, 1e-12);
    EXPECT_EQ(box_real(0.25), 1.0 / 3);
    EXPECT_EQ(box_real(0.0), 0.0);
    EXPECT_EQ(box_real(1.0), 1.0);
}

TEST(Box, RealFixedPointsOfTheMaps) {
    // 1/3 is fixed by m_-2; its image is fixed by tau
    EXPECT_NEAR(m_minus2(1.0 / 3), 1.0 / 3, 1e-15);
    EXPECT_EQ(m_minus2(fr(1, 3)), fr(1, 3));
    const double b = box_real(1.0 / 3);
    EXPECT_NEAR(tau(b), b, 1e-12);
    EXPECT_NEAR(b * b - 3 * b + 1, 0.0, 1e-12);
}

TEST(Box, RealAgreesWithExactAtDyadics) {
    std::mt19937 rng(33);
    for (int k = 0; k < 2000; ++k) {
        const int n = 1 + int(rng() % 30);
        const Dyadic x{rng() % ((std::uint64_t(1) << n) + 1), n};
        EXPECT_NEAR(box_real(x.to_double()), box_dyadic(x).to_double(), 1e-15);
    }
}

TEST(Box, DigitStream) {
    int bit = 0;
    // 0.010101... = 1/3
    const double v = box_real([&bit] { return (bit++ % 2); }, 1e-12);
    EXPECT_NEAR(v, (3 - std::sqrt(5.0)) / 2, 1e-12);
    // all zeros crawls down the Farey sequence 1/n, far slower than the budget
    EXPECT_THROW(box_real([] { return 0; }, 1e-12, 64), precision_unreachable);
}

TEST(Maps, Examples) {
    const auto t = theta({fr(1, 3)});
    ASSERT_FALSE(t.infinite);
    EXPECT_EQ(t.value, fr(-1, 1));
    EXPECT_TRUE(theta({fr(1, 2)}).infinite);
    EXPECT_EQ(theta({fr(-2, 3)}).value, fr(2, 3));
    EXPECT_EQ(tau(fr(1, 3)), fr(1, 2));
    EXPECT_EQ(tau(fr(2, 5)), fr(1, 3));
    const Dyadic m = m_minus2(Dyadic{3, 3});
    EXPECT_EQ(m.fraction(), fr(1, 4));
    EXPECT_EQ(m_minus2(fr(3, 8)), fr(1, 4));
    EXPECT_EQ(m_minus2(3.0 / 8), 0.25);
}

TEST(Maps, DyadicAndFractionFormsAgree) {
    for (std::uint64_t k = 0; k <= 1024; ++k) {
        const Dyadic x{k, 10};
        EXPECT_EQ(m_minus2(x).fraction(), m_minus2(x.fraction())) << k;
        EXPECT_EQ(m_minus2(x).to_double(), m_minus2(x.to_double())) << k;
    }
}

TEST(Farey, LevelTwo) {
    const auto f = farey_level(2);
    ASSERT_EQ(f.size(), 5u);
    const std::vector<Fraction> want{fr(0, 1), fr(1, 3), fr(1, 2), fr(2, 3), fr(1, 1)};
    for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(f.fraction(k), want[k]);
}

TEST(Farey, LevelThreeContainsTwoFifths) {
    const auto f = farey_level(3);
    EXPECT_TRUE(adjacent_in(f, fr(1, 3), fr(2, 5)));
    EXPECT_TRUE(adjacent_in(f, fr(2, 5), fr(1, 2)));
}

TEST(Farey, LevelEntriesAreBoxValues) {
    const auto f = farey_level(10);
    for (std::size_t k = 0; k < f.size(); ++k) EXPECT_EQ(f.fraction(k), box_dyadic(f.dyadic(k)));
}

TEST(Farey, UnimodularAndGapFormula) {
    for (int n = 1; n <= 12; ++n) {
        const auto f = farey_level(n);
        for (std::size_t k = 0; k + 1 < f.size(); ++k) {
            EXPECT_EQ(f.q[k] * f.p[k + 1] - f.p[k] * f.q[k + 1], 1);
            EXPECT_EQ(f.fraction(k + 1) - f.fraction(k), Fraction(BigInt(1), BigInt(f.q[k] * f.q[k + 1])));
        }
    }
    EXPECT_THROW(farey_level(max_farey_level + 1), level_too_large);
}

TEST(Farey, Generations) {
    EXPECT_EQ(farey_generation(0, 3), 0);
    EXPECT_EQ(farey_generation(8, 3), 0);
    EXPECT_EQ(farey_generation(4, 3), 1);
    EXPECT_EQ(farey_generation(2, 3), 2);
    EXPECT_EQ(farey_generation(3, 3), 3);
}

TEST(Ford, CircleOfOneHalf) {
    const auto c = ford_circle(fr(1, 2));
    EXPECT_EQ(c.cx, fr(1, 2));
    EXPECT_EQ(c.cy, fr(1, 8));
    EXPECT_EQ(c.radius, fr(1, 8));
}

TEST(Ford, TangencyExamples) {
    EXPECT_TRUE(ford_tangent(ford_circle(fr(0, 1)), ford_circle(fr(1, 2))));
    EXPECT_FALSE(ford_tangent(ford_circle(fr(1, 3)), ford_circle(fr(2, 3))));
    EXPECT_TRUE(ford_touch_exact(ford_circle(fr(0, 1)), ford_circle(fr(1, 2))));
    EXPECT_FALSE(ford_touch_exact(ford_circle(fr(1, 3)), ford_circle(fr(2, 3))));
}

TEST(Ford, TangencyIffNeighboursAtLevelSix) {
    const auto f = farey_level(6);
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j) {
            const auto a = ford_circle(f.fraction(i)), b = ford_circle(f.fraction(j));
            // squared centre distance against squared radius sum, exact
            const Fraction dx = a.cx - b.cx, dy = a.cy - b.cy, rs = a.radius + b.radius;
            const bool touch = dx * dx + dy * dy == rs * rs;
            const bool neighbours = j == i + 1;
            EXPECT_EQ(touch, ford_touch_exact(a, b));
            EXPECT_EQ(ford_tangent(a, b), touch);
            if (neighbours) {
                EXPECT_TRUE(touch);
            }
        }
}

TEST(Intervals, LevelThreeAdjacentMaximum) {
    const auto st = interval_ratio_stats(3);
    EXPECT_EQ(st.adjacent.ratio, fr(3, 1));
    const auto f = farey_level(3);
    EXPECT_EQ(f.fraction(st.adjacent.i), fr(0, 1));
    EXPECT_EQ(f.fraction(st.adjacent.i + 1), fr(1, 4));
    EXPECT_EQ(f.fraction(st.adjacent.j), fr(1, 4));
    EXPECT_EQ(f.fraction(st.adjacent.j + 1), fr(1, 3));
}

TEST(Intervals, RatiosAgreeWithBruteForce) {
    for (int n = 1; n <= 9; ++n) {
        const auto f = farey_level(n);
        Fraction adj(0), within(0);
        for (std::size_t i = 0; i + 1 < f.size(); ++i)
            for (std::size_t j = i + 1; j + 1 < f.size() && j <= i + 3; ++j) {
                const Fraction a = f.fraction(i + 1) - f.fraction(i), b = f.fraction(j + 1) - f.fraction(j);
                const Fraction r = a > b ? a / b : b / a;
                if (j == i + 1 && r > adj) adj = r;
                if (r > within) within = r;
            }
        const auto st = interval_ratio_stats(n);
        EXPECT_EQ(st.adjacent.ratio, adj) << n;
        EXPECT_EQ(st.within_two.ratio, within) << n;
    }
}

TEST(Intervals, AdjacentRatioGrowsLinearly) {
    for (int n = 1; n <= 16; ++n) EXPECT_LE(interval_ratio_stats(n).adjacent.ratio, Fraction(n)) << n;
}

TEST(Intervals, LowerGenerationComparability) {
    for (int n = 2; n <= 16; ++n) EXPECT_LE(interval_ratio_stats(n).lower_generation.ratio, Fraction(4)) << n;
}

TEST(Distortion, LogarithmicShape) {
    for (int n = 4; n <= 12; ++n) {
        const double rho = scalewise_distortion(n);
        EXPECT_GE(rho, 1.0);
        EXPECT_LE(rho / n, 10.0) << n;
    }
    EXPECT_THROW(scalewise_distortion(18), level_too_large);
}

TEST(CircleConjugacy, FixesCubeRootsOfUnity) {
    EXPECT_EQ(circle_conjugacy_h(0.0), 0.0);
    EXPECT_NEAR(circle_conjugacy_h(1.0 / 3), 1.0 / 3, 1e-12);
    EXPECT_NEAR(circle_conjugacy_h(2.0 / 3), 2.0 / 3, 1e-12);
}

TEST(CircleConjugacy, ConjugatesTheTwoMaps) {
    for (int k = 0; k < 1024; ++k) {
        const double y = k / 1024.0;
        const cplx lhs = turn(circle_conjugacy_h(m_minus2(y)));
        const cplx rhs = rho2(turn(circle_conjugacy_h(y)));
        EXPECT_LT(std::abs(lhs - rhs), 1e-8) << y;
    }
}

TEST(CircleConjugacy, ModelMapIsAngleDoublingReversed) {
    for (int k = 0; k < 100; ++k) {
        const double y = (k + 0.5) / 100;
        EXPECT_LT(std::abs(g2_on_circle(turn(y)) - turn(m_minus2(y))), 1e-12);
    }
}

TEST(CircleConjugacy, Equivariance) {
    std::mt19937 rng(34);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 2000; ++k) {
        const double y = u(rng);
        const cplx hy = turn(circle_conjugacy_h(y));
        EXPECT_LT(std::abs(turn(circle_conjugacy_h(std::fmod(y + 1.0 / 3, 1.0))) - omega * hy), 1e-9);
        EXPECT_LT(std::abs(turn(circle_conjugacy_h(1.0 - y)) - std::conj(hy)), 1e-9);
    }
}

TEST(CircleConjugacy, IdealTriangleReflection) {
    // rho2 fixes the circle |z| = 1 setwise and the three ideal vertices
    std::mt19937 rng(35);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) EXPECT_NEAR(std::abs(rho2(turn(u(rng)))), 1.0, 1e-12);
    for (int k = 0; k < 3; ++k) {
        const Circle c = ideal_triangle_circle(k);
        EXPECT_NEAR(c.radius, std::sqrt(3.0), 1e-15);
        // orthogonal to the unit circle
        EXPECT_NEAR(std::norm(c.center), 1 + c.radius * c.radius, 1e-12);
    }
}
