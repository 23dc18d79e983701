#include <gtest/gtest.h>

#include <random>

#include <gasketlab/verify.hpp>

using namespace gasket;

namespace {

// Root of 2z^3 - 2wz^2 + 1 = 0 near z0 by long-double Newton, independent of
// the companion-matrix solver.
std::complex<long double> newton_root(std::complex<long double> w, std::complex<long double> z) {
    for (int it = 0; it < 200; ++it) {
        const auto f = 2.0L * z * z * z - 2.0L * w * z * z + 1.0L;
        const auto d = 6.0L * z * z - 4.0L * w * z;
        z -= f / d;
    }
    return z;
}

// Winding number of the deltoid boundary R(e^it) around w.
int winding(cplx w, int samples = 4000) {
    double total = 0;
    cplx prev = eval_R(cplx(1, 0)) - w;
    for (int k = 1; k <= samples; ++k) {
        const cplx cur = eval_R(std::polar(1.0, 2 * std::numbers::pi * k / samples)) - w;
        total += std::arg(cur / prev);
        prev = cur;
    }
    return int(std::lround(total / (2 * std::numbers::pi)));
}

double boundary_distance(cplx w, int samples = 4000) {
    double d = INFINITY;
    for (int k = 0; k < samples; ++k) d = std::min(d, std::abs(eval_R(std::polar(1.0, 2 * std::numbers::pi * k / samples)) - w));
    return d;
}

cplx random_point(std::mt19937& rng, double r) {
    std::uniform_real_distribution<double> U(-r, r);
    return {U(rng), U(rng)};
}

}  // namespace

TEST(Uniformization, Examples) {
    EXPECT_EQ(eval_R(cplx(1)), cplx(1.5));
    EXPECT_EQ(eval_R(cplx(-1)), cplx(-0.5));
    EXPECT_LT(std::abs(eval_R(omega) - 1.5 * omega), 1e-15);
    EXPECT_TRUE(eval_R(SpherePoint::infinity()).is_infinite());
    EXPECT_TRUE(eval_R(SpherePoint(0.0)).is_infinite());
}

TEST(Uniformization, SingularInventory) {
    const auto c = deltoid_cusps();
    const auto t = deltoid_tangency_points();
    for (int k = 0; k < 3; ++k) {
        const cplx wk = std::pow(omega, k);
        EXPECT_LT(std::abs(eval_R(wk) - c[std::size_t(k)]), 1e-15);
        EXPECT_LT(std::abs(eval_R(-wk) - t[std::size_t(k)]), 1e-15);
        // cusps are fixed by sigma1, tangency points by sigma2
        EXPECT_LT(chordal(sigma1(SpherePoint(c[std::size_t(k)])), c[std::size_t(k)]), 1e-12);
        EXPECT_LT(chordal(sigma2(SpherePoint(t[std::size_t(k)])), t[std::size_t(k)]), 1e-12);
    }
}

TEST(Uniformization, InjectiveOutsideTheUnitDisk) {
    std::mt19937 rng(51);
    std::uniform_real_distribution<double> r(1.0, 4.0), a(0, 2 * std::numbers::pi);
    for (int k = 0; k < 20000; ++k) {
        const cplx z1 = std::polar(r(rng), a(rng)), z2 = std::polar(r(rng), a(rng));
        if (std::abs(z1 - z2) < 1e-3) continue;
        EXPECT_GT(std::abs(eval_R(z1) - eval_R(z2)), 1e-9);
    }
}

TEST(Uniformization, InscribedDiskRadius) {
    // min |R(e^it)| is attained at the tangency points and equals 1/2
    double m = INFINITY;
    for (int k = 0; k < 100000; ++k) m = std::min(m, std::abs(eval_R(std::polar(1.0, 2 * std::numbers::pi * k / 100000))));
    EXPECT_NEAR(m, d2_radius, 1e-9);
}

TEST(Inverse, Examples) {
    EXPECT_LT(std::abs(invert_R_exterior(1.5) - 1.0), 1e-9);
    const cplx z = invert_R_exterior(2.0);
    const auto want = newton_root(2.0L, 2.0L);
    EXPECT_NEAR(z.real(), double(want.real()), 1e-14);
    EXPECT_NEAR(z.imag(), 0.0, 1e-14);
    EXPECT_NEAR(z.real(), 1.8546376797, 1e-10);
    EXPECT_LT(std::abs(eval_R(z) - 2.0), 1e-12);
    EXPECT_THROW(invert_R_exterior(0.0), not_in_domain);
}

TEST(Inverse, ResidualAndModulus) {
    std::mt19937 rng(52);
    for (int k = 0; k < 5000; ++k) {
        const cplx w = random_point(rng, 6.0);
        if (!in_closed_D1(SpherePoint(w))) continue;
        const cplx z = invert_R_exterior(w);
        EXPECT_GE(std::abs(z), 1.0 - 1e-9);
        EXPECT_LT(std::abs(eval_R(z) - w), 1e-12 * std::max(1.0, std::abs(w)));
    }
}

TEST(Inverse, MembershipMatchesWindingNumber) {
    std::mt19937 rng(53);
    int inside = 0, outside = 0;
    for (int k = 0; k < 1500; ++k) {
        const cplx w = random_point(rng, 2.0);
        if (boundary_distance(w) < 1e-2) continue;
        const bool d1 = in_closed_D1(SpherePoint(w));
        EXPECT_EQ(d1, winding(w) == 0) << w;
        (d1 ? outside : inside)++;
    }
    EXPECT_GT(inside, 100);
    EXPECT_GT(outside, 100);
}

TEST(Sigma1, Examples) {
    const cplx w = eval_R(std::polar(1.0, 0.7));
    EXPECT_LT(std::abs(sigma1(SpherePoint(w)).value() - w), 1e-10);
    EXPECT_TRUE(sigma1(SpherePoint::infinity()).is_infinite());

    const auto z = newton_root(2.0L, 2.0L);
    const auto u = 1.0L / std::conj(z);
    const auto want = u + 1.0L / (2.0L * u * u);
    const cplx got = sigma1(SpherePoint(2.0)).value();
    EXPECT_NEAR(got.real(), double(want.real()), 1e-12);
    EXPECT_NEAR(got.imag(), 0.0, 1e-12);
    EXPECT_NEAR(got.real(), 2.259029334327, 1e-10);
}

TEST(Sigma1, FixesTheBoundary) { EXPECT_LT(schwarz_boundary_residual(1000), 1e-9); }

TEST(Sigma1, ImageIsConjugateReflection) {
    // sigma1(w) = R(1/conj z) where R(z) = w
    std::mt19937 rng(54);
    for (int k = 0; k < 2000; ++k) {
        const cplx w = random_point(rng, 5.0);
        if (!in_closed_D1(SpherePoint(w)) || std::abs(w) < 1e-3) continue;
        const auto z = newton_root(std::complex<long double>(w), std::complex<long double>(invert_R_exterior(w)));
        const auto u = 1.0L / std::conj(z);
        const auto want = u + 1.0L / (2.0L * u * u);
        EXPECT_LT(chordal(sigma1(SpherePoint(w)), cplx(double(want.real()), double(want.imag()))), 1e-9);
    }
}

TEST(Sigma2, Examples) {
    EXPECT_EQ(sigma2(SpherePoint(0.5)).value(), cplx(0.5));
    EXPECT_EQ(sigma2(SpherePoint(0.25)).value(), cplx(1.0));
    EXPECT_EQ(sigma2(SpherePoint(-0.5)).value(), cplx(-0.5));
    EXPECT_TRUE(sigma2(SpherePoint(0.0)).is_infinite());
    EXPECT_EQ(sigma2(SpherePoint::infinity()).value(), cplx(0));
}

TEST(Sigma2, Involution) {
    std::mt19937 rng(55);
    for (int k = 0; k < 10000; ++k) {
        const cplx w = random_point(rng, 3.0);
        if (std::abs(w) < 1e-3) continue;
        EXPECT_LT(std::abs(sigma2(sigma2(SpherePoint(w))).value() - w), 1e-12 * std::max(1.0, std::abs(w)));
    }
}

TEST(Step, Examples) {
    const auto a = schwarz_step(SpherePoint(0.01));
    ASSERT_EQ(a.kind, SchwarzStep::Kind::Mapped);
    EXPECT_EQ(a.via, 2);
    EXPECT_NEAR(std::abs(a.point.value() - 25.0), 0.0, 1e-12);

    const auto b = schwarz_step(SpherePoint(25.0));
    ASSERT_EQ(b.kind, SchwarzStep::Kind::Mapped);
    EXPECT_EQ(b.via, 1);
    EXPECT_LT(chordal(b.point, sigma1(SpherePoint(25.0))), 1e-15);

    // 1 lies inside the deltoid and outside the disk of radius 1/2
    EXPECT_NE(winding(1.0), 0);
    const auto c = schwarz_step(SpherePoint(1.0));
    EXPECT_EQ(c.kind, SchwarzStep::Kind::InTile);
    EXPECT_EQ(c.component, 0);

    for (cplx s : schwarz_singular_set()) EXPECT_THROW(schwarz_step(SpherePoint(s)), schwarz_singular);
}

TEST(Step, Symmetries) {
    std::mt19937 rng(56);
    int checked = 0;
    for (int k = 0; k < 5000; ++k) {
        const cplx w = random_point(rng, 3.0);
        SchwarzStep s, r, c;
        try {
            s = schwarz_step(SpherePoint(w));
            r = schwarz_step(SpherePoint(omega * w));
            c = schwarz_step(SpherePoint(std::conj(w)));
        } catch (const schwarz_singular&) {
            continue;
        }
        if (s.kind != SchwarzStep::Kind::Mapped || r.kind != s.kind || c.kind != s.kind) continue;
        if (s.point.is_infinite()) continue;
        ++checked;
        EXPECT_LT(chordal(r.point, omega * s.point.value()), 1e-10);
        EXPECT_LT(chordal(c.point, std::conj(s.point.value())), 1e-10);
    }
    EXPECT_GT(checked, 3000);
}

TEST(Classify, Examples) {
    const auto a = classify_schwarz(SpherePoint(10.0), 20);
    EXPECT_EQ(a.kind, SchwarzOutcome::Kind::BasinInfinity);
    EXPECT_LE(a.time, 5);

    for (int maxiter : {1, 10, 100}) {
        const auto b = classify_schwarz(SpherePoint(-0.5), maxiter);
        EXPECT_EQ(b.kind, SchwarzOutcome::Kind::Undecided);
    }

    const auto c = classify_schwarz(SpherePoint(0.01), 20);
    EXPECT_EQ(c.kind, SchwarzOutcome::Kind::BasinInfinity);

    const auto d = classify_schwarz(SpherePoint(1.0), 20);
    EXPECT_EQ(d.kind, SchwarzOutcome::Kind::TilingSet);
    EXPECT_EQ(d.time, 0);
}

TEST(Classify, EscapeThresholdOnTheAnnulus) {
    std::mt19937 rng(57);
    std::uniform_real_distribution<double> r(5.0, 10.0), a(0, 2 * std::numbers::pi);
    for (int k = 0; k < 2000; ++k) {
        const SpherePoint w(std::polar(r(rng), a(rng)));
        const auto o = classify_schwarz(w, 60);
        EXPECT_EQ(o.kind, SchwarzOutcome::Kind::BasinInfinity);
    }
}

TEST(Degrees, TwoPreimagesInD1ThreeInTheTile) {
    const auto counts = schwarz_degree_counts(20, 5);
    // 20 targets in D1 and 20 in the tile
    ASSERT_EQ(counts.size(), 40u);
    EXPECT_EQ(std::count_if(counts.begin(), counts.end(), [](const DegreeCount& d) { return d.in_D1; }), 20);
    for (const auto& d : counts) {
        EXPECT_EQ(d.solutions, d.in_D1 ? 2u : 3u) << d.target;
        EXPECT_LT(d.residual, 1e-9);
    }
}

TEST(Degrees, PreimagesMapToTarget) {
    std::mt19937 rng(58);
    for (int k = 0; k < 500; ++k) {
        const cplx t = random_point(rng, 3.0);
        for (cplx w : sigma1_preimages(t)) {
            ASSERT_TRUE(in_closed_D1(SpherePoint(w)));
            EXPECT_LT(chordal(sigma1(SpherePoint(w)), t), 1e-9);
        }
    }
}

TEST(Render, SingularPointsTouchTwoColours) {
    const auto nb = schwarz_singular_neighbourhoods(600, 2);
    ASSERT_EQ(nb.size(), 6u);
    for (std::size_t k = 0; k < 3; ++k) {
        // cusp k: the basin meets tile component k
        EXPECT_TRUE(nb[k].basin) << nb[k].point;
        EXPECT_TRUE(nb[k].components.count(int(k))) << nb[k].point;
    }
    for (std::size_t k = 3; k < 6; ++k) EXPECT_EQ(nb[k].components.size(), 2u) << nb[k].point;
}

TEST(Render, RotationSymmetric) {
    const Region r{-2, 2, -2, 2};
    const int res = 120;
    const auto img = render_schwarz(r, res, {40, 2});
    long agree = 0, total = 0;
    for (int j = 0; j < img.height; ++j)
        for (int i = 0; i < img.width; ++i) {
            const cplx z = omega * pixel_point(r, img.width, img.height, i, j);
            const int i2 = int(std::lround((z.real() - r.x0) / (r.x1 - r.x0) * img.width));
            const int j2 = int(std::lround((r.y1 - z.imag()) / (r.y1 - r.y0) * img.height));
            if (i2 < 0 || j2 < 0 || i2 >= img.width || j2 >= img.height) continue;
            ++total;
            agree += img.at(i, j) == img.at(i2, j2) ||
                     (img.at(i, j) != palette::limit && img.at(i2, j2) != palette::limit &&
                      classify_schwarz(SpherePoint(pixel_point(r, img.width, img.height, i, j)), 40).kind ==
                          classify_schwarz(SpherePoint(pixel_point(r, img.width, img.height, i2, j2)), 40).kind);
        }
    EXPECT_GT(double(agree) / double(total), 0.95);
}
