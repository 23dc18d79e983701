#pragma once

// The acceptance checks, shared by the CLI `verify` command, the acceptance
// binary and the tests. Each criterion is a list of named checks with a
// human-readable detail line.

#include <chrono>
#include <functional>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "affine_model.hpp"
#include "antirational.hpp"
#include "boundary_conjugacy.hpp"
#include "packing.hpp"
#include "reflection_group.hpp"
#include "schwarz.hpp"
#include "triangulation.hpp"

namespace gasket {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    double seconds = 0;

    bool pass() const {
        return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
};

namespace detail {

template <class... Args>
std::string fmt(const Args&... args) {
    std::ostringstream os;
    os << std::setprecision(6);
    (os << ... << args);
    return os.str();
}

inline double param_distance(const GenCircle& a, const GenCircle& b) {
    if (const auto* ka = std::get_if<Circle>(&a)) {
        const auto* kb = std::get_if<Circle>(&b);
        return kb ? std::max(std::abs(ka->center - kb->center), std::abs(ka->radius - kb->radius)) : INFINITY;
    }
    const auto* lb = std::get_if<Line>(&b);
    if (!lb) return INFINITY;
    const auto& la = std::get<Line>(a);
    return std::min(std::max(std::abs(la.normal - lb->normal), std::abs(la.offset - lb->offset)),
                    std::max(std::abs(la.normal + lb->normal), std::abs(la.offset + lb->offset)));
}

/// Largest parameter error after matching every expected circle to its
/// nearest computed one; infinite when the matching is not a bijection.
inline double match_circles(const std::vector<GenCircle>& got, const std::vector<GenCircle>& want) {
    if (got.size() != want.size()) return INFINITY;
    std::set<std::size_t> used;
    double worst = 0;
    for (const auto& w : want) {
        std::size_t best = got.size();
        double d = INFINITY;
        for (std::size_t k = 0; k < got.size(); ++k)
            if (!used.count(k) && param_distance(got[k], w) < d) {
                d = param_distance(got[k], w);
                best = k;
            }
        if (best == got.size()) return INFINITY;
        used.insert(best);
        worst = std::max(worst, d);
    }
    return worst;
}

/// a + b w with rational a, b and w a primitive cube root of unity.
struct Eisenstein {
    Fraction a, b;

    friend Eisenstein operator+(const Eisenstein& x, const Eisenstein& y) { return {x.a + y.a, x.b + y.b}; }
    friend Eisenstein operator*(const Eisenstein& x, const Eisenstein& y) {
        // w^2 = -1 - w
        return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b};
    }
    Eisenstein conj() const { return {a - b, -b}; }
    Fraction norm() const { return a * a - a * b + b * b; }
    friend Eisenstein operator/(const Eisenstein& x, const Eisenstein& y) {
        const Eisenstein t = x * y.conj();
        const Fraction n = y.norm();
        return {t.a / n, t.b / n};
    }
    friend bool operator==(const Eisenstein& x, const Eisenstein& y) { return x.a == y.a && x.b == y.b; }
};

/// g(z) = 3 conj(z)^2 / (2 conj(z)^3 + 1) in exact arithmetic.
inline Eisenstein exact_g(const Eisenstein& z) {
    const Eisenstein u = z.conj();
    const Eisenstein num = Eisenstein{Fraction(3), Fraction(0)} * u * u;
    const Eisenstein den = Eisenstein{Fraction(2), Fraction(0)} * u * u * u + Eisenstein{Fraction(1), Fraction(0)};
    return num / den;
}

inline double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

// ---------------------------------------------------------------- conjugacy

struct ExactIdentityReport {
    long checked = 0;
    long identity_failures = 0;     // box(m(x)) != tau(box(x))
    long bitwalk_failures = 0;      // box_dyadic disagrees with the Farey table
    long inverse_failures = 0;      // questionmark(box(x)) != x
    double seconds = 0;
};

/// The functional equation box(m(x)) = tau(box(x)) at every dyadic of level
/// at most n, in exact rationals, with box values from the Farey table; the
/// table is cross-checked against the independent binary-digit walk, and the
/// Stern-Brocot inverse is checked to recover every dyadic.
inline ExactIdentityReport exact_identity_check(int n) {
    const auto t0 = std::chrono::steady_clock::now();
    ExactIdentityReport r;
    const FareyLevel f = farey_level(n);
    const std::uint64_t size = std::uint64_t(1) << n;
    for (std::uint64_t k = 0; k <= size; ++k) {
        const Dyadic x{k, n};
        const Dyadic y = m_minus2(x);
        const std::size_t j = std::size_t(y.k << (n - y.n));
        if (!(f.fraction(j) == tau(f.fraction(std::size_t(k))))) ++r.identity_failures;
        const auto walk = box_dyadic<CheckedInt>(x);
        if (walk.num().value() != f.p[k] || walk.den().value() != f.q[k]) ++r.bitwalk_failures;
        const Dyadic back = questionmark(walk);
        const Dyadic want = x.reduced();
        if (back.k != want.k || back.n != want.n) ++r.inverse_failures;
        ++r.checked;
    }
    r.seconds = detail::elapsed(t0);
    return r;
}

inline CriterionResult criterion_exact_conjugacy(int level = 20) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult c{1, "exact conjugacy box(m(x)) = tau(box(x)) at level " + std::to_string(level), {}, 0};
    const auto r = exact_identity_check(level);
    const long expected = (1L << level) + 1;
    c.checks.push_back({"identity", r.identity_failures == 0 && r.checked == expected,
                        detail::fmt(r.checked, " dyadics, ", r.identity_failures, " failures")});
    c.checks.push_back({"bit walk agrees with Farey table", r.bitwalk_failures == 0,
                        detail::fmt(r.bitwalk_failures, " mismatches")});
    c.checks.push_back({"questionmark inverts box", r.inverse_failures == 0,
                        detail::fmt(r.inverse_failures, " mismatches")});
    c.checks.push_back({"runtime below 30 s", r.seconds < 30.0, detail::fmt(r.seconds, " s")});
    c.seconds = detail::elapsed(t0);
    return c;
}

inline CriterionResult criterion_farey_structure(int max_level = 16, int pair_level = 7) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult c{2, "Farey unimodularity, gap formula, Ford tangency", {}, 0};
    long unimodular = 0, gap = 0, ford = 0, pairs = 0, equivalence = 0;
    for (int n = 1; n <= max_level; ++n) {
        const auto f = farey_level(n);
        for (std::size_t k = 0; k + 1 < f.size(); ++k) {
            const BigInt det = BigInt(f.q[k]) * f.p[k + 1] - BigInt(f.p[k]) * f.q[k + 1];
            if (det != 1) ++unimodular;
            const Fraction left = f.fraction(k), right = f.fraction(k + 1);
            if (!(right - left == Fraction(BigInt(1), BigInt(f.q[k]) * f.q[k + 1]))) ++gap;
            const auto a = ford_circle(left), b = ford_circle(right);
            if (!ford_tangent(a, b) || !ford_touch_exact(a, b)) ++ford;
        }
    }
    // geometric tangency <=> Farey neighbours, over all pairs of one level
    const auto f = farey_level(pair_level);
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j) {
            const auto a = ford_circle(f.fraction(i)), b = ford_circle(f.fraction(j));
            const std::int64_t det = f.q[i] * f.p[j] - f.p[i] * f.q[j];
            const bool neighbours = det == 1 || det == -1;
            if (ford_touch_exact(a, b) != neighbours || ford_tangent(a, b) != neighbours) ++equivalence;
            ++pairs;
        }
    c.checks.push_back({"qr - ps = 1 at levels <= " + std::to_string(max_level), unimodular == 0,
                        detail::fmt(unimodular, " failures")});
    c.checks.push_back({"gap 1/(qs)", gap == 0, detail::fmt(gap, " failures")});
    c.checks.push_back({"consecutive Ford circles tangent (exact)", ford == 0, detail::fmt(ford, " failures")});
    c.checks.push_back({"tangency iff neighbours, level " + std::to_string(pair_level) + " all pairs", equivalence == 0,
                        detail::fmt(pairs, " pairs, ", equivalence, " failures")});
    c.seconds = detail::elapsed(t0);
    return c;
}

struct DistortionRow {
    int n = 0;
    double t = 0, rho = 0;
    Fraction adjacent, within_two, lower_generation;
};

inline std::vector<DistortionRow> distortion_table(int max_level = 16, int min_level = 1) {
    std::vector<DistortionRow> rows;
    for (int n = min_level; n <= max_level; ++n) {
        const auto st = interval_ratio_stats(n);
        rows.push_back({n, std::ldexp(1.0, -n), scalewise_distortion(n), st.adjacent.ratio, st.within_two.ratio,
                        st.lower_generation.ratio});
    }
    return rows;
}

inline std::string distortion_csv(const std::vector<DistortionRow>& rows) {
    std::ostringstream os;
    os << std::setprecision(10);
    os << "n,t,rho,rho/n,adjacent max ratio\n";
    for (const auto& r : rows) os << r.n << ',' << r.t << ',' << r.rho << ',' << r.rho / r.n << ',' << r.adjacent << '\n';
    return os.str();
}

inline CriterionResult criterion_distortion(int max_level = 16) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult c{3, "distortion shape: adjacent ratio <= n, rho(2^-n)/n <= 10", {}, 0};
    const auto rows = distortion_table(max_level);
    bool ratio_ok = true, rho_ok = true;
    double worst_rho = 0;
    std::string first_bad;
    for (const auto& r : rows) {
        if (r.adjacent > Fraction(r.n)) {
            ratio_ok = false;
            first_bad = "n=" + std::to_string(r.n);
        }
        if (r.n >= 4) {
            worst_rho = std::max(worst_rho, r.rho / r.n);
            if (!(r.rho / r.n <= 10.0)) rho_ok = false;
        }
    }
    c.checks.push_back({"adjacent max ratio <= n for n <= " + std::to_string(max_level), ratio_ok,
                        ratio_ok ? detail::fmt("max at n=", max_level, " is ", rows.back().adjacent.str()) : first_bad});
    c.checks.push_back({"rho/n <= 10 for n = 4.." + std::to_string(max_level), rho_ok,
                        detail::fmt("max rho/n = ", worst_rho)});
    c.seconds = detail::elapsed(t0);
    return c;
}

inline double circle_conjugacy_error(int samples = 1024) {
    double err = 0;
    for (int k = 0; k < samples; ++k) {
        const double y = double(k) / samples;
        const cplx lhs = turn(circle_conjugacy_h(m_minus2(y)));
        const cplx rhs = rho2(turn(circle_conjugacy_h(y)));
        err = std::max(err, std::abs(lhs - rhs));
    }
    return err;
}

inline CriterionResult criterion_circle_conjugacy() {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult c{4, "circle conjugacy h o g2 = rho2 o h", {}, 0};
    const double err = circle_conjugacy_error(1024);
    c.checks.push_back({"1024 dyadic angles, error < 1e-8", err < 1e-8, detail::fmt("max error ", err)});
    double fix = 0;
    for (int k = 0; k < 3; ++k) fix = std::max(fix, std::abs(turn(circle_conjugacy_h(k / 3.0)) - turn(k / 3.0)));
    c.checks.push_back({"cube roots of unity fixed to 1e-12", fix < 1e-12, detail::fmt("max error ", fix)});
    c.seconds = detail::elapsed(t0);
    return c;
}

// ------------------------------------------------------------------ packing

inline CriterionResult criterion_packing() {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult c{5, "packings and dual circles", {}, 0};
    const auto p = solve_packing(tetrahedron(), NormalizationSpec::strip());
    std::vector<GenCircle> circles, duals;
    for (int v = 0; v < 4; ++v) circles.push_back(p.circle(v));
    for (int f = 0; f < 4; ++f) duals.push_back(p.dual(f));
    const double ec = detail::match_circles(circles, {Line{cplx(0, 1), 0.0}, Line{cplx(0, 1), 2.0},
                                                      Circle{cplx(0, 1), 1.0}, Circle{cplx(2, 1), 1.0}});
    const double ed = detail::match_circles(duals, {Line{cplx(1, 0), 0.0}, Line{cplx(1, 0), 2.0},
                                                    Circle{cplx(1, 2), 1.0}, Circle{cplx(1, 0), 1.0}});
    c.checks.push_back({"strip tetrahedron circles to 1e-10", ec < 1e-10, detail::fmt("max error ", ec)});
    c.checks.push_back({"strip tetrahedron duals to 1e-10", ed < 1e-10, detail::fmt("max error ", ed)});
    double orth = 0;
    for (std::size_t f = 0; f < 4; ++f)
        for (int v : p.tri.faces()[f]) orth = std::max(orth, std::abs(inversive_product(p.dual_disks[f], p.disks[v])));
    c.checks.push_back({"dual orthogonality < 1e-9", orth < 1e-9, detail::fmt("max residual ", orth)});
    for (const auto& [name, t] : {std::pair{"octahedron", octahedron()},
                                  std::pair{"subdivided tetrahedron", barycentric_subdivision(tetrahedron())}}) {
        bool ok = false;
        std::string d;
        try {
            const auto q = solve_packing(t);
            const auto rep = verify_packing(q, 1e-9);
            ok = rep.ok();
            d = detail::fmt("max residual ", rep.max_residual);
        } catch (const std::exception& e) {
            d = e.what();
        }
        c.checks.push_back({std::string(name) + " passes verify_packing at 1e-9", ok, d});
    }
    c.seconds = detail::elapsed(t0);
    return c;
}

inline CriterionResult criterion_symmetries() {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult c{6, "packing symmetry groups", {}, 0};
    const auto tet = mobius_symmetries(solve_packing(tetrahedron()));
    const auto tet_graph = graph_automorphisms(tetrahedron()).size();
    c.checks.push_back({"tetrahedron: 24 total, 12 orientation preserving",
                        tet.order() == 24 && tet.orientation_preserving() == 12 && tet_graph == 24,
                        detail::fmt(tet.order(), " total, ", tet.orientation_preserving(),
                                    " preserving; graph automorphisms ", tet_graph)});
    const auto dbl = mobius_symmetries(solve_packing(double_tetrahedron()));
    const auto dbl_graph = graph_automorphisms(double_tetrahedron()).size();
    c.checks.push_back({"double tetrahedron strictly fewer",
                        dbl.order() < 24 && dbl.orientation_preserving() < 12 && dbl.order() == dbl_graph,
                        detail::fmt(dbl.order(), " total, ", dbl.orientation_preserving(),
                                    " preserving; graph automorphisms ", dbl_graph)});
    c.seconds = detail::elapsed(t0);
    return c;
}

inline CriterionResult criterion_group_orbit() {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult c{7, "orbit disks and interstice shrinking", {}, 0};
    const auto p = solve_packing(tetrahedron(), NormalizationSpec::strip());
    const auto disks = orbit_disks(p, 3);
    const auto counts = generation_counts(disks);
    const std::vector<std::size_t> want{4, 4, 12, 36};
    c.checks.push_back({"generation counts 4, 4, 12, 36", counts == want,
                        detail::fmt(counts.size() > 0 ? counts[0] : 0, ", ", counts.size() > 1 ? counts[1] : 0, ", ",
                                    counts.size() > 2 ? counts[2] : 0, ", ", counts.size() > 3 ? counts[3] : 0)});
    double best = INFINITY;
    for (const auto& d : disks)
        if (d.generation == 1) best = std::min(best, detail::param_distance(d.circle(), Circle{cplx(1, 0.25), 0.25}));
    c.checks.push_back({"generation-1 disk Circle{1+i/4, 1/4} to 1e-12", best < 1e-12, detail::fmt("error ", best)});
    std::vector<double> diam;
    for (int n = 1; n <= 6; ++n) diam.push_back(interstice_max_diameter(p, n));
    bool dec = true;
    for (std::size_t k = 1; k < diam.size(); ++k) dec = dec && diam[k] < diam[k - 1];
    std::ostringstream d;
    d << std::setprecision(4);
    for (double x : diam) d << x << ' ';
    c.checks.push_back({"interstice diameter strictly decreasing, n = 1..6", dec, d.str()});
    c.seconds = detail::elapsed(t0);
    return c;
}

// -------------------------------------------------------------------- julia

/// Fraction of sample points z (pixel lattice of [-2,2]^2) whose basin
/// outcome at w z is the rotated outcome at z.
inline double julia_rotation_agreement(int res = 200, int maxiter = 60) {
    const Region region{-2, 2, -2, 2};
    const auto [w, h] = raster_size(region, res);
    // rotation by w permutes the critical points: 0 fixed, 1 -> w -> w^2 -> 1
    const std::array<int, 4> rot{0, 2, 3, 1};
    long agree = 0, total = 0;
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) {
            const cplx z = pixel_point(region, w, h, i, j);
            const auto a = classify_basin(SpherePoint(z), maxiter);
            const auto b = classify_basin(SpherePoint(omega * z), maxiter);
            const bool same = a.attracted() == b.attracted() && (!a.attracted() || rot[std::size_t(a.target)] == b.target);
            agree += same;
            ++total;
        }
    return double(agree) / double(total);
}

inline CriterionResult criterion_julia() {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult c{8, "Julia set structure of g", {}, 0};
    using detail::Eisenstein;
    const std::array<Eisenstein, 4> crit{Eisenstein{Fraction(0), Fraction(0)}, Eisenstein{Fraction(1), Fraction(0)},
                                         Eisenstein{Fraction(0), Fraction(1)}, Eisenstein{Fraction(-1), Fraction(-1)}};
    bool exact = true;
    for (const auto& z : crit) exact = exact && detail::exact_g(z) == z;
    double fl = 0;
    for (cplx z : critical_points()) fl = std::max(fl, std::abs(eval_g(SpherePoint(z)).value() - z));
    const auto at_inf = eval_g(SpherePoint::infinity());
    c.checks.push_back({"g fixes 0, 1, w, w^2 (exact in Q(w))", exact && fl < 1e-15,
                        detail::fmt("exact ", exact ? "yes" : "no", ", float error ", fl)});
    c.checks.push_back({"g(inf) = 0", at_inf.is_finite() && at_inf.value() == cplx(0), ""});

    // independent oracle: fixed points of g on the real axis solve
    // 3x^2 = x(2x^3 + 1), i.e. 2x^3 - 3x + 1 = (x - 1)(2x^2 + 2x - 1)
    const double r = (std::sqrt(3.0) - 1) / 2, s = -(std::sqrt(3.0) + 1) / 2;
    double jf = 0;
    const auto jfp = julia_fixed_points();
    for (double x : {r, s})
        for (int k = 0; k < 3; ++k) {
            const cplx want = x * std::polar(1.0, 2 * std::numbers::pi * k / 3);
            double best = INFINITY;
            for (cplx z : jfp) best = std::min(best, std::abs(z - want));
            jf = std::max({jf, best, std::abs(eval_g(SpherePoint(want)).value() - want)});
        }
    c.checks.push_back({"six Julia fixed points to 1e-10", jfp.size() == 6 && jf < 1e-10, detail::fmt("max error ", jf)});

    std::string touch;
    bool touch_ok = true;
    for (cplx z : jfp) {
        const auto b = touching_invariant_basins(z, 1e-3, 64);
        touch_ok = touch_ok && b.size() == 2;
        touch += std::to_string(b.size()) + " ";
    }
    c.checks.push_back({"each Julia fixed point touches exactly 2 basins (64 probes)", touch_ok, touch});

    const auto fp = second_iterate_fixed_points();
    std::vector<cplx> known(critical_points().begin(), critical_points().end());
    known.insert(known.end(), jfp.begin(), jfp.end());
    double inv = 0;
    for (cplx k : known) {
        double best = INFINITY;
        for (cplx z : fp) best = std::min(best, std::abs(z - k));
        inv = std::max(inv, best);
    }
    double g2res = 0;
    for (cplx z : fp) g2res = std::max(g2res, std::abs(eval_g2(SpherePoint(z)).value() - z));
    c.checks.push_back({"g o g has exactly the 10 fixed points", fp.size() == 10 && inv < 1e-8 && g2res < 1e-8,
                        detail::fmt(fp.size(), " roots, inventory error ", inv, ", residual ", g2res)});
    const double agree = julia_rotation_agreement();
    c.checks.push_back({"render is w-symmetric (agreement >= 0.99)", agree >= 0.99, detail::fmt("agreement ", agree)});
    c.seconds = detail::elapsed(t0);
    return c;
}

// ------------------------------------------------------------------- affine

/// Max |G p - G q| / |p - q| deviation from 2 over backward-orbit Julia pairs.
inline double affine_expansion_error(int pairs = 1000, int depth = 12, unsigned seed = 0) {
    std::mt19937 rng(seed);
    const auto& pieces = affine_model();
    double err = 0;
    for (int k = 0; k < pairs; ++k) {
        const auto jp = backward_julia_pair(rng, depth, pieces);
        const auto& pc = pieces[std::size_t(jp.piece)];
        const double ratio = distance(pc(jp.p), pc(jp.q)) / distance(jp.p, jp.q);
        err = std::max(err, std::abs(ratio - 2.0));
        // the step map itself must pick a similarity piece for Julia points
        const auto s = step(jp.p, pieces);
        if (s.kind != AffineStep::Kind::Mapped || !pieces[std::size_t(s.piece)].similarity) return INFINITY;
    }
    return err;
}

/// Max disagreement, measured on the folded tetrahedron, between the images
/// of points on edges shared by two pieces.
inline double affine_edge_consistency(int samples = 1000, unsigned seed = 0) {
    const auto& pieces = affine_model();
    std::vector<std::tuple<int, int, NetPoint, NetPoint>> shared;
    for (std::size_t a = 0; a < pieces.size(); ++a)
        for (std::size_t b = a + 1; b < pieces.size(); ++b) {
            if (pieces[a].face != pieces[b].face) continue;
            for (int u = 0; u < 3; ++u)
                for (int v = u + 1; v < 3; ++v) {
                    const NetPoint p = pieces[a].source[std::size_t(u)], q = pieces[a].source[std::size_t(v)];
                    if (pieces[b].contains(p) && pieces[b].contains(q) && pieces[b].contains(0.5 * (p + q)))
                        shared.emplace_back(int(a), int(b), p, q);
                }
        }
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0;
    for (int k = 0; k < samples; ++k) {
        const auto& [a, b, p, q] = shared[std::size_t(k) % shared.size()];
        const NetPoint x = p + U(rng) * (q - p);
        worst = std::max(worst, tetra_distance(pieces[std::size_t(a)](x), pieces[std::size_t(b)](x)));
    }
    return worst;
}

inline CriterionResult criterion_affine(unsigned seed = 0) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult c{9, "piecewise affine model", {}, 0};
    const auto& pieces = affine_model();
    double fac = 0;
    int sims = 0;
    for (const auto& p : pieces)
        if (p.similarity) {
            ++sims;
            fac = std::max(fac, std::abs(p.factor - 2.0));
        }
    const double pair_err = affine_expansion_error(1000, 12, seed);
    c.checks.push_back({"similarity factor 2 +- 1e-9", sims == 12 && fac < 1e-9 && pair_err < 1e-9,
                        detail::fmt(sims, " similarity pieces, factor error ", fac, ", Julia pair error ", pair_err)});
    const auto dim = dimension_estimate(24, {256, 512, 1024, 2048});
    c.checks.push_back({"box-counting dimension 1.585 +- 0.05", std::abs(dim.slope - std::log(3.0) / std::log(2.0)) <= 0.05,
                        detail::fmt("slope ", dim.slope)});
    const double edge = affine_edge_consistency(1000, seed);
    c.checks.push_back({"edge identification < 1e-12 on 1000 points", edge < 1e-12, detail::fmt("max error ", edge)});
    c.seconds = detail::elapsed(t0);
    return c;
}

// ------------------------------------------------------------------ schwarz

inline double schwarz_boundary_residual(int samples = 1000) {
    double e = 0;
    for (int k = 0; k < samples; ++k) {
        // offset keeps the samples off the cusps at theta = 2 pi j / 3
        const double th = 2 * std::numbers::pi * (k + 0.5) / samples;
        const cplx w = eval_R(std::polar(1.0, th));
        e = std::max(e, std::abs(sigma1(SpherePoint(w)).value() - w));
    }
    return e;
}

struct DegreeCount {
    cplx target;
    bool in_D1 = false;
    std::size_t solutions = 0;
    double residual = 0;
};

inline std::vector<DegreeCount> schwarz_degree_counts(int targets = 20, unsigned seed = 0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-3.0, 3.0), small(-1.2, 1.2);
    std::vector<DegreeCount> out;
    int in_d1 = 0, in_tile = 0;
    while (in_d1 < targets || in_tile < targets) {
        const bool want_tile = in_tile < in_d1;
        const cplx t = want_tile ? cplx(small(rng), small(rng)) : cplx(U(rng), U(rng));
        const bool d1 = in_closed_D1(SpherePoint(t));
        const bool tile = !d1 && std::abs(t) > d2_radius;
        if (!(d1 || tile)) continue;
        if (d1 && in_d1 >= targets) continue;
        if (tile && in_tile >= targets) continue;
        DegreeCount d{t, d1, 0, 0};
        for (cplx w : sigma1_preimages(t)) {
            ++d.solutions;
            d.residual = std::max(d.residual, std::abs(sigma1(SpherePoint(w)).value() - t));
        }
        (d1 ? in_d1 : in_tile)++;
        out.push_back(d);
    }
    return out;
}

struct SingularNeighbourhood {
    cplx point;
    bool basin = false;
    std::set<int> components;
};

/// Outcomes on the pixels around each singular point in the render of
/// [-2,2]^2 at the given resolution: the window is the (2r+1)^2 block of
/// lattice points nearest to the point.
inline std::vector<SingularNeighbourhood> schwarz_singular_neighbourhoods(int res = 600, int radius = 2,
                                                                          int maxiter = 60) {
    const Region region{-2, 2, -2, 2};
    const auto [w, h] = raster_size(region, res);
    std::vector<SingularNeighbourhood> out;
    for (cplx s : schwarz_singular_set()) {
        SingularNeighbourhood n{s, false, {}};
        const int i0 = int(std::lround((s.real() - region.x0) / (region.x1 - region.x0) * w));
        const int j0 = int(std::lround((region.y1 - s.imag()) / (region.y1 - region.y0) * h));
        for (int dj = -radius; dj <= radius; ++dj)
            for (int di = -radius; di <= radius; ++di) {
                const auto o = classify_schwarz(SpherePoint(pixel_point(region, w, h, i0 + di, j0 + dj)), maxiter);
                if (o.kind == SchwarzOutcome::Kind::BasinInfinity) n.basin = true;
                if (o.kind == SchwarzOutcome::Kind::TilingSet) n.components.insert(o.component);
            }
        out.push_back(n);
    }
    return out;
}

inline CriterionResult criterion_schwarz(unsigned seed = 0) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult c{10, "Schwarz reflection dynamics", {}, 0};
    const double br = schwarz_boundary_residual(1000);
    c.checks.push_back({"sigma1 fixes the deltoid, residual < 1e-9", br < 1e-9, detail::fmt("max residual ", br)});
    double fixres = 0;
    for (int k = 0; k < 3; ++k) {
        const cplx wk = std::polar(1.0, 2 * std::numbers::pi * k / 3);
        const cplx cusp = eval_R(wk), tang = eval_R(-wk);
        fixres = std::max({fixres, std::abs(cusp - 1.5 * wk), std::abs(tang + 0.5 * wk)});
        // F on the boundary curves: sigma1 at the cusp, sigma2 at the tangency point
        fixres = std::max(fixres, std::abs(sigma1(SpherePoint(cusp)).value() - cusp));
        fixres = std::max(fixres, std::abs(sigma2(SpherePoint(tang)).value() - tang));
        fixres = std::max(fixres, std::abs(sigma1(SpherePoint(tang)).value() - tang));
    }
    c.checks.push_back({"cusps and tangency points fixed to 1e-12", fixres < 1e-12, detail::fmt("max error ", fixres)});
    const auto deg = schwarz_degree_counts(20, seed);
    bool deg_ok = true;
    double dres = 0;
    for (const auto& d : deg) {
        deg_ok = deg_ok && d.solutions == (d.in_D1 ? 2u : 3u);
        dres = std::max(dres, d.residual);
    }
    c.checks.push_back({"degree counts 2 (targets in D1) and 3 (targets in tile)", deg_ok && dres < 1e-9,
                        detail::fmt(deg.size(), " targets, residual ", dres)});
    // touching structure: the basin meets U_k at cusp k; U_i and U_j meet at
    // the tangency point between their cusps
    const auto nb = schwarz_singular_neighbourhoods(600, 2);
    bool touch = true;
    std::string d;
    for (std::size_t k = 0; k < nb.size(); ++k) {
        const auto& n = nb[k];
        bool ok;
        if (k < 3) ok = n.basin && n.components.count(int(k));
        else ok = n.components.size() >= 2;
        touch = touch && ok;
        d += detail::fmt("(", n.point.real(), ",", n.point.imag(), "):", n.basin ? "B" : "", n.components.size(), " ");
    }
    c.checks.push_back({"six singular points are limit-set adjacent in the 600^2 render", touch, d});
    c.seconds = detail::elapsed(t0);
    return c;
}

// -------------------------------------------------------------- determinism

struct ReferenceRender {
    std::string name;
    std::function<RasterImage(int threads)> render;
};

inline std::vector<ReferenceRender> reference_renders(int res = 64) {
    return {
        {"gasket", [res](int th) {
             static const auto p = solve_packing(tetrahedron(), NormalizationSpec::strip());
             return render_limit_set(p, Region{-1, 3, -1, 3}, res, {50, th});
         }},
        {"julia", [res](int th) { return render_julia(Region{-2, 2, -2, 2}, res, {50, max_basin_eps, th}); }},
        {"affine", [res](int th) { return render_affine(res, {20, th}); }},
        {"schwarz", [res](int th) { return render_schwarz(Region{-2, 2, -2, 2}, res, {60, th}); }},
    };
}

inline CriterionResult criterion_determinism() {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult c{11, "deterministic reference renders", {}, 0};
    for (const auto& r : reference_renders(64)) {
        const auto h1 = image_hash(r.render(4));
        const auto h2 = image_hash(r.render(4));
        const auto h3 = image_hash(r.render(1));
        std::ostringstream os;
        os << std::hex << h1;
        c.checks.push_back({r.name + " 64x64 hash stable", h1 == h2 && h1 == h3, os.str()});
    }
    c.seconds = detail::elapsed(t0);
    return c;
}

/// The eleven acceptance criteria in order; entry k runs criterion k + 1.
inline std::vector<std::function<CriterionResult()>> acceptance_criteria(unsigned seed = 0, int level = 20) {
    return {
        [level] { return criterion_exact_conjugacy(level); },
        [] { return criterion_farey_structure(16); },
        [] { return criterion_distortion(16); },
        criterion_circle_conjugacy,
        criterion_packing,
        criterion_symmetries,
        criterion_group_orbit,
        criterion_julia,
        [seed] { return criterion_affine(seed); },
        [seed] { return criterion_schwarz(seed); },
        criterion_determinism,
    };
}

// -------------------------------------------------------------- CSV tables

inline std::string julia_inventory_csv() {
    std::ostringstream os;
    os << std::setprecision(15);
    os << "re,im,kind,g2_residual,g2_derivative\n";
    const auto crit = critical_points();
    for (cplx z : second_iterate_fixed_points()) {
        const bool critical = std::any_of(crit.begin(), crit.end(), [&](cplx c) { return std::abs(c - z) < 1e-8; });
        os << z.real() << ',' << z.imag() << ',' << (critical ? "critical" : "repelling") << ','
           << std::abs(eval_g2(SpherePoint(z)).value() - z) << ',' << second_iterate_derivative(z) << '\n';
    }
    return os.str();
}

inline std::string julia_touching_csv() {
    std::ostringstream os;
    os << std::setprecision(15);
    os << "re,im,invariant_basins,count\n";
    for (cplx z : julia_fixed_points()) {
        const auto b = touching_invariant_basins(z);
        os << z.real() << ',' << z.imag() << ',';
        std::string sep;
        for (int k : b) {
            os << sep << k;
            sep = ";";
        }
        os << ',' << b.size() << '\n';
    }
    return os.str();
}

inline std::string affine_expansion_csv() {
    std::ostringstream os;
    os << std::setprecision(15);
    os << "piece,face,target_face,similarity,sigma_max,sigma_min,determinant\n";
    const auto& pieces = affine_model();
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const auto sv = pieces[k].singular_values();
        os << k << ',' << pieces[k].face << ',' << pieces[k].target_face << ',' << pieces[k].similarity << ',' << sv[0]
           << ',' << sv[1] << ',' << pieces[k].determinant() << '\n';
    }
    return os.str();
}

inline std::string affine_dimension_csv(int maxiter = 24) {
    const auto d = dimension_estimate(maxiter, {256, 512, 1024, 2048});
    std::ostringstream os;
    os << std::setprecision(15);
    os << "resolution,boxes\n";
    for (std::size_t k = 0; k < d.resolutions.size(); ++k) os << d.resolutions[k] << ',' << d.counts[k] << '\n';
    os << "slope," << d.slope << '\n';
    return os.str();
}

inline std::string schwarz_tables_csv(unsigned seed = 0) {
    std::ostringstream os;
    os << std::setprecision(15);
    os << "check,value\n";
    os << "boundary_fixing_max_residual," << schwarz_boundary_residual(1000) << "\n\n";
    os << "singular_re,singular_im,kind,basin_adjacent,components\n";
    const auto nb = schwarz_singular_neighbourhoods(600, 2);
    for (std::size_t k = 0; k < nb.size(); ++k) {
        os << nb[k].point.real() << ',' << nb[k].point.imag() << ',' << (k < 3 ? "cusp" : "tangency") << ','
           << nb[k].basin << ',';
        std::string sep;
        for (int c : nb[k].components) {
            os << sep << c;
            sep = ";";
        }
        os << '\n';
    }
    os << "\ntarget_re,target_im,region,preimages,max_residual\n";
    for (const auto& d : schwarz_degree_counts(20, seed))
        os << d.target.real() << ',' << d.target.imag() << ',' << (d.in_D1 ? "D1" : "tile") << ',' << d.solutions << ','
           << d.residual << '\n';
    return os.str();
}

inline std::string group_tables_csv() {
    const auto p = solve_packing(tetrahedron(), NormalizationSpec::strip());
    std::ostringstream os;
    os << std::setprecision(15);
    os << "generation,disks\n";
    const auto counts = generation_counts(orbit_disks(p, 3));
    for (std::size_t g = 0; g < counts.size(); ++g) os << g << ',' << counts[g] << '\n';
    os << "\nlevel,interstice_max_diameter\n";
    for (int n = 1; n <= 6; ++n) os << n << ',' << interstice_max_diameter(p, n) << '\n';
    return os.str();
}

/// Criterion ids grouped by the CLI verify suites.
inline std::vector<int> suite_criteria(const std::string& suite) {
    if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    if (suite == "conjugacy") return {1, 2, 3, 4};
    if (suite == "packing") return {5, 6};
    if (suite == "group") return {7};
    if (suite == "julia" || suite == "julia-structure") return {8};
    if (suite == "affine") return {9};
    if (suite == "schwarz") return {10};
    throw std::invalid_argument("unknown verify suite: " + suite);
}

inline std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass() ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.title << " (" << std::fixed
       << std::setprecision(1) << r.seconds << " s)\n";
    for (const auto& c : r.checks) os << "    [" << (c.pass ? "ok" : "FAILED") << "] " << c.name << ": " << c.detail << '\n';
    return os.str();
}

}  // namespace gasket
