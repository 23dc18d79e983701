#pragma once

// Anti-rational maps z -> P(conj z) / Q(conj z), specialised to the
// critically fixed cubic g(z) = 3 conj(z)^2 / (2 conj(z)^3 + 1).
//
// g o g = f o f for the holomorphic f(w) = 3w^2 / (2w^3 + 1), since f has
// real coefficients.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"
#include "polynomial.hpp"
#include "raster.hpp"

namespace gasket {

class verification_failed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AntiRationalMap {
public:
    AntiRationalMap(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        dn_ = poly_degree(num_);
        dd_ = poly_degree(den_);
        num_.resize(dn_ + 1);
        den_.resize(dd_ + 1);
    }

    std::size_t degree() const { return std::max(dn_, dd_); }
    const Poly& numerator() const { return num_; }
    const Poly& denominator() const { return den_; }

    /// Evaluation of P/Q (no conjugation) on the sphere; large arguments go
    /// through the reversed polynomials in u = 1/w.
    SpherePoint eval_holomorphic(const SpherePoint& w) const {
        if (w.is_finite() && std::abs(w.value()) <= 1e4) {
            const cplx q = poly_eval(den_, w.value());
            const cplx p = poly_eval(num_, w.value());
            if (q == cplx(0.0, 0.0)) return SpherePoint::infinity();
            return SpherePoint(p / q);
        }
        const cplx u = w.is_infinite() ? cplx(0.0, 0.0) : 1.0 / w.value();
        cplx p = 0, q = 0;
        for (std::size_t k = 0; k <= dn_; ++k) p = p * u + num_[k];  // u^dn P(1/u)
        for (std::size_t k = 0; k <= dd_; ++k) q = q * u + den_[k];
        // P/Q = u^(dd-dn) * p/q
        if (q == cplx(0.0, 0.0)) return SpherePoint::infinity();
        cplx v = p / q;
        if (dd_ >= dn_) {
            for (std::size_t k = dn_; k < dd_; ++k) v *= u;
            return SpherePoint(v);
        }
        if (u == cplx(0.0, 0.0)) return SpherePoint::infinity();
        for (std::size_t k = dd_; k < dn_; ++k) v /= u;
        return SpherePoint(v);
    }

    SpherePoint operator()(const SpherePoint& z) const { return eval_holomorphic(z.conj()); }

private:
    Poly num_, den_;
    std::size_t dn_ = 0, dd_ = 0;
};

inline const AntiRationalMap& cubic_g() {
    static const AntiRationalMap g({0.0, 0.0, 3.0}, {1.0, 0.0, 0.0, 2.0});
    return g;
}

/// g(z) for the gasket cubic.
inline SpherePoint eval_g(const SpherePoint& z) { return cubic_g()(z); }

/// The holomorphic second iterate g o g = f o f.
inline SpherePoint eval_g2(const SpherePoint& z) { return eval_g(eval_g(z)); }

/// Fixed critical points 0, 1, omega, omega^2, indexed 0..3.
inline const std::array<cplx, 4>& critical_points() {
    static const std::array<cplx, 4> c = {cplx(0, 0), cplx(1, 0), omega, omega * omega};
    return c;
}

struct CriticalData {
    cplx point;
    int local_degree;
    double coefficient;  // |g(c+d) - c| / |d|^deg at the smaller probe
};

/// Fixed critical points with their local degree measured by scaling probes
/// at |d| = 1e-3 and 1e-4.
inline std::vector<CriticalData> fixed_critical_data() {
    std::vector<CriticalData> out;
    for (const cplx c : critical_points()) {
        const auto img = eval_g(c);
        if (!img.is_finite() || std::abs(img.value() - c) > 1e-14)
            throw verification_failed("critical point is not fixed");
        double coeff[2];
        double slope = 0;
        const double d1 = 1e-3, d2 = 1e-4;
        double m1 = 0, m2 = 0;
        for (int k = 0; k < 8; ++k) {
            const cplx dir = std::polar(1.0, 2 * std::numbers::pi * (k + 0.3) / 8);
            m1 = std::max(m1, std::abs(eval_g(c + d1 * dir).value() - c));
            m2 = std::max(m2, std::abs(eval_g(c + d2 * dir).value() - c));
        }
        slope = std::log(m1 / m2) / std::log(d1 / d2);
        const int deg = int(std::lround(slope));
        coeff[0] = m1 / std::pow(d1, deg);
        coeff[1] = m2 / std::pow(d2, deg);
        if (deg < 2 || std::abs(slope - deg) > 0.05 || std::abs(coeff[0] / coeff[1] - 1) > 0.05)
            throw verification_failed("inconsistent local degree at critical point");
        out.push_back({c, deg, coeff[1]});
    }
    return out;
}

inline constexpr double max_basin_eps = 0.05;

/// |g(c + d) - c| < |d| / 2 on sampled circles |d| <= eps around every fixed
/// critical point, which makes an eps-ball entry a proof of attraction.
inline bool contraction_verified(double eps = max_basin_eps) {
    for (const cplx c : critical_points())
        for (int ring = 1; ring <= 50; ++ring) {
            const double rad = eps * ring / 50.0;
            for (int k = 0; k < 256; ++k) {
                const cplx d = std::polar(rad, 2 * std::numbers::pi * k / 256.0);
                if (!(std::abs(eval_g(c + d).value() - c) < std::abs(d) / 2)) return false;
            }
        }
    return true;
}

struct BasinOutcome {
    enum class Kind { Attracted, Undecided };
    Kind kind = Kind::Undecided;
    int target = -1;  // index into critical_points()
    int time = 0;
    bool attracted() const { return kind == Kind::Attracted; }
};

inline BasinOutcome classify_basin(SpherePoint z, int maxiter, double eps = max_basin_eps) {
    if (!(eps > 0) || eps > max_basin_eps)
        throw std::invalid_argument("eps must lie in (0, 0.05], the verified contraction radius");
    const auto& crit = critical_points();
    for (int step = 0;; ++step) {
        if (z.is_finite()) {
            const cplx w = z.value();
            for (int k = 0; k < 4; ++k)
                if (std::abs(w - crit[k]) < eps) return {BasinOutcome::Kind::Attracted, k, step};
        }
        if (step >= maxiter) return {BasinOutcome::Kind::Undecided, -1, maxiter};
        const SpherePoint next = eval_g(z);
        // a non-critical fixed point is repelling, hence on the Julia set;
        // rounding would otherwise push the orbit off it eventually
        if (chordal(next, z) < 1e-14) return {BasinOutcome::Kind::Undecided, -1, maxiter};
        z = next;
    }
}

/// The six fixed points of g on the Julia set: r w^k and s w^k with
/// r = (sqrt3 - 1)/2, s = -(sqrt3 + 1)/2 the roots of 2x^2 + 2x - 1.
inline std::vector<cplx> julia_fixed_points() {
    const double r = (std::sqrt(3.0) - 1) / 2, s = -(std::sqrt(3.0) + 1) / 2;
    std::vector<cplx> out;
    for (double x : {r, s})
        for (int k = 0; k < 3; ++k) out.push_back(x * std::pow(omega, k));
    return out;
}

/// All ten fixed points of g o g = f o f as roots of
/// 3 N^2 D - z (2 N^3 + D^3) with N = 3z^2, D = 2z^3 + 1.
inline std::vector<cplx> second_iterate_fixed_points() {
    const Poly N{0.0, 0.0, 3.0}, D{1.0, 0.0, 0.0, 2.0}, Z{0.0, 1.0};
    const Poly lhs = poly_scale(poly_mul(poly_mul(N, N), D), 3.0);
    const Poly rhs = poly_mul(Z, poly_add(poly_scale(poly_mul(poly_mul(N, N), N), 2.0), poly_mul(poly_mul(D, D), D)));
    return poly_roots(poly_add(lhs, poly_scale(rhs, -1.0)));
}

/// |(g o g)'(z)| by a central difference.
inline double second_iterate_derivative(cplx z, double h = 1e-6) {
    const cplx a = eval_g2(z + h).value(), b = eval_g2(z - h).value();
    return std::abs((a - b) / (2 * h));
}

/// Critical points reached from `probes` points on a circle around centre.
inline std::set<int> touching_basins(cplx centre, double radius = 1e-3, int probes = 64, int maxiter = 2000) {
    std::set<int> out;
    for (int k = 0; k < probes; ++k) {
        const auto o = classify_basin(centre + std::polar(radius, 2 * std::numbers::pi * (k + 0.5) / probes), maxiter);
        if (o.attracted()) out.insert(o.target);
    }
    return out;
}

/// True when the straight segment from z to critical point k, sampled at
/// `samples` points, lies in the set attracted to k. For a point attracted to
/// k this certifies membership in the invariant basin of k rather than in one
/// of its preimage components.
inline bool in_invariant_basin(cplx z, int k, int maxiter = 2000, int samples = 4000) {
    const cplx c = critical_points()[std::size_t(k)];
    for (int s = 0; s <= samples; ++s) {
        const auto o = classify_basin(SpherePoint(z + (c - z) * (double(s) / samples)), maxiter);
        if (!o.attracted() || o.target != k) return false;
    }
    return true;
}

/// Invariant basins reached by probes on a small circle around `centre`.
/// Preimage components of other basins accumulate at a touching point in
/// sectors of positive angle, so raw targets overcount; only probes certified
/// by in_invariant_basin() are counted here.
inline std::set<int> touching_invariant_basins(cplx centre, double radius = 1e-3, int probes = 64,
                                               int maxiter = 2000) {
    std::set<int> out;
    for (int k = 0; k < probes; ++k) {
        const cplx z = centre + std::polar(radius, 2 * std::numbers::pi * (k + 0.5) / probes);
        const auto o = classify_basin(z, maxiter);
        if (o.attracted() && !out.count(o.target) && in_invariant_basin(z, o.target, maxiter)) out.insert(o.target);
    }
    return out;
}

/// The three preimages of w under g.
inline std::array<SpherePoint, 3> g_preimages(const SpherePoint& w) {
    // 3u^2 = w (2u^3 + 1) with u = conj z
    std::array<SpherePoint, 3> out;
    if (w.is_infinite()) {
        // poles: 2u^3 + 1 = 0
        for (int k = 0; k < 3; ++k)
            out[k] = SpherePoint(std::conj(-std::cbrt(0.5) * std::pow(omega, k)));
        return out;
    }
    const cplx v = w.value();
    if (std::abs(v) < 1e-300) {
        out = {SpherePoint(0.0), SpherePoint(0.0), SpherePoint::infinity()};
        return out;
    }
    const auto roots = poly_roots({v, 0.0, -3.0, 2.0 * v});
    for (int k = 0; k < 3; ++k) out[k] = SpherePoint(std::conj(roots[k]));
    return out;
}

struct JuliaRenderOptions {
    int maxiter = 100;
    double eps = max_basin_eps;
    int threads = 0;
};

inline Rgb basin_colour(const BasinOutcome& o, int maxiter) {
    if (!o.attracted()) return palette::limit;
    return palette::shade(palette::categorical[std::size_t(o.target)], o.time, maxiter);
}

inline RasterImage render_julia(const Region& region, int res, const JuliaRenderOptions& opt = {}) {
    const auto [w, h] = raster_size(region, res);
    return render_rows(w, h, opt.threads, [&, w = w, h = h](int i, int j) {
        return basin_colour(classify_basin(SpherePoint(pixel_point(region, w, h, i, j)), opt.maxiter, opt.eps),
                            opt.maxiter);
    });
}

/// The four complementary pieces of the closed invariant basins, recovered on
/// a raster. Each piece contains one marker: infinity or one of the three
/// poles. Pieces touch only at the six Julia fixed points, which are walled
/// off by small disks so the pixel flood fill cannot leak through them.
class JuliaPieces {
public:
    JuliaPieces(double half_width = 2.5, int res = 1024, int maxiter = 200)
        : half_(half_width), n_(res), label_(std::size_t(res) * res, -2) {
        std::vector<int> target(std::size_t(n_) * n_, -1);
        for (int j = 0; j < n_; ++j)
            for (int i = 0; i < n_; ++i) {
                const auto o = classify_basin(SpherePoint(point(i, j)), maxiter);
                target[idx(i, j)] = o.attracted() ? o.target : -1;
            }
        // immediate basins: components of same-target pixels holding the critical point
        std::vector<char> wall(target.size(), 0);
        for (int k = 0; k < 4; ++k) {
            const auto [ci, cj] = pixel(critical_points()[k]);
            fill(ci, cj, [&](std::size_t p) { return target[p] == k && !wall[p]; }, [&](std::size_t p) { wall[p] = 1; });
        }
        const double guard = 3.0 * step();
        for (const cplx t : julia_fixed_points())
            for (int j = 0; j < n_; ++j)
                for (int i = 0; i < n_; ++i)
                    if (std::abs(point(i, j) - t) < guard) wall[idx(i, j)] = 1;
        for (std::size_t p = 0; p < wall.size(); ++p)
            if (wall[p]) label_[p] = -1;

        // marker 0 is infinity (everything on the frame), 1..3 the poles
        for (int i = 0; i < n_; ++i)
            for (int j : {0, n_ - 1}) {
                flood_label(i, j, 0);
                flood_label(j, i, 0);
            }
        for (int k = 0; k < 3; ++k) {
            const auto [pi, pj] = pixel(poles()[k]);
            flood_label(pi, pj, k + 1);
        }
    }

    static const std::array<cplx, 3>& poles() {
        static const std::array<cplx, 3> p = {-std::cbrt(0.5) * cplx(1, 0), -std::cbrt(0.5) * omega,
                                              -std::cbrt(0.5) * omega * omega};
        return p;
    }

    /// Piece of a point near the Julia set: the unique label among non-wall
    /// pixels within `radius` pixels, or nullopt if absent or ambiguous.
    std::optional<int> piece(cplx z, int radius = 2) const {
        if (std::abs(z) > 0.9 * half_) return 0;
        const auto [ci, cj] = pixel(z);
        std::set<int> seen;
        for (int dj = -radius; dj <= radius; ++dj)
            for (int di = -radius; di <= radius; ++di) {
                const int i = ci + di, j = cj + dj;
                if (i < 0 || j < 0 || i >= n_ || j >= n_) continue;
                const int l = label_[idx(i, j)];
                if (l >= 0) seen.insert(l);
            }
        if (seen.size() != 1) return std::nullopt;
        return *seen.begin();
    }

    /// Fraction of non-wall pixels that received a marker label.
    double labelled_fraction() const {
        std::size_t free = 0, good = 0;
        for (int l : label_) {
            if (l == -1) continue;
            ++free;
            if (l >= 0) ++good;
        }
        return free ? double(good) / double(free) : 0.0;
    }

private:
    double step() const { return 2 * half_ / (n_ - 1); }
    cplx point(int i, int j) const { return {-half_ + i * step(), half_ - j * step()}; }
    std::pair<int, int> pixel(cplx z) const {
        return {int(std::lround((z.real() + half_) / step())), int(std::lround((half_ - z.imag()) / step()))};
    }
    std::size_t idx(int i, int j) const { return std::size_t(j) * std::size_t(n_) + std::size_t(i); }

    template <class Pred, class Act>
    void fill(int i0, int j0, Pred ok, Act act) {
        if (i0 < 0 || j0 < 0 || i0 >= n_ || j0 >= n_ || !ok(idx(i0, j0))) return;
        std::vector<std::pair<int, int>> stack{{i0, j0}};
        act(idx(i0, j0));
        while (!stack.empty()) {
            auto [i, j] = stack.back();
            stack.pop_back();
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                const int a = i + di[k], b = j + dj[k];
                if (a < 0 || b < 0 || a >= n_ || b >= n_) continue;
                if (!ok(idx(a, b))) continue;
                act(idx(a, b));
                stack.push_back({a, b});
            }
        }
    }

    void flood_label(int i, int j, int l) {
        fill(i, j, [&](std::size_t p) { return label_[p] == -2; }, [&](std::size_t p) { label_[p] = l; });
    }

    double half_;
    int n_;
    std::vector<int> label_;  // -1 wall, -2 unlabelled, else marker index
};

struct JuliaCodingReport {
    long samples = 0;
    long decided_pairs = 0;
    long repeats = 0;
    std::array<std::array<long, 4>, 4> transitions{};
};

/// Codes forward orbits of Julia points obtained as random backward chains
/// from the Julia fixed points, by the piece each orbit point lies in.
inline JuliaCodingReport julia_piece_coding(const JuliaPieces& pieces, int samples, int depth, unsigned seed = 0) {
    JuliaCodingReport rep;
    std::mt19937 rng(seed);
    const auto fixed = julia_fixed_points();
    for (int s = 0; s < samples; ++s) {
        SpherePoint z(fixed[std::size_t(s) % fixed.size()]);
        std::vector<SpherePoint> chain{z};
        for (int d = 0; d < depth; ++d) {
            const auto pre = g_preimages(chain.back());
            std::vector<SpherePoint> fresh;
            for (const auto& p : pre)
                if (chordal(p, chain.back()) > 1e-9) fresh.push_back(p);
            if (fresh.empty()) break;
            chain.push_back(fresh[std::uniform_int_distribution<std::size_t>(0, fresh.size() - 1)(rng)]);
        }
        ++rep.samples;
        // chain.back() is the start of the forward orbit; the fixed point itself is excluded
        std::optional<int> prev;
        for (std::size_t k = chain.size() - 1; k >= 1; --k) {
            const auto& pt = chain[k];
            std::optional<int> cur = pt.is_infinite() ? std::optional<int>(0) : pieces.piece(pt.value());
            if (prev && cur) {
                ++rep.decided_pairs;
                ++rep.transitions[std::size_t(*prev)][std::size_t(*cur)];
                if (*prev == *cur) ++rep.repeats;
            }
            prev = cur;
        }
    }
    return rep;
}

}  // namespace gasket
