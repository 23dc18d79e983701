#pragma once

// Schwarz reflection of the deltoid and its inscribed circle.
//
// R(z) = z + 1/(2 z^2) maps |z| > 1 univalently onto the exterior D1 of the
// deltoid with cusps 3/2 w^k. D2 is the disk |w| < 1/2, tangent to the
// deltoid at -w^k / 2. F is sigma1 = R o (1/conj) o R^-1 on the closure of
// D1 and sigma2 (inversion in |w| = 1/2) on the closure of D2. The tile is
// the rest: three components, one per cusp.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"
#include "polynomial.hpp"
#include "raster.hpp"

namespace gasket {

class not_in_domain : public geometry_error {
public:
    not_in_domain() : geometry_error("point outside the closed deltoid exterior") {}
};

class schwarz_singular : public geometry_error {
public:
    schwarz_singular() : geometry_error("point at a cusp or tangency point of the Schwarz reflection") {}
};

inline constexpr double d2_radius = 0.5;
inline constexpr double boundary_band = 1e-9;

inline SpherePoint eval_R(const SpherePoint& z) {
    if (z.is_infinite()) return SpherePoint::infinity();
    const cplx v = z.value();
    if (v == cplx(0)) return SpherePoint::infinity();
    return SpherePoint(v + 1.0 / (2.0 * v * v));
}

inline cplx eval_R(cplx z) { return z + 1.0 / (2.0 * z * z); }

inline std::array<cplx, 3> deltoid_cusps() {
    return {1.5, 1.5 * omega, 1.5 * omega * omega};
}

inline std::array<cplx, 3> deltoid_tangency_points() {
    return {-0.5, -0.5 * omega, -0.5 * omega * omega};
}

/// The six cusps and tangency points.
inline std::array<cplx, 6> schwarz_singular_set() {
    const auto c = deltoid_cusps();
    const auto t = deltoid_tangency_points();
    return {c[0], c[1], c[2], t[0], t[1], t[2]};
}

/// All three solutions of R(z) = w, i.e. roots of 2z^3 - 2wz^2 + 1. A pair of
/// roots closer than 1e-6 is a numerically split double root and is replaced
/// by the critical point 2w/3 of the cubic.
inline std::vector<cplx> R_preimages(cplx w) {
    auto r = poly_roots({1.0, 0.0, -2.0 * w, 2.0});
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = i + 1; j < r.size(); ++j)
            if (std::abs(r[i] - r[j]) < 1e-6) r[i] = r[j] = 2.0 * w / 3.0;
    return r;
}

namespace detail {

inline cplx refine_R(cplx z, cplx w) {
    for (int it = 0; it < 50; ++it) {
        const cplx d = 1.0 - 1.0 / (z * z * z);
        if (std::abs(d) < 1e-8) break;
        const cplx step = (eval_R(z) - w) / d;
        z -= step;
        if (std::abs(step) <= 1e-16 * std::abs(z)) break;
    }
    return z;
}

}  // namespace detail

/// Root of R(z) = w with |z| >= 1, the inverse of the uniformization. Points
/// with no such root (up to boundary_band) lie outside the closure of D1.
inline cplx invert_R_exterior(cplx w) {
    if (std::abs(w) > 1e6) return detail::refine_R(w, w);
    const auto roots = R_preimages(w);
    const cplx z = *std::max_element(roots.begin(), roots.end(),
                                     [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    if (std::abs(z) < 1.0 - boundary_band) throw not_in_domain();
    return z;
}

inline bool in_closed_D1(const SpherePoint& w) {
    if (w.is_infinite()) return true;
    try {
        invert_R_exterior(w.value());
        return true;
    } catch (const not_in_domain&) {
        return false;
    }
}

inline bool in_closed_D2(const SpherePoint& w) { return !w.is_infinite() && std::abs(w.value()) <= d2_radius + 1e-12; }

inline SpherePoint sigma1(const SpherePoint& w) {
    if (w.is_infinite()) return w;
    const cplx z = invert_R_exterior(w.value());
    return eval_R(SpherePoint(1.0 / std::conj(z)));
}

/// w -> 1/(4 conj w), reflection in |w| = 1/2.
inline SpherePoint sigma2(const SpherePoint& w) {
    if (w.is_infinite()) return SpherePoint(0.0);
    if (w.value() == cplx(0)) return SpherePoint::infinity();
    return SpherePoint(1.0 / (4.0 * std::conj(w.value())));
}

/// Tile component of a tile point: index k of the cusp 3/2 w^k in its sector.
inline int tile_sector(cplx w) {
    double a = std::arg(w) / (2 * std::numbers::pi / 3);
    int k = int(std::lround(a));
    return ((k % 3) + 3) % 3;
}

struct SchwarzStep {
    enum class Kind { Mapped, InTile };
    Kind kind = Kind::Mapped;
    SpherePoint point;
    int via = 0;        // 1 for sigma1, 2 for sigma2
    int component = -1; // tile component when in the tile
};

inline SchwarzStep schwarz_step(const SpherePoint& w, double singular_tol = default_tol) {
    if (!w.is_infinite())
        for (cplx s : schwarz_singular_set())
            if (std::abs(w.value() - s) < singular_tol) throw schwarz_singular();
    if (in_closed_D2(w)) return {SchwarzStep::Kind::Mapped, sigma2(w), 2, -1};
    if (in_closed_D1(w)) return {SchwarzStep::Kind::Mapped, sigma1(w), 1, -1};
    return {SchwarzStep::Kind::InTile, w, 0, tile_sector(w.value())};
}

/// Points w in the closure of D1 with sigma1(w) = target: the images under
/// R o (1/conj) of the preimages of target inside the unit disk.
inline std::vector<cplx> sigma1_preimages(cplx target) {
    std::vector<cplx> out;
    for (cplx u : R_preimages(target))
        if (std::abs(u) < 1.0 - boundary_band && u != cplx(0)) out.push_back(eval_R(1.0 / std::conj(u)));
    return out;
}

struct SchwarzOutcome {
    enum class Kind { BasinInfinity, TilingSet, Undecided };
    Kind kind = Kind::Undecided;
    int time = 0;
    int component = -1;     // tile component reached
    bool invariant = false; // orbit never left the sector of that component (heuristic)
    bool singular = false;
};

struct SchwarzOptions {
    double escape_radius = 10.0;
    double singular_tol = default_tol;
};

/// Basin of infinity needs |w| above the escape radius after two
/// consecutive modulus increases; tiling set needs arrival in the tile.
inline SchwarzOutcome classify_schwarz(SpherePoint w, int maxiter, const SchwarzOptions& opt = {}) {
    SchwarzOutcome out;
    double prev = w.is_infinite() ? INFINITY : std::abs(w.value());
    int increases = 0;
    std::vector<int> sectors;
    for (int t = 0; t <= maxiter; ++t) {
        if (w.is_infinite()) return {SchwarzOutcome::Kind::BasinInfinity, t, -1, false, false};
        SchwarzStep s;
        try {
            s = schwarz_step(w, opt.singular_tol);
        } catch (const schwarz_singular&) {
            out.kind = SchwarzOutcome::Kind::Undecided;
            out.time = maxiter;
            out.singular = true;
            return out;
        }
        if (s.kind == SchwarzStep::Kind::InTile) {
            out.kind = SchwarzOutcome::Kind::TilingSet;
            out.time = t;
            out.component = s.component;
            out.invariant = std::all_of(sectors.begin(), sectors.end(), [&](int k) { return k == s.component; });
            return out;
        }
        if (t == maxiter) break;
        sectors.push_back(tile_sector(w.value()));
        w = s.point;
        const double m = w.is_infinite() ? INFINITY : std::abs(w.value());
        increases = m > prev ? increases + 1 : 0;
        prev = m;
        if (m > opt.escape_radius && increases >= 2) return {SchwarzOutcome::Kind::BasinInfinity, t + 1, -1, false, false};
    }
    out.kind = SchwarzOutcome::Kind::Undecided;
    out.time = maxiter;
    return out;
}

struct SchwarzRenderOptions {
    int maxiter = 60;
    int threads = 0;
};

inline Rgb schwarz_colour(const SchwarzOutcome& o, int maxiter) {
    switch (o.kind) {
        case SchwarzOutcome::Kind::BasinInfinity:
            return palette::shade(Rgb{240, 200, 40}, o.time, maxiter);
        case SchwarzOutcome::Kind::TilingSet:
            return palette::shade(palette::categorical[std::size_t(1 + o.component)], o.time, maxiter);
        default:
            return palette::limit;
    }
}

inline RasterImage render_schwarz(const Region& region, int res, const SchwarzRenderOptions& opt = {}) {
    const auto [w, h] = raster_size(region, res);
    return render_rows(w, h, opt.threads, [&, w = w, h = h](int i, int j) {
        return schwarz_colour(classify_schwarz(SpherePoint(pixel_point(region, w, h, i, j)), opt.maxiter),
                              opt.maxiter);
    });
}

}  // namespace gasket
