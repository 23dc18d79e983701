#pragma once

// Riemann-sphere primitives: points (with infinity), generalized circles,
// oriented disks and (anti-)Mobius maps.
//
// Everything that needs a scale-free notion of "close" goes through the unit
// sphere model (stereographic projection from the north pole), so infinity is
// an ordinary point and tolerances mean chordal distance.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace gasket {

using cplx = std::complex<double>;

inline constexpr double default_tol = 1e-9;

class geometry_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class degenerate_triple : public geometry_error {
public:
    degenerate_triple() : geometry_error("degenerate triple: two of the points coincide") {}
};

class identical_circles : public geometry_error {
public:
    identical_circles() : geometry_error("identical circles have no tangency type") {}
};

inline const cplx omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

struct Vec3 {
    double x = 0, y = 0, z = 0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
};

/// A point of the Riemann sphere: a finite complex number or infinity.
class SpherePoint {
public:
    SpherePoint() = default;
    SpherePoint(cplx z) : z_(z) {}
    SpherePoint(double x) : z_(x, 0.0) {}

    static SpherePoint infinity() {
        SpherePoint p;
        p.inf_ = true;
        return p;
    }

    bool is_infinite() const { return inf_; }
    bool is_finite() const { return !inf_; }

    /// Finite value; throws on infinity.
    cplx value() const {
        if (inf_) throw geometry_error("point at infinity has no finite value");
        return z_;
    }

    Vec3 to_sphere() const {
        if (inf_) return {0, 0, 1};
        const double n2 = std::norm(z_);
        const double d = 1.0 + n2;
        return {2 * z_.real() / d, 2 * z_.imag() / d, (n2 - 1) / d};
    }

    static SpherePoint from_sphere(Vec3 v) {
        const double n = v.norm();
        if (n > 0) v = (1.0 / n) * v;
        const double denom = 1.0 - v.z;
        if (denom < 1e-300) return infinity();
        return SpherePoint(cplx(v.x / denom, v.y / denom));
    }

    SpherePoint conj() const { return inf_ ? *this : SpherePoint(std::conj(z_)); }

private:
    cplx z_{0.0, 0.0};
    bool inf_ = false;
};

/// Chordal distance on the unit sphere; at most 2.
inline double chordal(const SpherePoint& p, const SpherePoint& q) {
    if (p.is_infinite() && q.is_infinite()) return 0.0;
    if (p.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(q.value()));
    if (q.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(p.value()));
    const cplx z = p.value(), w = q.value();
    return 2.0 * std::abs(z - w) / std::sqrt((1.0 + std::norm(z)) * (1.0 + std::norm(w)));
}

struct Circle {
    cplx center;
    double radius;
};

/// The line {z : Re(conj(normal) * z) = offset}, |normal| = 1.
struct Line {
    cplx normal;
    double offset;
};

using GenCircle = std::variant<Circle, Line>;

inline bool is_line(const GenCircle& c) { return std::holds_alternative<Line>(c); }

inline void validate_circle(const GenCircle& c) {
    if (const auto* k = std::get_if<Circle>(&c)) {
        if (!(k->radius > 0) || !std::isfinite(k->radius) || !std::isfinite(k->center.real()) ||
            !std::isfinite(k->center.imag()))
            throw geometry_error("circle radius must be finite and positive");
    } else {
        const auto& l = std::get<Line>(c);
        if (std::abs(std::abs(l.normal) - 1.0) > 1e-12 || !std::isfinite(l.offset))
            throw geometry_error("line normal must have unit modulus");
    }
}

/// Oriented generalized disk stored as the Hermitian form
///   Q(z) = a|z|^2 - 2 Re(conj(b) z) + c,   disk = {Q <= 0},
/// normalized so that |b|^2 - a c = 1. Circles with a < 0 bound the exterior
/// disk; for a = 0 the normal b points into the half-plane.
class Disk {
public:
    Disk() = default;
    Disk(double a, cplx b, double c) : a_(a), b_(b), c_(c) { normalize(); }

    static Disk inside(const Circle& k) {
        const double r = k.radius;
        return Disk(1.0 / r, k.center / r, (std::norm(k.center) - r * r) / r);
    }
    static Disk outside(const Circle& k) { return inside(k).complement(); }
    /// Half-plane {Re(conj(n) z) >= offset}.
    static Disk half_plane(const Line& l) { return Disk(0.0, l.normal, 2.0 * l.offset); }

    /// Disk bounded by c; for circles this is the interior, for lines the side
    /// the normal points to.
    static Disk bounded_by(const GenCircle& c) {
        validate_circle(c);
        if (const auto* k = std::get_if<Circle>(&c)) return inside(*k);
        return half_plane(std::get<Line>(c));
    }

    double a() const { return a_; }
    cplx b() const { return b_; }
    double c() const { return c_; }

    Disk complement() const {
        Disk d = *this;
        d.a_ = -a_;
        d.b_ = -b_;
        d.c_ = -c_;
        return d;
    }

    /// Forms with |a| below this are reported as lines.
    static constexpr double line_eps = 1e-11;

    bool boundary_is_line() const { return std::abs(a_) < line_eps; }
    /// True when the disk is the unbounded side of a round circle.
    bool is_exterior() const { return !boundary_is_line() && a_ < 0; }

    GenCircle boundary() const {
        if (boundary_is_line()) {
            const double m = std::abs(b_);
            return Line{b_ / m, c_ / (2.0 * m)};
        }
        return Circle{b_ / a_, 1.0 / std::abs(a_)};
    }

    /// Unit normal and offset of the plane cutting the unit sphere in the
    /// boundary circle; the disk is {X : n . X <= h}.
    std::pair<Vec3, double> plane() const {
        Vec3 n{-2 * b_.real(), -2 * b_.imag(), a_ - c_};
        const double len = n.norm();
        return {(1.0 / len) * n, -(a_ + c_) / len};
    }

    /// Signed Euclidean distance in R^3 from the sphere image of p to the
    /// cutting plane; negative inside. Comparable to chordal distance.
    double signed_distance(const SpherePoint& p) const {
        auto [n, h] = plane();
        return n.dot(p.to_sphere()) - h;
    }

    bool contains(const SpherePoint& p, double tol = 0.0) const { return signed_distance(p) <= tol; }

    /// Point of the sphere deepest inside the disk.
    SpherePoint deepest_point() const {
        auto [n, h] = plane();
        return SpherePoint::from_sphere(-1.0 * n);
    }

    /// Oriented distance between disks (max-norm of the sphere-plane data).
    friend double disk_distance(const Disk& d1, const Disk& d2) {
        auto [n1, h1] = d1.plane();
        auto [n2, h2] = d2.plane();
        return std::max({std::abs(n1.x - n2.x), std::abs(n1.y - n2.y), std::abs(n1.z - n2.z),
                         std::abs(h1 - h2)});
    }

private:
    void normalize() {
        const double det = std::norm(b_) - a_ * c_;
        if (!(det > 0)) throw geometry_error("form does not describe a circle");
        const double s = std::sqrt(det);
        a_ /= s;
        b_ /= s;
        c_ /= s;
    }

    double a_ = 1.0;
    cplx b_{0.0, 0.0};
    double c_ = -1.0;
};

/// Distance between unoriented circles: the oriented distance minimized over
/// the two orientations.
inline double circle_distance(const GenCircle& c1, const GenCircle& c2) {
    const Disk d1 = Disk::bounded_by(c1), d2 = Disk::bounded_by(c2);
    return std::min(disk_distance(d1, d2), disk_distance(d1, d2.complement()));
}

inline bool same_circle(const GenCircle& c1, const GenCircle& c2, double tol = default_tol) {
    return circle_distance(c1, c2) < tol;
}

/// Distance from p to the curve, measured on the sphere.
inline double distance_to_curve(const GenCircle& c, const SpherePoint& p) {
    return std::abs(Disk::bounded_by(c).signed_distance(p));
}

using Mat2 = std::array<cplx, 4>;  // row-major {a, b, c, d}

inline Mat2 mat_mul(const Mat2& m, const Mat2& n) {
    return {m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3], m[2] * n[0] + m[3] * n[2],
            m[2] * n[1] + m[3] * n[3]};
}

inline Mat2 mat_conj(const Mat2& m) { return {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])}; }

/// z -> (a w + b) / (c w + d) with w = z, or w = conj(z) when anti is set.
/// Always stored with determinant 1.
class MobiusMap {
public:
    MobiusMap() = default;
    MobiusMap(cplx a, cplx b, cplx c, cplx d, bool anti = false) : m_{a, b, c, d}, anti_(anti) { normalize(); }
    MobiusMap(const Mat2& m, bool anti) : m_(m), anti_(anti) { normalize(); }

    static MobiusMap identity() { return {}; }
    static MobiusMap conjugation() { return MobiusMap(1, 0, 0, 1, true); }

    const Mat2& matrix() const { return m_; }
    bool anti() const { return anti_; }

    SpherePoint operator()(const SpherePoint& p) const {
        const SpherePoint w = anti_ ? p.conj() : p;
        const auto& [a, b, c, d] = m_;
        if (w.is_infinite()) {
            if (std::abs(c) == 0.0) return SpherePoint::infinity();
            return SpherePoint(a / c);
        }
        const cplx z = w.value();
        const cplx num = a * z + b, den = c * z + d;
        if (den == cplx(0.0, 0.0)) return SpherePoint::infinity();
        return SpherePoint(num / den);
    }

    /// (*this) after other.
    MobiusMap compose(const MobiusMap& other) const {
        return MobiusMap(mat_mul(m_, anti_ ? mat_conj(other.m_) : other.m_), anti_ != other.anti_);
    }

    MobiusMap inverse() const {
        const auto& [a, b, c, d] = m_;
        Mat2 inv{d, -b, -c, a};
        return MobiusMap(anti_ ? mat_conj(inv) : inv, anti_);
    }

    /// Image of an oriented disk; orientation is carried along.
    Disk apply(const Disk& disk) const {
        // Q' = M^{-H} Q M^{-1}, with Q conjugated first for anti maps.
        const cplx qa = disk.a(), qb = -disk.b(), qc = disk.c();
        Mat2 q{qa, anti_ ? std::conj(qb) : qb, anti_ ? qb : std::conj(qb), qc};
        const auto& [a, b, c, d] = m_;
        const Mat2 inv{d, -b, -c, a};
        const Mat2 inv_h{std::conj(inv[0]), std::conj(inv[2]), std::conj(inv[1]), std::conj(inv[3])};
        const Mat2 r = mat_mul(mat_mul(inv_h, q), inv);
        return Disk(r[0].real(), -r[1], r[3].real());
    }

private:
    void normalize() {
        const cplx det = m_[0] * m_[3] - m_[1] * m_[2];
        if (std::abs(det) < 1e-300 || !std::isfinite(std::abs(det)))
            throw geometry_error("Mobius matrix is singular");
        const cplx s = std::sqrt(det);
        for (auto& e : m_) e /= s;
    }

    Mat2 m_{cplx(1), cplx(0), cplx(0), cplx(1)};
    bool anti_ = false;
};

/// Max chordal distance between the actions of two maps on a fixed set of
/// probe points, a cheap equality test for maps.
inline double map_distance(const MobiusMap& f, const MobiusMap& g) {
    static const std::array<SpherePoint, 5> probes = {SpherePoint(0.0), SpherePoint(1.0), SpherePoint(cplx(0, 1)),
                                                      SpherePoint::infinity(), SpherePoint(cplx(-0.7, 0.3))};
    if (f.anti() != g.anti()) return 2.0;
    double worst = 0;
    for (const auto& p : probes) worst = std::max(worst, chordal(f(p), g(p)));
    return worst;
}

/// Anti-Mobius reflection fixing the boundary of d pointwise.
inline MobiusMap reflection(const Disk& d) {
    // z -> (b conj(z) - c) / (a conj(z) - conj(b))
    return MobiusMap(d.b(), -d.c(), d.a(), -std::conj(d.b()), true);
}

inline MobiusMap reflection(const GenCircle& c) { return reflection(Disk::bounded_by(c)); }

inline SpherePoint reflect_in_circle(const GenCircle& c, const SpherePoint& z) { return reflection(c)(z); }

inline GenCircle apply_to_circle(const MobiusMap& m, const GenCircle& c) {
    return m.apply(Disk::bounded_by(c)).boundary();
}

namespace detail {

inline Line canonical_line(cplx n, double offset) {
    if (n.real() < -1e-15 || (std::abs(n.real()) <= 1e-15 && n.imag() < 0)) {
        n = -n;
        offset = -offset;
    }
    return Line{n, offset};
}

inline Line line_through(cplx p, cplx q) {
    const cplx dir = q - p;
    const cplx n = cplx(0, 1) * dir / std::abs(dir);
    return canonical_line(n, (std::conj(n) * p).real());
}

inline void require_distinct(const SpherePoint& p, const SpherePoint& q, const SpherePoint& r, double tol) {
    if (chordal(p, q) <= tol || chordal(q, r) <= tol || chordal(p, r) <= tol) throw degenerate_triple();
}

// Matrix sending (z1, z2, z3) to (0, 1, infinity).
inline Mat2 to_standard_triple(const SpherePoint& z1, const SpherePoint& z2, const SpherePoint& z3) {
    if (z1.is_infinite()) {
        const cplx b = z2.value(), c = z3.value();
        return {0, b - c, 1, -c};
    }
    if (z2.is_infinite()) {
        const cplx a = z1.value(), c = z3.value();
        return {1, -a, 1, -c};
    }
    if (z3.is_infinite()) {
        const cplx a = z1.value(), b = z2.value();
        return {1, -a, 0, b - a};
    }
    const cplx a = z1.value(), b = z2.value(), c = z3.value();
    return {b - c, -a * (b - c), b - a, -c * (b - a)};
}

}  // namespace detail

/// The generalized circle through three distinct points. Collinear triples and
/// triples containing infinity give lines.
inline GenCircle circle_through(const SpherePoint& p, const SpherePoint& q, const SpherePoint& r,
                                double tol = 1e-12) {
    detail::require_distinct(p, q, r, tol);
    if (p.is_infinite()) return detail::line_through(q.value(), r.value());
    if (q.is_infinite()) return detail::line_through(p.value(), r.value());
    if (r.is_infinite()) return detail::line_through(p.value(), q.value());
    const cplx a = p.value(), b = q.value() - a, c = r.value() - a;
    const double cross = (std::conj(b) * c).imag();
    if (std::abs(cross) <= 1e-13 * std::abs(b) * std::abs(c)) return detail::line_through(a, q.value());
    // circumcenter relative to a
    const cplx center = (std::norm(b) * c - std::norm(c) * b) / cplx(0, 2 * cross);
    return Circle{a + center, std::abs(center)};
}

/// The unique (anti-)Mobius map with src[k] -> dst[k].
inline MobiusMap mobius_from_triples(const std::array<SpherePoint, 3>& src, const std::array<SpherePoint, 3>& dst,
                                     bool anti, double tol = 1e-12) {
    detail::require_distinct(src[0], src[1], src[2], tol);
    detail::require_distinct(dst[0], dst[1], dst[2], tol);
    const Mat2 s = anti ? detail::to_standard_triple(src[0].conj(), src[1].conj(), src[2].conj())
                        : detail::to_standard_triple(src[0], src[1], src[2]);
    const MobiusMap t(detail::to_standard_triple(dst[0], dst[1], dst[2]), false);
    const MobiusMap t_inv = t.inverse();
    return MobiusMap(mat_mul(t_inv.matrix(), s), anti);
}

struct Disjoint {};
struct Tangent {
    SpherePoint point;
};
struct Intersecting {};
using TangencyType = std::variant<Disjoint, Tangent, Intersecting>;

/// Inversive product of the two (oriented) disks: -1 for external tangency,
/// 0 for orthogonal circles, +1 for internal tangency or equal disks.
inline double inversive_product(const Disk& d1, const Disk& d2) {
    return (d1.b() * std::conj(d2.b())).real() - 0.5 * (d1.a() * d2.c() + d2.a() * d1.c());
}

/// Point where two tangent circles touch, from the sphere model: the line
/// where the two cutting planes meet is tangent to the sphere there.
inline SpherePoint tangency_point(const Disk& d1, const Disk& d2) {
    auto [n1, h1] = d1.plane();
    auto [n2, h2] = d2.plane();
    const double c = n1.dot(n2);
    const double det = 1.0 - c * c;
    if (det < 1e-24) {
        // parallel planes: the circles touch only if both are (near) tangent planes
        return SpherePoint::from_sphere(h1 >= 0 ? n1 : -1.0 * n1);
    }
    const double alpha = (h1 - c * h2) / det, beta = (h2 - c * h1) / det;
    return SpherePoint::from_sphere(alpha * n1 + beta * n2);
}

inline TangencyType tangency(const GenCircle& c1, const GenCircle& c2, double tol = default_tol) {
    if (same_circle(c1, c2, tol)) throw identical_circles();
    const Disk d1 = Disk::bounded_by(c1), d2 = Disk::bounded_by(c2);
    const double p = std::abs(inversive_product(d1, d2));
    if (std::abs(p - 1.0) <= tol) return Tangent{tangency_point(d1, d2)};
    if (p < 1.0) return Intersecting{};
    return Disjoint{};
}

}  // namespace gasket
