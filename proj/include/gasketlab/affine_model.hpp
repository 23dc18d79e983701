#pragma once

// Piecewise affine orientation-reversing model of the tetrahedral gasket map
// on the planar net of a tetrahedron. Caps are absorbing.
//
// Net: outer triangle D2=(0,0), D3=(2,0), D1=(1,sqrt3) with inner face ABC,
// A=(1/2,sqrt3/2), B=(3/2,sqrt3/2), C=(1,0). Faces ABC, ABD1, ACD2, BCD3.
// The interstice of a face XYZ is its midpoint triangle; it is cut into the
// corner triangles (m_XY, P_X, P_Y), where P_X = (m_XY + m_XZ)/2, and the
// central triangle, itself cut at its barycentre N. With W the vertex
// opposite XYZ, the corner piece maps onto the interstice of face XYW,
//   m_XY -> m_XY, P_X -> m_XW, P_Y -> m_YW,
// and the piece (P_X, P_Y, N) maps onto (m_XW, m_YW, W).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"
#include "raster.hpp"

namespace gasket {

class construction_inconsistent : public std::logic_error {
public:
    explicit construction_inconsistent(double err)
        : std::logic_error("affine pieces disagree on a shared edge by " + std::to_string(err)) {}
};

class insufficient_data : public std::invalid_argument {
public:
    insufficient_data() : std::invalid_argument("box counting needs at least three resolutions") {}
};

struct NetPoint {
    double x = 0, y = 0;

    friend NetPoint operator+(NetPoint a, NetPoint b) { return {a.x + b.x, a.y + b.y}; }
    friend NetPoint operator-(NetPoint a, NetPoint b) { return {a.x - b.x, a.y - b.y}; }
    friend NetPoint operator*(double s, NetPoint a) { return {s * a.x, s * a.y}; }
    friend double distance(NetPoint a, NetPoint b) { return std::hypot(a.x - b.x, a.y - b.y); }
};

enum class TetraVertex { A = 0, B = 1, C = 2, D = 3 };

inline char vertex_name(TetraVertex v) { return "ABCD"[int(v)]; }

namespace net {

inline constexpr double s3 = std::numbers::sqrt3;
inline constexpr NetPoint A{0.5, s3 / 2}, B{1.5, s3 / 2}, C{1.0, 0.0};
inline constexpr NetPoint D1{1.0, s3}, D2{0.0, 0.0}, D3{2.0, 0.0};
inline constexpr NetPoint E{1.0, s3 / 2}, F{1.25, s3 / 4}, G{0.75, s3 / 4};
inline constexpr NetPoint H1{1.25, 3 * s3 / 4}, H2{1.75, s3 / 4};
inline constexpr NetPoint I1{0.5, 0.0}, I2{1.5, 0.0};
inline constexpr NetPoint J1{0.75, 3 * s3 / 4}, J2{0.25, s3 / 4};
inline constexpr NetPoint K{7.0 / 8, 3 * s3 / 8}, L{9.0 / 8, 3 * s3 / 8}, M{1.0, s3 / 4}, N{1.0, s3 / 3};

}  // namespace net

struct NetFace {
    std::array<TetraVertex, 3> labels;
    std::array<NetPoint, 3> pos;
    TetraVertex opposite;
};

inline const std::array<NetFace, 4>& net_faces() {
    using enum TetraVertex;
    static const std::array<NetFace, 4> f{{
        {{A, B, C}, {net::A, net::B, net::C}, D},
        {{A, B, D}, {net::A, net::B, net::D1}, C},
        {{A, C, D}, {net::A, net::C, net::D2}, B},
        {{B, C, D}, {net::B, net::C, net::D3}, A},
    }};
    return f;
}

namespace detail {

inline std::array<double, 3> barycentric(const std::array<NetPoint, 3>& t, NetPoint p) {
    const double det = (t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[2].x - t[0].x) * (t[1].y - t[0].y);
    const double l1 = ((p.x - t[0].x) * (t[2].y - t[0].y) - (t[2].x - t[0].x) * (p.y - t[0].y)) / det;
    const double l2 = ((t[1].x - t[0].x) * (p.y - t[0].y) - (p.x - t[0].x) * (t[1].y - t[0].y)) / det;
    return {1 - l1 - l2, l1, l2};
}

inline int label_index(const NetFace& f, TetraVertex v) {
    for (int i = 0; i < 3; ++i)
        if (f.labels[std::size_t(i)] == v) return i;
    return -1;
}

inline int face_with(TetraVertex a, TetraVertex b, TetraVertex c) {
    const auto& faces = net_faces();
    for (int i = 0; i < 4; ++i) {
        const auto& f = faces[std::size_t(i)];
        if (label_index(f, a) >= 0 && label_index(f, b) >= 0 && label_index(f, c) >= 0) return i;
    }
    throw std::logic_error("no such face");
}

/// Point of face f with weights on its labelled vertices.
inline NetPoint face_point(int f, std::initializer_list<std::pair<TetraVertex, double>> weights) {
    const auto& face = net_faces()[std::size_t(f)];
    NetPoint p{0, 0};
    for (const auto& [v, w] : weights) p = p + w * face.pos[std::size_t(label_index(face, v))];
    return p;
}

}  // namespace detail

/// Regular tetrahedron in space; identified net points land on the same
/// spatial point.
inline Vec3 tetra_vertex(TetraVertex v) {
    const double s = 1.0 / (2.0 * std::numbers::sqrt2);
    static const std::array<Vec3, 4> p{Vec3{s, s, s}, Vec3{s, -s, -s}, Vec3{-s, s, -s}, Vec3{-s, -s, s}};
    return p[std::size_t(v)];
}

inline constexpr double net_tol = 1e-12;

/// Net face containing p (lowest index on shared edges), or -1 outside the net.
inline int locate_face(NetPoint p, double tol = net_tol) {
    const auto& faces = net_faces();
    for (int i = 0; i < 4; ++i) {
        const auto l = detail::barycentric(faces[std::size_t(i)].pos, p);
        if (l[0] >= -tol && l[1] >= -tol && l[2] >= -tol) return i;
    }
    return -1;
}

inline Vec3 to_tetrahedron(NetPoint p) {
    const int f = locate_face(p, 1e-9);
    if (f < 0) throw std::invalid_argument("point outside the net");
    const auto& face = net_faces()[std::size_t(f)];
    const auto l = detail::barycentric(face.pos, p);
    Vec3 r{0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        r = r + l[std::size_t(i)] * tetra_vertex(face.labels[std::size_t(i)]);
    }
    return r;
}

inline double tetra_distance(NetPoint p, NetPoint q) {
    const Vec3 d = to_tetrahedron(p) - to_tetrahedron(q);
    return std::sqrt(d.dot(d));
}

/// Canonical representative under the gluing AD2 ~ AD1, BD3 ~ BD1, CD3 ~ CD2.
inline NetPoint canonical(NetPoint p, double tol = net_tol) {
    using namespace net;
    auto along = [&](NetPoint from, NetPoint to) -> std::optional<double> {
        const NetPoint d = to - from;
        const double t = ((p.x - from.x) * d.x + (p.y - from.y) * d.y) / (d.x * d.x + d.y * d.y);
        if (distance(from + t * d, p) <= tol && t >= -tol && t <= 1 + tol) return t;
        return std::nullopt;
    };
    if (auto t = along(A, D2); t && *t > tol) return A + *t * (D1 - A);
    if (auto t = along(B, D3); t && *t > tol) return B + *t * (D1 - B);
    if (auto t = along(C, D3); t && *t > tol) return C + *t * (D2 - C);
    return p;
}

struct AffinePiece {
    int face = 0;         // source face, which is also the interstice id
    int target_face = 0;  // face holding the image triangle
    std::array<NetPoint, 3> source, target;
    std::array<double, 4> matrix{};  // row-major 2x2
    NetPoint offset;
    bool orientation_reversing = false;
    bool similarity = false;
    double factor = 0;  // similarity ratio when similarity is set

    NetPoint operator()(NetPoint p) const {
        return {matrix[0] * p.x + matrix[1] * p.y + offset.x, matrix[2] * p.x + matrix[3] * p.y + offset.y};
    }
    double determinant() const { return matrix[0] * matrix[3] - matrix[1] * matrix[2]; }
    std::array<double, 2> singular_values() const {
        const double a = matrix[0], b = matrix[1], c = matrix[2], d = matrix[3];
        const double p = std::hypot(a + d, c - b), q = std::hypot(a - d, c + b);
        return {(p + q) / 2, std::abs(p - q) / 2};
    }
    bool contains(NetPoint p, double tol = net_tol) const {
        const auto l = detail::barycentric(source, p);
        return l[0] >= -tol && l[1] >= -tol && l[2] >= -tol;
    }
};

namespace detail {

inline AffinePiece make_piece(int face, int target_face, std::array<NetPoint, 3> s, std::array<NetPoint, 3> t) {
    AffinePiece pc;
    pc.face = face;
    pc.target_face = target_face;
    pc.source = s;
    pc.target = t;
    // solve M [s1-s0 s2-s0] = [t1-t0 t2-t0]
    const double a = s[1].x - s[0].x, b = s[2].x - s[0].x, c = s[1].y - s[0].y, d = s[2].y - s[0].y;
    const double det = a * d - b * c;
    const double ia = d / det, ib = -b / det, ic = -c / det, id = a / det;
    const double u1 = t[1].x - t[0].x, u2 = t[2].x - t[0].x, v1 = t[1].y - t[0].y, v2 = t[2].y - t[0].y;
    pc.matrix = {u1 * ia + u2 * ic, u1 * ib + u2 * id, v1 * ia + v2 * ic, v1 * ib + v2 * id};
    pc.offset = {t[0].x - pc.matrix[0] * s[0].x - pc.matrix[1] * s[0].y,
                 t[0].y - pc.matrix[2] * s[0].x - pc.matrix[3] * s[0].y};
    pc.orientation_reversing = pc.determinant() < 0;
    const auto sv = pc.singular_values();
    pc.similarity = std::abs(sv[0] - sv[1]) <= 1e-9 * sv[0];
    pc.factor = pc.similarity ? sv[0] : 0.0;
    return pc;
}

}  // namespace detail

/// The 24 pieces: per face, for its edges in label order (01, 02, 12), the
/// corner piece followed by the central piece.
inline std::vector<AffinePiece> build_model() {
    using detail::face_point;
    const auto& faces = net_faces();
    std::vector<AffinePiece> pieces;
    for (int f = 0; f < 4; ++f) {
        const auto& face = faces[std::size_t(f)];
        const TetraVertex W = face.opposite;
        for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
            const TetraVertex X = face.labels[std::size_t(i)], Y = face.labels[std::size_t(j)],
                              Z = face.labels[std::size_t(3 - i - j)];
            const int g = detail::face_with(X, Y, W);
            const NetPoint mXY = face_point(f, {{X, 0.5}, {Y, 0.5}});
            const NetPoint PX = face_point(f, {{X, 0.5}, {Y, 0.25}, {Z, 0.25}});
            const NetPoint PY = face_point(f, {{Y, 0.5}, {X, 0.25}, {Z, 0.25}});
            const NetPoint Nb = face_point(f, {{X, 1.0 / 3}, {Y, 1.0 / 3}, {Z, 1.0 / 3}});
            const NetPoint tXY = face_point(g, {{X, 0.5}, {Y, 0.5}});
            const NetPoint tXW = face_point(g, {{X, 0.5}, {W, 0.5}});
            const NetPoint tYW = face_point(g, {{Y, 0.5}, {W, 0.5}});
            const NetPoint tW = face_point(g, {{W, 1.0}});
            pieces.push_back(detail::make_piece(f, g, {mXY, PX, PY}, {tXY, tXW, tYW}));
            pieces.push_back(detail::make_piece(f, g, {PX, PY, Nb}, {tXW, tYW, tW}));
        }
    }
    // pieces sharing an edge must agree on it up to the gluing
    double worst = 0;
    for (std::size_t a = 0; a < pieces.size(); ++a)
        for (std::size_t b = a + 1; b < pieces.size(); ++b) {
            if (pieces[a].face != pieces[b].face) continue;
            for (int u = 0; u < 3; ++u)
                for (int v = u + 1; v < 3; ++v) {
                    const NetPoint p = pieces[a].source[std::size_t(u)], q = pieces[a].source[std::size_t(v)];
                    const NetPoint mid = 0.5 * (p + q);
                    if (!pieces[b].contains(p) || !pieces[b].contains(q) || !pieces[b].contains(mid)) continue;
                    for (double t : {0.0, 0.3, 0.5, 1.0}) {
                        const NetPoint x = p + t * (q - p);
                        worst = std::max(worst, tetra_distance(pieces[a](x), pieces[b](x)));
                    }
                }
        }
    if (worst > 1e-12) throw construction_inconsistent(worst);
    return pieces;
}

inline const std::vector<AffinePiece>& affine_model() {
    static const std::vector<AffinePiece> m = build_model();
    return m;
}

/// Open cap around a vertex containing p, if any: barycentric weight of that
/// vertex above 1/2 in the face holding p.
inline std::optional<TetraVertex> cap_of(NetPoint p, double tol = net_tol) {
    const int f = locate_face(p, tol);
    if (f < 0) throw std::invalid_argument("point outside the net");
    const auto& face = net_faces()[std::size_t(f)];
    const auto l = detail::barycentric(face.pos, p);
    for (int i = 0; i < 3; ++i)
        if (l[std::size_t(i)] > 0.5 + tol) return face.labels[std::size_t(i)];
    return std::nullopt;
}

/// Interstice (face id) whose closed midpoint triangle holds p, or -1.
inline int interstice_of(NetPoint p, double tol = net_tol) {
    const int f = locate_face(p, tol);
    if (f < 0 || cap_of(p, tol)) return -1;
    return f;
}

struct AffineStep {
    enum class Kind { Mapped, EnteredCap };
    Kind kind = Kind::Mapped;
    NetPoint point;          // image when mapped
    int piece = -1;          // piece used when mapped
    TetraVertex cap{};       // cap entered
};

inline AffineStep step(NetPoint p, const std::vector<AffinePiece>& pieces = affine_model()) {
    if (const auto cap = cap_of(p)) return {AffineStep::Kind::EnteredCap, p, -1, *cap};
    const int f = locate_face(p);
    int best = -1;
    double best_margin = -1e300;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        if (pieces[k].face != f) continue;
        const auto l = detail::barycentric(pieces[k].source, p);
        const double margin = std::min({l[0], l[1], l[2]});
        if (margin >= -net_tol) return {AffineStep::Kind::Mapped, pieces[k](p), int(k), {}};
        if (margin > best_margin) {
            best_margin = margin;
            best = int(k);
        }
    }
    return {AffineStep::Kind::Mapped, pieces[std::size_t(best)](p), best, {}};
}

struct AffineClassification {
    enum class Kind { Fatou, JuliaCandidate };
    Kind kind = Kind::JuliaCandidate;
    TetraVertex cap{};
    int time = 0;

    bool fatou() const { return kind == Kind::Fatou; }
};

inline AffineClassification classify_affine(NetPoint p, int maxiter,
                                            const std::vector<AffinePiece>& pieces = affine_model()) {
    for (int t = 0; t <= maxiter; ++t) {
        const auto s = step(p, pieces);
        if (s.kind == AffineStep::Kind::EnteredCap) return {AffineClassification::Kind::Fatou, s.cap, t};
        if (t == maxiter) break;
        p = s.point;
    }
    return {AffineClassification::Kind::JuliaCandidate, {}, maxiter};
}

/// Inverse of a piece on its target triangle.
inline NetPoint apply_inverse(const AffinePiece& pc, NetPoint p) {
    const double det = pc.determinant();
    const double x = p.x - pc.offset.x, y = p.y - pc.offset.y;
    return {(pc.matrix[3] * x - pc.matrix[1] * y) / det, (-pc.matrix[2] * x + pc.matrix[0] * y) / det};
}

/// Julia points by backward iteration: starting from interstice vertices,
/// apply `depth` random inverse similarity branches. Pairs share the branch
/// sequence, so both points lie in the first piece of the chain and at
/// distance of order 2^-depth.
struct JuliaPair {
    NetPoint p, q;
    int piece = -1;
};

template <class Rng>
JuliaPair backward_julia_pair(Rng& rng, int depth, const std::vector<AffinePiece>& pieces = affine_model()) {
    std::vector<int> corner;
    for (std::size_t k = 0; k < pieces.size(); ++k)
        if (pieces[k].similarity) corner.push_back(int(k));
    // start from two vertices of one interstice, which are Julia points
    std::uniform_int_distribution<std::size_t> pick(0, corner.size() - 1);
    const AffinePiece& seed = pieces[std::size_t(corner[pick(rng)])];
    NetPoint p = seed.target[0], q = seed.target[1];
    int face = seed.target_face, last = -1;
    for (int d = 0; d < depth; ++d) {
        std::vector<int> options;
        for (int k : corner)
            if (pieces[std::size_t(k)].target_face == face) options.push_back(k);
        std::uniform_int_distribution<std::size_t> choose(0, options.size() - 1);
        last = options[choose(rng)];
        p = apply_inverse(pieces[std::size_t(last)], p);
        q = apply_inverse(pieces[std::size_t(last)], q);
        face = pieces[std::size_t(last)].face;
    }
    return {p, q, last};
}

inline Region net_region() { return {0.0, 2.0, 0.0, std::numbers::sqrt3}; }

struct AffineRenderOptions {
    int maxiter = 20;
    int threads = 0;
};

inline RasterImage render_affine(int res, const AffineRenderOptions& opt = {}) {
    const Region region = net_region();
    const auto [w, h] = raster_size(region, res);
    const auto& pieces = affine_model();
    return render_rows(w, h, opt.threads, [&, w = w, h = h](int i, int j) {
        const auto z = pixel_point(region, w, h, i, j);
        const NetPoint p{z.real(), z.imag()};
        if (locate_face(p) < 0) return palette::white;
        const auto c = classify_affine(p, opt.maxiter, pieces);
        if (!c.fatou()) return palette::limit;
        return palette::shade(palette::categorical[std::size_t(c.cap)], c.time, opt.maxiter);
    });
}

/// Classification depth matched to the pixel size: level-n gasket triangles
/// have side 2^-(n+1), comparable to the pixel width 2/res when n = log2(res/4).
inline int box_depth(int res, int maxiter) {
    const int n = int(std::lround(std::log2(double(res) / 4.0)));
    return std::clamp(n, 1, std::max(1, maxiter));
}

/// Number of raster samples at resolution res classified JuliaCandidate at
/// depth box_depth(res, maxiter), restricted to one interstice when given.
inline long candidate_count(int res, int maxiter, int interstice = -1, int depth = -1) {
    const Region region = net_region();
    const auto [w, h] = raster_size(region, res);
    const int n = depth > 0 ? depth : box_depth(res, maxiter);
    const auto& pieces = affine_model();
    long count = 0;
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) {
            const auto z = pixel_point(region, w, h, i, j);
            const NetPoint p{z.real(), z.imag()};
            if (locate_face(p) < 0) continue;
            if (interstice >= 0 && interstice_of(p) != interstice) continue;
            if (!classify_affine(p, n, pieces).fatou()) ++count;
        }
    return count;
}

struct DimensionEstimate {
    double slope = 0;
    std::vector<int> resolutions;
    std::vector<long> counts;
};

/// Least-squares slope of log N against log res, where N counts
/// JuliaCandidate pixels with the classification depth tied to the pixel
/// size, so N is a box count of the candidate set at scale 2/res.
inline DimensionEstimate dimension_estimate(int maxiter, const std::vector<int>& resolutions, int interstice = -1) {
    if (resolutions.size() < 3) throw insufficient_data();
    DimensionEstimate d;
    d.resolutions = resolutions;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int r : resolutions) {
        const long n = candidate_count(r, maxiter, interstice);
        if (n <= 0) throw insufficient_data();
        d.counts.push_back(n);
        const double x = std::log(double(r)), y = std::log(double(n));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = double(resolutions.size());
    d.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return d;
}

}  // namespace gasket
