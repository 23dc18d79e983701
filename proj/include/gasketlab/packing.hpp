#pragma once

// Circle packings of sphere triangulations: radius relaxation, layout,
// normalization, dual circles, verification and the symmetry group.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "triangulation.hpp"

namespace gasket {

class no_convergence : public std::runtime_error {
public:
    no_convergence(long iterations, double residual)
        : std::runtime_error("packing solver did not converge after " + std::to_string(iterations) +
                             " sweeps (residual " + std::to_string(residual) + ")"),
          iterations(iterations),
          residual(residual) {}
    long iterations;
    double residual;
};

struct NormalizationSpec {
    enum class Kind { Default, Strip, FixThreePoints };
    Kind kind = Kind::Default;
    std::array<SpherePoint, 3> points{};

    static NormalizationSpec strip() { return {Kind::Strip, {}}; }
    static NormalizationSpec fix_three_points(SpherePoint p, SpherePoint q, SpherePoint r) {
        return {Kind::FixThreePoints, {p, q, r}};
    }

    std::string tag() const {
        switch (kind) {
            case Kind::Strip: return "strip";
            case Kind::FixThreePoints: return "fix3";
            default: return "default";
        }
    }
};

/// "default", "strip", or "fix3:p;q;r" with each point "re,im" or "inf".
inline NormalizationSpec parse_normalization(const std::string& s) {
    if (s == "default") return {};
    if (s == "strip") return NormalizationSpec::strip();
    if (s.rfind("fix3:", 0) == 0) {
        std::array<SpherePoint, 3> pts;
        std::stringstream ss(s.substr(5));
        std::string item;
        int k = 0;
        while (std::getline(ss, item, ';')) {
            if (k >= 3) throw std::invalid_argument("fix3 needs exactly three points");
            if (item == "inf") {
                pts[k++] = SpherePoint::infinity();
                continue;
            }
            const auto comma = item.find(',');
            if (comma == std::string::npos) throw std::invalid_argument("bad point in fix3: " + item);
            pts[k++] = SpherePoint(cplx(std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1))));
        }
        if (k != 3) throw std::invalid_argument("fix3 needs exactly three points");
        return {NormalizationSpec::Kind::FixThreePoints, pts};
    }
    throw std::invalid_argument("unknown normalization: " + s);
}

struct CirclePacking {
    Triangulation tri;
    std::vector<Disk> disks;       // per vertex; interiors pairwise disjoint
    std::vector<Disk> dual_disks;  // per face; the side containing the interstice
    std::map<Edge, SpherePoint> tangencies;
    std::string normalization = "default";

    GenCircle circle(int v) const { return disks.at(v).boundary(); }
    GenCircle dual(int f) const { return dual_disks.at(f).boundary(); }
    const SpherePoint& tangency(int u, int v) const { return tangencies.at(make_edge(u, v)); }

    /// Tangency points of face f, ordered (t(a,b), t(b,c), t(c,a)).
    std::array<SpherePoint, 3> face_tangencies(int f) const {
        const auto& [a, b, c] = tri.faces().at(f);
        return {tangency(a, b), tangency(b, c), tangency(c, a)};
    }
};

/// Recomputes tangency points and dual disks from the vertex disks.
inline void compute_duals(CirclePacking& p) {
    p.tangencies.clear();
    for (auto [u, v] : p.tri.edges()) p.tangencies[{u, v}] = tangency_point(p.disks[u], p.disks[v]);
    p.dual_disks.clear();
    for (std::size_t fi = 0; fi < p.tri.faces().size(); ++fi) {
        const auto& f = p.tri.faces()[fi];
        const auto t = p.face_tangencies(int(fi));
        Disk d = Disk::bounded_by(circle_through(t[0], t[1], t[2]));
        int witness = -1;
        for (int w = 0; w < p.tri.vertex_count() && witness < 0; ++w)
            if (w != f[0] && w != f[1] && w != f[2]) witness = w;
        if (d.contains(p.disks[witness].deepest_point())) d = d.complement();
        p.dual_disks.push_back(d);
    }
}

inline std::vector<GenCircle> dual_circles(const CirclePacking& p) {
    std::vector<GenCircle> out;
    for (std::size_t f = 0; f < p.dual_disks.size(); ++f) out.push_back(p.dual(int(f)));
    return out;
}

/// Image of a packing under an (anti-)Mobius map; orientations follow.
inline CirclePacking transform(const CirclePacking& p, const MobiusMap& m) {
    CirclePacking q = p;
    for (auto& d : q.disks) d = m.apply(d);
    for (auto& d : q.dual_disks) d = m.apply(d);
    for (auto& [e, t] : q.tangencies) t = m(t);
    return q;
}

struct PackingReport {
    std::vector<std::string> violations;
    std::vector<Edge> tangency_violations;
    double max_residual = 0;
    bool ok() const { return violations.empty(); }
};

inline PackingReport verify_packing(const CirclePacking& p, double tol = default_tol) {
    PackingReport rep;
    const auto& t = p.tri;
    const int n = t.vertex_count();
    auto note = [&](double r) { rep.max_residual = std::max(rep.max_residual, r); };
    auto name = [](int u, int v) { return std::to_string(u) + "-" + std::to_string(v); };

    for (auto [u, v] : t.edges()) {
        const double r = std::abs(inversive_product(p.disks[u], p.disks[v]) + 1.0);
        note(r);
        bool bad = r > tol;
        auto it = p.tangencies.find({u, v});
        if (it == p.tangencies.end()) bad = true;
        else {
            const double on = std::max(std::abs(p.disks[u].signed_distance(it->second)),
                                       std::abs(p.disks[v].signed_distance(it->second)));
            note(on);
            bad = bad || on > tol;
        }
        if (bad) {
            rep.tangency_violations.push_back({u, v});
            rep.violations.push_back("edge " + name(u, v) + " not tangent");
        }
    }
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (t.adjacent(u, v)) continue;
            const double ip = inversive_product(p.disks[u], p.disks[v]);
            if (ip > -1.0 - tol) rep.violations.push_back("non-adjacent disks " + name(u, v) + " not disjoint");
        }
    if (p.dual_disks.size() != t.faces().size()) {
        rep.violations.push_back("dual circle count mismatch");
        return rep;
    }
    for (std::size_t fi = 0; fi < t.faces().size(); ++fi) {
        const auto& f = t.faces()[fi];
        const auto& dual = p.dual_disks[fi];
        for (int k = 0; k < 3; ++k) {
            const double orth = std::abs(inversive_product(dual, p.disks[f[k]]));
            note(orth);
            if (orth > tol)
                rep.violations.push_back("dual " + std::to_string(fi) + " not orthogonal to circle " +
                                         std::to_string(f[k]));
            auto it = p.tangencies.find(make_edge(f[k], f[(k + 1) % 3]));
            if (it != p.tangencies.end()) {
                const double on = std::abs(dual.signed_distance(it->second));
                note(on);
                if (on > tol)
                    rep.violations.push_back("dual " + std::to_string(fi) + " misses tangency " +
                                             name(f[k], f[(k + 1) % 3]));
            }
        }
    }
    return rep;
}

namespace detail {

inline double face_angle(double r, double r1, double r2) {
    return 2.0 * std::asin(std::sqrt(r1 * r2 / ((r + r1) * (r + r2))));
}

struct EuclideanLayout {
    std::vector<cplx> centers;
    std::vector<double> radii;
};

// Radii with the three vertices of face 0 pinned to 1 and angle sum 2*pi at
// every other vertex, then a breadth-first layout. Face 0 becomes the
// unbounded interstice.
inline EuclideanLayout euclidean_packing(const Triangulation& t, double residual_tol) {
    const int n = t.vertex_count();
    const auto& outer = t.faces().at(0);
    std::vector<char> fixed(n, 0);
    for (int v : outer) fixed[v] = 1;
    std::vector<std::vector<std::pair<int, int>>> petals(n);
    for (const auto& f : t.faces())
        for (int k = 0; k < 3; ++k) petals[f[k]].push_back({f[(k + 1) % 3], f[(k + 2) % 3]});

    std::vector<double> r(n, 1.0);
    auto angle_sum = [&](int v) {
        double s = 0;
        for (auto [u, w] : petals[v]) s += face_angle(r[v], r[u], r[w]);
        return s;
    };
    const double two_pi = 2 * std::numbers::pi;
    const long max_sweeps = 200000;
    double residual = 0;
    long sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        residual = 0;
        for (int v = 0; v < n; ++v) {
            if (fixed[v]) continue;
            const double theta = angle_sum(v);
            residual = std::max(residual, std::abs(theta - two_pi));
            const double k = double(petals[v].size());
            const double beta = std::sin(theta / (2 * k));
            const double delta = std::sin(std::numbers::pi / k);
            r[v] = beta / (1 - beta) * r[v] * (1 - delta) / delta;
        }
        if (residual < residual_tol) break;
    }
    if (residual >= residual_tol) throw no_convergence(sweep, residual);
    // keep relaxing while it still helps; the layout error grows with the radius spread
    double best = residual;
    for (long extra = 0, stale = 0; extra < max_sweeps && stale < 200 && best > 4e-15; ++extra) {
        residual = 0;
        for (int v = 0; v < n; ++v) {
            if (fixed[v]) continue;
            const double theta = angle_sum(v);
            residual = std::max(residual, std::abs(theta - two_pi));
            const double k = double(petals[v].size());
            const double beta = std::sin(theta / (2 * k));
            const double delta = std::sin(std::numbers::pi / k);
            r[v] = beta / (1 - beta) * r[v] * (1 - delta) / delta;
        }
        if (residual < best) {
            best = residual;
            stale = 0;
        } else {
            ++stale;
        }
    }

    EuclideanLayout lay{std::vector<cplx>(n), r};
    std::vector<char> placed(n, 0);
    auto put_third = [&](int u, int v, int w, bool left) {
        const double duv = r[u] + r[v], duw = r[u] + r[w], dvw = r[v] + r[w];
        const double c = std::clamp((duv * duv + duw * duw - dvw * dvw) / (2 * duv * duw), -1.0, 1.0);
        const double alpha = std::acos(c);
        const cplx dir = (lay.centers[v] - lay.centers[u]) / std::abs(lay.centers[v] - lay.centers[u]);
        lay.centers[w] = lay.centers[u] + duw * dir * std::polar(1.0, left ? alpha : -alpha);
        placed[w] = 1;
    };
    const auto [a, b, c] = outer;
    lay.centers[a] = 0;
    lay.centers[b] = r[a] + r[b];
    placed[a] = placed[b] = 1;
    put_third(a, b, c, false);

    std::vector<char> done(t.faces().size(), 0);
    done[0] = 1;
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 1; i < t.faces().size(); ++i) {
            if (done[i]) continue;
            const auto& f = t.faces()[i];
            int cnt = placed[f[0]] + placed[f[1]] + placed[f[2]];
            if (cnt == 3) {
                done[i] = 1;
                continue;
            }
            if (cnt != 2) continue;
            for (int k = 0; k < 3; ++k) {
                const int u = f[k], v = f[(k + 1) % 3], w = f[(k + 2) % 3];
                if (placed[u] && placed[v] && !placed[w]) put_third(u, v, w, true);
            }
            done[i] = 1;
            progress = true;
        }
    }
    for (int v = 0; v < n; ++v)
        if (!placed[v]) throw geometry_error("layout failed: triangulation not connected");

    double scale = 0;
    for (double x : r) scale = std::max(scale, x);
    for (auto [u, v] : t.edges()) {
        const double gap = std::abs(std::abs(lay.centers[u] - lay.centers[v]) - (r[u] + r[v]));
        if (gap > 1e-10 * scale) throw geometry_error("layout inconsistent at edge");
    }
    return lay;
}

inline MobiusMap normalizing_map(const CirclePacking& p, const NormalizationSpec& spec) {
    const auto [a, b, c] = p.tri.faces().at(0);
    switch (spec.kind) {
        case NormalizationSpec::Kind::Strip: {
            const std::array<SpherePoint, 3> src{p.tangency(a, b), p.tangency(a, c), p.tangency(b, c)};
            const std::array<SpherePoint, 3> dst{SpherePoint::infinity(), SpherePoint(0.0), SpherePoint(cplx(0, 2))};
            MobiusMap m = mobius_from_triples(src, dst, false);
            int probe = -1;
            for (int v = 0; v < p.tri.vertex_count() && probe < 0; ++v)
                if (v != a && v != b && v != c) probe = v;
            const SpherePoint centre = m.apply(p.disks[probe]).deepest_point();
            if (centre.is_finite() && centre.value().real() < 0) m = mobius_from_triples(src, dst, true);
            return m;
        }
        case NormalizationSpec::Kind::FixThreePoints:
            return mobius_from_triples(p.face_tangencies(0), spec.points, false);
        default: {
            // face 0's dual becomes the unit circle, t(a,b) lands on 1
            const GenCircle dual = p.dual(0);
            const auto& k = std::get<Circle>(dual);
            const cplx t0 = p.tangency(a, b).value();
            const cplx rot = std::conj((t0 - k.center) / std::abs(t0 - k.center));
            return MobiusMap(rot / k.radius, -rot * k.center / k.radius, 0, 1, false);
        }
    }
}

}  // namespace detail

/// Packing with nerve t, normalized as requested. The radius relaxation stops
/// at an angle-sum residual of 1e-12; tol is the verification tolerance.
inline CirclePacking solve_packing(const Triangulation& t, const NormalizationSpec& norm = {},
                                   double tol = default_tol) {
    const auto rep = validate(t);
    if (!rep.ok()) throw std::invalid_argument("invalid triangulation: " + rep.violations.front());
    const auto lay = detail::euclidean_packing(t, 1e-12);
    CirclePacking p;
    p.tri = t;
    for (int v = 0; v < t.vertex_count(); ++v) p.disks.push_back(Disk::inside(Circle{lay.centers[v], lay.radii[v]}));
    compute_duals(p);
    const MobiusMap m = detail::normalizing_map(p, norm);
    for (auto& d : p.disks) d = m.apply(d);
    compute_duals(p);
    p.normalization = norm.tag();
    const auto check = verify_packing(p, tol);
    if (!check.ok()) throw geometry_error("packing failed verification: " + check.violations.front());
    return p;
}

struct Symmetry {
    MobiusMap map;
    std::vector<int> perm;  // vertex v goes to perm[v]
};

struct SymmetryGroup {
    std::vector<Symmetry> elements;
    std::size_t order() const { return elements.size(); }
    std::size_t orientation_preserving() const {
        return std::size_t(std::count_if(elements.begin(), elements.end(), [](const Symmetry& s) { return !s.map.anti(); }));
    }
};

/// Vertex permutations mapping the face set onto itself. Each one is fixed by
/// the image of face 0 as an oriented or reversed triple, so candidates are
/// propagated face by face from every possible image.
inline std::vector<std::vector<int>> graph_automorphisms(const Triangulation& t) {
    const int n = t.vertex_count();
    const auto& faces = t.faces();
    std::map<std::pair<int, int>, int> third;  // directed edge -> opposite vertex of its face
    for (const auto& f : faces)
        for (int k = 0; k < 3; ++k) third[{f[k], f[(k + 1) % 3]}] = f[(k + 2) % 3];

    std::vector<std::vector<int>> out;
    const auto [a, b, c] = faces.at(0);
    for (const auto& entry : third) {
        const auto [x, y] = entry.first;
        for (bool reverse : {false, true}) {
            auto key = [reverse](int p, int q) { return reverse ? std::pair{q, p} : std::pair{p, q}; };
            const auto it = third.find(key(x, y));
            if (it == third.end()) continue;
            std::vector<int> perm(n, -1);
            perm[a] = x;
            perm[b] = y;
            perm[c] = it->second;
            std::vector<int> stack{0};
            std::vector<char> seen(faces.size(), 0);
            seen[0] = 1;
            bool ok = true;
            while (!stack.empty() && ok) {
                const Face f = faces[stack.back()];
                stack.pop_back();
                for (int k = 0; k < 3 && ok; ++k) {
                    const int p = f[k], q = f[(k + 1) % 3];
                    const int s = third.at({q, p});
                    const auto img = third.find(key(perm[q], perm[p]));
                    if (img == third.end()) {
                        ok = false;
                        break;
                    }
                    if (perm[s] == -1) perm[s] = img->second;
                    else if (perm[s] != img->second) ok = false;
                    const int g = t.face_with_directed_edge(q, p);
                    if (!seen[g]) {
                        seen[g] = 1;
                        stack.push_back(g);
                    }
                }
            }
            std::vector<char> hit(n, 0);
            for (int v : perm) {
                if (v < 0 || hit[v]) ok = false;
                else hit[v] = 1;
            }
            if (ok) out.push_back(perm);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// (Anti-)Mobius maps permuting the packing's disks.
inline SymmetryGroup mobius_symmetries(const CirclePacking& p, double tol = default_tol) {
    SymmetryGroup g;
    const auto [a, b, c] = p.tri.faces().at(0);
    const auto src = p.face_tangencies(0);
    for (const auto& perm : graph_automorphisms(p.tri)) {
        const std::array<SpherePoint, 3> dst{p.tangency(perm[a], perm[b]), p.tangency(perm[b], perm[c]),
                                             p.tangency(perm[c], perm[a])};
        for (bool anti : {false, true}) {
            const MobiusMap m = mobius_from_triples(src, dst, anti);
            bool ok = true;
            for (int v = 0; v < p.tri.vertex_count() && ok; ++v)
                ok = disk_distance(m.apply(p.disks[v]), p.disks[perm[v]]) < tol;
            if (ok) g.elements.push_back({m, perm});
        }
    }
    return g;
}

}  // namespace gasket
