#pragma once

// Sphere triangulations with an explicit, oriented face list.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace gasket {

using Face = std::array<int, 3>;
using Edge = std::pair<int, int>;  // always (min, max)

inline Edge make_edge(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

class Triangulation {
public:
    Triangulation() = default;
    Triangulation(int vertices, std::vector<Face> faces) : n_(vertices), faces_(std::move(faces)) {
        std::set<Edge> es;
        for (const auto& f : faces_)
            for (int k = 0; k < 3; ++k) {
                const int u = f[k], v = f[(k + 1) % 3];
                if (u != v) es.insert(make_edge(u, v));
            }
        edges_.assign(es.begin(), es.end());
        adj_.assign(std::max(n_, 0), {});
        for (auto [u, v] : edges_) {
            if (u < 0 || v >= n_) continue;
            adj_[u].push_back(v);
            adj_[v].push_back(u);
        }
        for (auto& a : adj_) std::sort(a.begin(), a.end());
    }

    int vertex_count() const { return n_; }
    const std::vector<Face>& faces() const { return faces_; }
    const std::vector<Edge>& edges() const { return edges_; }
    /// Sorted neighbour list of v.
    const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
    int degree(int v) const { return int(adj_.at(v).size()); }

    bool adjacent(int u, int v) const {
        const auto& a = adj_.at(u);
        return std::binary_search(a.begin(), a.end(), v);
    }

    /// Index of the face containing the directed edge u->v, or -1.
    int face_with_directed_edge(int u, int v) const {
        for (std::size_t i = 0; i < faces_.size(); ++i)
            for (int k = 0; k < 3; ++k)
                if (faces_[i][k] == u && faces_[i][(k + 1) % 3] == v) return int(i);
        return -1;
    }

    /// Face indices incident to v.
    std::vector<int> faces_at(int v) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < faces_.size(); ++i)
            if (std::find(faces_[i].begin(), faces_[i].end(), v) != faces_[i].end()) out.push_back(int(i));
        return out;
    }

private:
    int n_ = 0;
    std::vector<Face> faces_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

inline ValidationReport validate(const Triangulation& t) {
    ValidationReport rep;
    auto fail = [&](std::string s) { rep.violations.push_back(std::move(s)); };
    const int n = t.vertex_count();
    const auto V = long(n), E = long(t.edges().size()), F = long(t.faces().size());
    if (n < 4) fail("too few vertices: |V| < 4");

    std::map<std::pair<int, int>, int> directed;
    std::set<Face> seen;
    for (const auto& f : t.faces()) {
        for (int v : f)
            if (v < 0 || v >= n) fail("face references vertex out of range: " + std::to_string(v));
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
            fail("face with repeated vertex (loop)");
            continue;
        }
        Face s = f;
        std::sort(s.begin(), s.end());
        if (!seen.insert(s).second) fail("duplicate face");
        for (int k = 0; k < 3; ++k) ++directed[{f[k], f[(k + 1) % 3]}];
    }
    if (E != 3 * V - 6) fail("not maximal: |E| != 3|V|-6");
    if (F != 2 * V - 4) fail("face count: |F| != 2|V|-4");

    bool orientation_ok = true, two_faces = true;
    for (auto [u, v] : t.edges()) {
        const int fw = directed.count({u, v}) ? directed[{u, v}] : 0;
        const int bw = directed.count({v, u}) ? directed[{v, u}] : 0;
        if (fw + bw != 2) two_faces = false;
        else if (fw != 1) orientation_ok = false;
    }
    if (!two_faces) fail("edge not in exactly two faces");
    if (!orientation_ok) fail("inconsistent face orientation");

    // two faces share at most one edge
    std::map<Edge, std::vector<int>> faces_of_edge;
    for (std::size_t i = 0; i < t.faces().size(); ++i) {
        const auto& f = t.faces()[i];
        for (int k = 0; k < 3; ++k) faces_of_edge[make_edge(f[k], f[(k + 1) % 3])].push_back(int(i));
    }
    std::map<std::pair<int, int>, int> shared;
    for (const auto& [e, fs] : faces_of_edge)
        for (std::size_t a = 0; a < fs.size(); ++a)
            for (std::size_t b = a + 1; b < fs.size(); ++b) ++shared[{fs[a], fs[b]}];
    for (const auto& [p, cnt] : shared)
        if (cnt > 1) {
            fail("two faces share more than one edge");
            break;
        }

    if (n >= 1 && two_faces) {
        // connectivity
        std::vector<char> seen_v(n, 0);
        std::vector<int> stack{0};
        seen_v[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : t.neighbors(v))
                if (!seen_v[w]) {
                    seen_v[w] = 1;
                    ++count;
                    stack.push_back(w);
                }
        }
        if (count != n) fail("graph is not connected");
    }
    return rep;
}

/// True iff every 3-cycle of the graph bounds a face.
inline bool is_reduced(const Triangulation& t) {
    std::set<Face> faces;
    for (auto f : t.faces()) {
        std::sort(f.begin(), f.end());
        faces.insert(f);
    }
    for (auto [u, v] : t.edges()) {
        const auto& a = t.neighbors(u);
        const auto& b = t.neighbors(v);
        std::vector<int> common;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
        for (int w : common) {
            if (w <= v) continue;  // count each triangle once (u < v < w)
            if (!faces.count(Face{u, v, w})) return false;
        }
    }
    return true;
}

/// Every face (a,b,c) becomes six faces around a new face vertex, with new
/// edge vertices on each edge. Numbering: old vertices, then edges in
/// sorted order, then faces in order.
inline Triangulation barycentric_subdivision(const Triangulation& t) {
    const int n = t.vertex_count();
    std::map<Edge, int> edge_vertex;
    int next = n;
    for (const auto& e : t.edges()) edge_vertex[e] = next++;
    std::vector<Face> faces;
    for (const auto& f : t.faces()) {
        const int fc = next++;
        const auto [a, b, c] = f;
        const int ab = edge_vertex.at(make_edge(a, b));
        const int bc = edge_vertex.at(make_edge(b, c));
        const int ca = edge_vertex.at(make_edge(c, a));
        faces.push_back({a, ab, fc});
        faces.push_back({ab, b, fc});
        faces.push_back({b, bc, fc});
        faces.push_back({bc, c, fc});
        faces.push_back({c, ca, fc});
        faces.push_back({ca, a, fc});
    }
    return Triangulation(next, std::move(faces));
}

inline Triangulation tetrahedron() { return Triangulation(4, {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {0, 2, 3}}); }

inline Triangulation octahedron() {
    // 0,1 / 2,3 antipodal around the equator, 4 and 5 the poles
    return Triangulation(6, {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}});
}

/// Two tetrahedra glued along the face {0,1,2}; vertices 3 and 4 are apexes.
inline Triangulation double_tetrahedron() {
    return Triangulation(5, {{0, 1, 3}, {1, 2, 3}, {2, 0, 3}, {1, 0, 4}, {2, 1, 4}, {0, 2, 4}});
}

namespace detail {

/// Triangulation of the convex hull of points in general position on a
/// sphere, faces oriented counterclockwise seen from outside.
inline std::vector<Face> hull_faces(const std::vector<std::array<double, 3>>& p) {
    const int n = int(p.size());
    auto sub = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return std::array<double, 3>{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
    };
    auto cross = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return std::array<double, 3>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    };
    auto dot = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    };
    std::vector<Face> out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                auto nrm = cross(sub(p[j], p[i]), sub(p[k], p[i]));
                int pos = 0, neg = 0;
                for (int m = 0; m < n; ++m) {
                    if (m == i || m == j || m == k) continue;
                    const double s = dot(nrm, sub(p[m], p[i]));
                    if (s > 1e-9) ++pos;
                    else if (s < -1e-9) ++neg;
                }
                if (pos == 0) out.push_back({i, j, k});
                else if (neg == 0) out.push_back({i, k, j});
            }
    return out;
}

}  // namespace detail

inline Triangulation icosahedron() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<std::array<double, 3>> p;
    for (double s1 : {-1.0, 1.0})
        for (double s2 : {-phi, phi}) {
            p.push_back({0, s1, s2});
            p.push_back({s1, s2, 0});
            p.push_back({s2, 0, s1});
        }
    return Triangulation(12, detail::hull_faces(p));
}

inline Triangulation builder(const std::string& name) {
    if (name == "tetrahedron") return tetrahedron();
    if (name == "octahedron") return octahedron();
    if (name == "icosahedron") return icosahedron();
    if (name == "double_tetrahedron" || name == "double-tetrahedron") return double_tetrahedron();
    if (name == "subdivided_tetrahedron" || name == "subdivided-tetrahedron")
        return barycentric_subdivision(tetrahedron());
    throw std::invalid_argument("unknown triangulation builder: " + name);
}

}  // namespace gasket
