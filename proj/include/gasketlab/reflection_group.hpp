#pragma once

// The group generated by reflections in the dual circles of a packing, its
// orbit of disks, and the Nielsen map acting by R_f on each dual disk D_f.
//
// classify() is one-sided: Escaped is a proof of membership in the domain of
// discontinuity, Undecided only means no escape within the budget.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "geometry.hpp"
#include "packing.hpp"
#include "raster.hpp"

namespace gasket {

/// Letters are face ids; [f1, ..., fk] stands for R_f1 o ... o R_fk.
using Word = std::vector<int>;

class singular_point : public geometry_error {
public:
    singular_point() : geometry_error("point is a tangency point of two dual disks") {}
};

inline bool is_reduced_word(const Word& w) {
    for (std::size_t k = 1; k < w.size(); ++k)
        if (w[k] == w[k - 1]) return false;
    return true;
}

/// Calls fn on every reduced word of length <= maxlen in shortlex order.
template <class Fn>
void for_each_word(int faces, int maxlen, Fn&& fn) {
    Word w;
    fn(std::as_const(w));
    for (int len = 1; len <= maxlen; ++len) {
        if (faces < 1 || (faces < 2 && len > 1)) break;
        w.assign(len, 0);
        for (int k = 1; k < len; ++k) w[k] = w[k - 1] == 0 ? 1 : 0;
        while (true) {
            fn(std::as_const(w));
            // advance to the next reduced word of this length
            int k = len - 1;
            while (k >= 0) {
                int next = w[k] + 1;
                if (k > 0 && next == w[k - 1]) ++next;
                if (next < faces) {
                    w[k] = next;
                    break;
                }
                --k;
            }
            if (k < 0) break;
            for (int m = k + 1; m < len; ++m) w[m] = w[m - 1] == 0 ? 1 : 0;
        }
    }
}

/// All reduced words of length 1..maxlen (the empty word is not listed).
inline std::vector<Word> enumerate_words(int faces, int maxlen) {
    std::vector<Word> out;
    for_each_word(faces, maxlen, [&](const Word& w) {
        if (!w.empty()) out.push_back(w);
    });
    return out;
}

inline std::vector<Word> enumerate_words(const Triangulation& t, int maxlen) {
    return enumerate_words(int(t.faces().size()), maxlen);
}

inline MobiusMap face_reflection(const CirclePacking& p, int f) { return reflection(p.dual_disks.at(f)); }

inline MobiusMap word_map(const CirclePacking& p, const Word& w) {
    MobiusMap m;
    for (int f : w) m = m.compose(face_reflection(p, f));
    return m;
}

struct OrbitDisk {
    Disk disk;
    int generation = 0;
    Word witness;
    GenCircle circle() const { return disk.boundary(); }
};

namespace detail {

// Nearest-neighbour set of oriented disks keyed by their sphere-plane data.
class DiskIndex {
public:
    explicit DiskIndex(double tol) : tol_(tol), cell_(std::max(tol * 100, 1e-7)) {}

    bool contains(const Disk& d) const {
        const auto v = key_vector(d);
        std::array<long long, 4> base;
        for (int k = 0; k < 4; ++k) base[k] = cell(v[k]);
        for (int m = 0; m < 81; ++m) {
            std::array<long long, 4> c = base;
            int r = m;
            for (int k = 0; k < 4; ++k) {
                c[k] += r % 3 - 1;
                r /= 3;
            }
            auto it = cells_.find(hash(c));
            if (it == cells_.end()) continue;
            for (const auto& w : it->second) {
                double dist = 0;
                for (int k = 0; k < 4; ++k) dist = std::max(dist, std::abs(w[k] - v[k]));
                if (dist < tol_) return true;
            }
        }
        return false;
    }

    void insert(const Disk& d) {
        const auto v = key_vector(d);
        std::array<long long, 4> c;
        for (int k = 0; k < 4; ++k) c[k] = cell(v[k]);
        cells_[hash(c)].push_back(v);
    }

private:
    static std::array<double, 4> key_vector(const Disk& d) {
        auto [n, h] = d.plane();
        return {n.x, n.y, n.z, h};
    }
    long long cell(double x) const { return (long long)std::floor(x / cell_); }
    static std::size_t hash(const std::array<long long, 4>& c) {
        std::size_t h = 0;
        for (auto x : c) h = h * 1000003u ^ std::hash<long long>{}(x);
        return h;
    }

    double tol_, cell_;
    std::unordered_map<std::size_t, std::vector<std::array<double, 4>>> cells_;
};

}  // namespace detail

/// Orbit of the packing disks under words of length <= maxgen, each disk
/// tagged with its generation (minimal word length) and a witness word.
inline std::vector<OrbitDisk> orbit_disks(const CirclePacking& p, int maxgen, double tol = default_tol) {
    std::vector<OrbitDisk> out;
    detail::DiskIndex index(tol);
    for (const auto& d : p.disks) {
        out.push_back({d, 0, {}});
        index.insert(d);
    }
    std::size_t begin = 0;
    const int nf = int(p.dual_disks.size());
    std::vector<MobiusMap> refl;
    for (int f = 0; f < nf; ++f) refl.push_back(face_reflection(p, f));
    for (int g = 1; g <= maxgen; ++g) {
        const std::size_t end = out.size();
        for (std::size_t k = begin; k < end; ++k)
            for (int f = 0; f < nf; ++f) {
                if (!out[k].witness.empty() && out[k].witness.front() == f) continue;
                const Disk img = refl[f].apply(out[k].disk);
                if (index.contains(img)) continue;
                Word w{f};
                w.insert(w.end(), out[k].witness.begin(), out[k].witness.end());
                out.push_back({img, g, std::move(w)});
                index.insert(img);
            }
        begin = end;
    }
    return out;
}

inline std::vector<std::size_t> generation_counts(const std::vector<OrbitDisk>& disks) {
    std::vector<std::size_t> c;
    for (const auto& d : disks) {
        if (std::size_t(d.generation) >= c.size()) c.resize(d.generation + 1, 0);
        ++c[d.generation];
    }
    return c;
}

/// Distinct group elements of word length <= maxlen, deduplicated by their
/// action on probe points; each keeps its first (shortest) word.
inline std::vector<std::pair<Word, MobiusMap>> group_elements(const CirclePacking& p, int maxlen,
                                                              double tol = default_tol) {
    static const std::array<SpherePoint, 3> probes = {SpherePoint(cplx(0.3, 0.1)), SpherePoint(cplx(-0.2, 0.7)),
                                                      SpherePoint(cplx(1.1, -0.4))};
    std::vector<std::pair<Word, MobiusMap>> out;
    std::map<std::array<long long, 3>, std::vector<std::size_t>> buckets;
    const double cell = std::max(tol * 100, 1e-7);
    for_each_word(int(p.dual_disks.size()), maxlen, [&](const Word& w) {
        const MobiusMap m = word_map(p, w);
        const Vec3 img = m(probes[0]).to_sphere();
        const std::array<long long, 3> key{(long long)std::floor(img.x / cell), (long long)std::floor(img.y / cell),
                                           (long long)std::floor(img.z / cell)};
        // the key only buckets; equality is decided on all probes
        for (int n = 0; n < 27; ++n) {
            auto k2 = key;
            k2[0] += n % 3 - 1;
            k2[1] += (n / 3) % 3 - 1;
            k2[2] += n / 9 - 1;
            auto it = buckets.find(k2);
            if (it == buckets.end()) continue;
            for (std::size_t idx : it->second)
                if (out[idx].second.anti() == m.anti()) {
                    double d = 0;
                    for (int k = 0; k < 3; ++k) d = std::max(d, chordal(out[idx].second(probes[k]), m(probes[k])));
                    if (d < tol) return;
                }
        }
        buckets[key].push_back(out.size());
        out.push_back({w, m});
    });
    return out;
}

struct Mapped {
    SpherePoint point;
    int face;
};
struct InTile {};
using NielsenResult = std::variant<Mapped, InTile>;

struct NielsenOptions {
    double singular_tol = default_tol;  // chordal radius around the tangency points
    double boundary_tol = 1e-12;        // closed-disk slack
};

/// One step of the Nielsen map: R_f on the closed dual disk D_f, lowest face
/// id first on overlaps.
inline NielsenResult nielsen_step(const CirclePacking& p, const SpherePoint& z, const NielsenOptions& opt = {}) {
    for (const auto& [e, t] : p.tangencies)
        if (chordal(z, t) < opt.singular_tol) throw singular_point();
    for (std::size_t f = 0; f < p.dual_disks.size(); ++f)
        if (p.dual_disks[f].contains(z, opt.boundary_tol)) return Mapped{face_reflection(p, int(f))(z), int(f)};
    return InTile{};
}

struct OrbitClassification {
    enum class Outcome { Escaped, Undecided };
    Outcome outcome = Outcome::Undecided;
    int step = 0;              // escape time, or the budget when undecided
    int tile_component = -1;   // vertex whose disk holds the tile point
    bool singular = false;     // orbit hit a tangency point of the dual disks
    Word code;                 // faces applied, in order

    bool escaped() const { return outcome == Outcome::Escaped; }
};

/// Vertex whose closed disk contains z, or -1.
inline int tile_component(const CirclePacking& p, const SpherePoint& z) {
    int best = -1;
    double depth = 1e-9;
    for (std::size_t v = 0; v < p.disks.size(); ++v) {
        const double s = p.disks[v].signed_distance(z);
        if (s <= depth) {
            depth = s;
            best = int(v);
        }
    }
    return best;
}

/// Iterates the Nielsen map until the orbit lands in the fundamental tile.
/// Tangency points of the dual disks lie in the limit set, so an orbit that
/// reaches one is reported Undecided with the singular flag set.
inline OrbitClassification classify(const CirclePacking& p, SpherePoint z, int maxiter, const NielsenOptions& opt = {}) {
    OrbitClassification c;
    for (int step = 0;; ++step) {
        NielsenResult r;
        try {
            r = nielsen_step(p, z, opt);
        } catch (const singular_point&) {
            c.outcome = OrbitClassification::Outcome::Undecided;
            c.step = maxiter;
            c.singular = true;
            return c;
        }
        if (std::holds_alternative<InTile>(r)) {
            c.outcome = OrbitClassification::Outcome::Escaped;
            c.step = step;
            c.tile_component = tile_component(p, z);
            return c;
        }
        if (step >= maxiter) {
            c.step = maxiter;
            return c;
        }
        const auto& m = std::get<Mapped>(r);
        z = m.point;
        c.code.push_back(m.face);
    }
}

/// The first maxiter+1 points of the Nielsen orbit (shorter if it reaches
/// the tile). Throws singular_point.
inline std::vector<SpherePoint> nielsen_orbit(const CirclePacking& p, SpherePoint z, int maxiter,
                                              const NielsenOptions& opt = {}) {
    std::vector<SpherePoint> orbit{z};
    for (int k = 0; k < maxiter; ++k) {
        const auto r = nielsen_step(p, z, opt);
        if (std::holds_alternative<InTile>(r)) break;
        z = std::get<Mapped>(r).point;
        orbit.push_back(z);
    }
    return orbit;
}

/// Times (n1, n2) with N^n1(z) = N^n2(w(z)) within tol, if the orbits merge.
inline std::optional<std::pair<int, int>> orbit_merge(const CirclePacking& p, const SpherePoint& z, const Word& w,
                                                      int maxiter, double tol = 1e-8) {
    const auto a = nielsen_orbit(p, z, maxiter);
    const auto b = nielsen_orbit(p, word_map(p, w)(z), maxiter);
    for (std::size_t total = 0; total <= a.size() + b.size(); ++total)
        for (std::size_t i = 0; i <= total && i < a.size(); ++i) {
            const std::size_t j = total - i;
            if (j < b.size() && chordal(a[i], b[j]) < tol) return std::pair{int(i), int(j)};
        }
    return std::nullopt;
}

inline bool orbit_equivalence_check(const CirclePacking& p, const SpherePoint& z, const Word& w, int maxiter,
                                    double tol = 1e-8) {
    return orbit_merge(p, z, w, maxiter, tol).has_value();
}

/// Counts of consecutive letter pairs over a set of codes.
inline std::vector<std::vector<long>> transition_counts(const std::vector<Word>& codes, int faces) {
    std::vector<std::vector<long>> m(faces, std::vector<long>(faces, 0));
    for (const auto& c : codes)
        for (std::size_t k = 1; k < c.size(); ++k) ++m[c[k - 1]][c[k]];
    return m;
}

/// True when the observed transitions are exactly the off-diagonal pairs.
inline bool is_full_offdiagonal(const std::vector<std::vector<long>>& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if ((i == j) != (m[i][j] == 0)) return false;
    return true;
}

/// Largest chordal diameter of the stage-n interstice triangles: images
/// h(T_f) of the tangency triangle of face f under reduced words of length n
/// whose last letter is not f.
inline double interstice_max_diameter(const CirclePacking& p, int n) {
    const int nf = int(p.dual_disks.size());
    double best = 0;
    auto visit = [&](const Word& w, const MobiusMap& m) {
        for (int f = 0; f < nf; ++f) {
            if (!w.empty() && w.back() == f) continue;
            const auto t = p.face_tangencies(f);
            const SpherePoint a = m(t[0]), b = m(t[1]), c = m(t[2]);
            best = std::max({best, chordal(a, b), chordal(b, c), chordal(a, c)});
        }
    };
    // depth-first over reduced words of length exactly n
    std::vector<MobiusMap> refl;
    for (int f = 0; f < nf; ++f) refl.push_back(face_reflection(p, f));
    Word w;
    auto rec = [&](auto& self, const MobiusMap& m) -> void {
        if (int(w.size()) == n) {
            visit(w, m);
            return;
        }
        for (int f = 0; f < nf; ++f) {
            if (!w.empty() && w.back() == f) continue;
            w.push_back(f);
            self(self, m.compose(refl[f]));
            w.pop_back();
        }
    };
    rec(rec, MobiusMap{});
    return best;
}

struct GasketRenderOptions {
    int maxiter = 50;
    int threads = 0;
};

/// Undecided pixels are black; escaped pixels take the colour of the tile
/// component they land in, darkened by escape time.
inline RasterImage render_limit_set(const CirclePacking& p, const Region& region, int res,
                                    const GasketRenderOptions& opt = {}) {
    const auto [w, h] = raster_size(region, res);
    return render_rows(w, h, opt.threads, [&, w = w, h = h](int i, int j) {
        const auto c = classify(p, SpherePoint(pixel_point(region, w, h, i, j)), opt.maxiter);
        if (!c.escaped()) return palette::limit;
        const auto base = palette::categorical[std::size_t(std::max(c.tile_component, 0)) % palette::categorical.size()];
        return palette::shade(base, c.step, opt.maxiter);
    });
}

}  // namespace gasket
