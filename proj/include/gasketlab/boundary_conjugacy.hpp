#pragma once

// Farey / Stern-Brocot arithmetic: the box function (inverse Minkowski
// question mark) on dyadics, its inverse, Farey levels and Ford circles, the
// interval-ratio and scalewise-distortion statistics, and the circle
// conjugacy between conj(z)^2 and the ideal-triangle Nielsen map.
//
// Dyadic level n means denominators 2^n; Farey level n is the image of the
// level-n dyadics, 2^n + 1 fractions from 0/1 to 1/1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fraction.hpp"
#include "geometry.hpp"

namespace gasket {

class precision_unreachable : public std::runtime_error {
public:
    precision_unreachable() : std::runtime_error("precision unreachable within the integer or digit budget") {}
};

class level_too_large : public std::invalid_argument {
public:
    explicit level_too_large(int n) : std::invalid_argument("level " + std::to_string(n) + " is too large") {}
};

class not_in_image : public std::invalid_argument {
public:
    not_in_image() : std::invalid_argument("argument outside [0, 1]") {}
};

/// k / 2^n, not necessarily reduced.
struct Dyadic {
    std::uint64_t k = 0;
    int n = 0;

    Dyadic reduced() const {
        Dyadic d = *this;
        while (d.n > 0 && d.k % 2 == 0) {
            d.k /= 2;
            --d.n;
        }
        return d;
    }
    Fraction fraction() const { return Fraction(BigInt(k), BigInt(1) << n); }
    double to_double() const { return std::ldexp(double(k), -n); }
};

/// The orientation-reversing doubling map x -> -2x mod 1 on dyadics.
inline Dyadic m_minus2(Dyadic x) {
    if (x.n == 0) return {0, 0};
    const std::uint64_t full = std::uint64_t(1) << x.n;
    const std::uint64_t k = x.k % full;
    // -2k mod 2^n, as a level-(n-1) dyadic
    const std::uint64_t half = full >> 1;
    return Dyadic{(half - (k % half)) % half, x.n - 1}.reduced();
}

template <class Int>
basic_fraction<Int> m_minus2(const basic_fraction<Int>& x) {
    const basic_fraction<Int> half(Int(1), Int(2));
    if (x < half) return (basic_fraction<Int>(1) - basic_fraction<Int>(2) * x).mod1();
    return (basic_fraction<Int>(2) - basic_fraction<Int>(2) * x).mod1();
}

inline double m_minus2(double x) {
    double y = std::fmod(-2.0 * x, 1.0);
    if (y < 0) y += 1.0;
    return y;
}

/// Conway box function at k/2^n by walking the binary digits through
/// Farey mediants.
template <class Int = BigInt>
basic_fraction<Int> box_dyadic(Dyadic x) {
    x = x.reduced();
    if (x.n >= 63) throw level_too_large(x.n);
    if (x.k > (std::uint64_t(1) << x.n)) throw not_in_image();
    if (x.n == 0) return basic_fraction<Int>(Int(std::int64_t(x.k)));
    Int lp = 0, lq = 1, rp = 1, rq = 1;
    for (int bit = x.n - 1; bit >= 1; --bit) {
        const Int mp = lp + rp, mq = lq + rq;
        if ((x.k >> bit) & 1) {
            lp = mp;
            lq = mq;
        } else {
            rp = mp;
            rq = mq;
        }
    }
    return basic_fraction<Int>(lp + rp, lq + rq);
}

/// Minkowski question mark on rationals in [0, 1]: the Stern-Brocot path read
/// as binary digits. Exact inverse of box_dyadic; rationals whose dyadic
/// image lies beyond level 62 raise level_too_large.
template <class Int>
Dyadic questionmark(const basic_fraction<Int>& x) {
    const basic_fraction<Int> zero(0), one(1);
    if (x < zero || x > one) throw not_in_image();
    if (x == zero) return {0, 0};
    if (x == one) return {1, 0};
    basic_fraction<Int> l = zero, r = one;
    std::uint64_t k = 1;  // midpoint numerator at the current level
    int n = 1;
    while (true) {
        const auto m = mediant(l, r);
        if (x == m) return Dyadic{k, n}.reduced();
        if (n >= 62) throw level_too_large(n + 1);
        if (x < m) {
            r = m;
            k = 2 * k - 1;
        } else {
            l = m;
            k = 2 * k + 1;
        }
        ++n;
    }
}

namespace detail {

template <class Int>
double box_nested(const std::function<int()>& next_digit, int max_digits, double precision, bool exact_end) {
    // Farey interval [l, r] over the dyadic interval of the digits read so far
    Int lp = 0, lq = 1, rp = 1, rq = 1;
    for (int d = 0; d < max_digits; ++d) {
        // r - l = 1 / (lq * rq) for Farey neighbours
        if (1.0 / (double(lq) * double(rq)) < precision)
            return 0.5 * (double(lp) / double(lq) + double(rp) / double(rq));
        const int bit = next_digit();
        if (bit < 0) {  // the expansion ended: x is the left endpoint
            if (exact_end) return double(lp) / double(lq);
            break;
        }
        const Int mp = lp + rp, mq = lq + rq;
        if (bit) {
            lp = mp;
            lq = mq;
        } else {
            rp = mp;
            rq = mq;
        }
    }
    if (1.0 / (double(lq) * double(rq)) < 2 * precision)
        return 0.5 * (double(lp) / double(lq) + double(rp) / double(rq));
    throw precision_unreachable();
}

}  // namespace detail

/// Box function of a double in [0, 1] to within precision, by nesting Farey
/// intervals along the binary expansion. Dyadic doubles with short
/// expansions come out exact. Overflow of Int raises precision_unreachable.
template <class Int = CheckedInt>
double box_real(double x, double precision = 1e-15) {
    if (!(x >= 0.0 && x <= 1.0)) throw not_in_image();
    if (x == 1.0) return 1.0;
    double rest = x;
    auto next = [&rest]() -> int {
        if (rest == 0.0) return -1;
        rest *= 2.0;
        if (rest >= 1.0) {
            rest -= 1.0;
            return 1;
        }
        return 0;
    };
    try {
        return detail::box_nested<Int>(next, 1200, precision, true);
    } catch (const overflow_error&) {
        throw precision_unreachable();
    }
}

/// Box function of the number whose binary digits after the point are
/// produced by next_digit (0 or 1), reading at most max_digits of them.
template <class Int = CheckedInt>
double box_real(const std::function<int()>& next_digit, double precision = 1e-15, int max_digits = 64) {
    try {
        return detail::box_nested<Int>(next_digit, max_digits, precision, false);
    } catch (const overflow_error&) {
        throw precision_unreachable();
    }
}

/// Point of the extended real line: a fraction or infinity.
struct ExtFraction {
    Fraction value;
    bool infinite = false;

    static ExtFraction inf() { return {Fraction(0), true}; }
    friend bool operator==(const ExtFraction& a, const ExtFraction& b) {
        return a.infinite == b.infinite && (a.infinite || a.value == b.value);
    }
};

/// Nielsen map of the ideal triangle 0, 1, infinity in the upper half-plane,
/// on the boundary: reflection in Re t = 0, in |t - 1/2| = 1/2, in Re t = 1.
inline ExtFraction theta(const ExtFraction& t) {
    if (t.infinite) return ExtFraction::inf();
    const Fraction& x = t.value;
    if (x <= Fraction(0)) return {-x};
    if (x <= Fraction(1)) {
        const Fraction den = Fraction(2) * x - Fraction(1);
        if (den == Fraction(0)) return ExtFraction::inf();
        return {x / den};
    }
    return {Fraction(2) - x};
}

/// The Farey-side counterpart of m_minus2 on [0, 1].
template <class Int>
basic_fraction<Int> tau(const basic_fraction<Int>& t) {
    using F = basic_fraction<Int>;
    if (t < F(Int(1), Int(2))) return ((F(2) * t - F(1)) / (t - F(1))).mod1();
    return ((F(1) - t) / t).mod1();
}

inline double tau(double t) {
    double y = t < 0.5 ? (2 * t - 1) / (t - 1) : (1 - t) / t;
    y = std::fmod(y, 1.0);
    if (y < 0) y += 1.0;
    return y;
}

inline constexpr int max_farey_level = 24;

/// F_n with entry k equal to box_dyadic(k / 2^n). Farey denominators at
/// these levels stay below 2^17, so entries are stored as plain integers.
struct FareyLevel {
    int n = 0;
    std::vector<std::int64_t> p, q;

    std::size_t size() const { return p.size(); }
    Fraction fraction(std::size_t k) const { return Fraction(BigInt(p[k]), BigInt(q[k])); }
    Dyadic dyadic(std::size_t k) const { return {k, n}; }
    double value(std::size_t k) const { return double(p[k]) / double(q[k]); }
};

inline FareyLevel farey_level(int n) {
    if (n < 0 || n > max_farey_level) throw level_too_large(n);
    FareyLevel f{0, {0, 1}, {1, 1}};
    for (int level = 1; level <= n; ++level) {
        FareyLevel g{level, {}, {}};
        g.p.reserve(2 * f.size() - 1);
        g.q.reserve(2 * f.size() - 1);
        for (std::size_t k = 0; k + 1 < f.size(); ++k) {
            g.p.push_back(f.p[k]);
            g.q.push_back(f.q[k]);
            g.p.push_back(f.p[k] + f.p[k + 1]);
            g.q.push_back(f.q[k] + f.q[k + 1]);
        }
        g.p.push_back(f.p.back());
        g.q.push_back(f.q.back());
        f = std::move(g);
    }
    return f;
}

struct FordCircle {
    Fraction at;      // tangency point p/q on the real line
    Fraction cx, cy;  // centre
    Fraction radius;
};

inline FordCircle ford_circle(const Fraction& x) {
    const Fraction r(BigInt(1), BigInt(2) * x.den() * x.den());
    return {x, x, r, r};
}

/// Tangent iff |ps - qr| = 1.
inline bool ford_tangent(const FordCircle& a, const FordCircle& b) {
    BigInt d = a.at.num() * b.at.den() - a.at.den() * b.at.num();
    if (d < 0) d = -d;
    return d == 1;
}

/// Exact check that the squared centre distance equals the squared radius sum.
inline bool ford_touch_exact(const FordCircle& a, const FordCircle& b) {
    const Fraction dx = a.cx - b.cx, dy = a.cy - b.cy, s = a.radius + b.radius;
    return dx * dx + dy * dy == s * s;
}

struct IntervalPair {
    std::size_t i = 0, j = 0;  // interval indices; interval k is [F_k, F_{k+1}]
    Fraction ratio;            // max(|I|/|J|, |J|/|I|)
};

struct IntervalRatioStats {
    int n = 0;
    IntervalPair adjacent;            // separation 0
    IntervalPair within_two;          // separation 0, 1 or 2
    IntervalPair lower_generation;    // adjacent, common endpoint born at a lower level
};

/// Level at which Farey entry k of level n first appears.
inline int farey_generation(std::size_t k, int n) {
    if (k == 0 || k == (std::size_t(1) << n)) return 0;
    int g = n;
    while (k % 2 == 0) {
        k /= 2;
        --g;
    }
    return g;
}

/// Ratios of lengths of the complementary intervals of F_n; the length of
/// [p/q, r/s] is 1/(qs), so every ratio is a ratio of denominator products.
inline IntervalRatioStats interval_ratio_stats(int n) {
    if (n < 1 || n > 20) throw level_too_large(n);
    const auto f = farey_level(n);
    const std::size_t m = f.size() - 1;  // number of intervals
    IntervalRatioStats st;
    st.n = n;
    st.adjacent.ratio = st.within_two.ratio = st.lower_generation.ratio = Fraction(0);
    auto ratio = [&](std::size_t i, std::size_t j) {
        // |I_i| / |I_j| = q_j q_{j+1} / (q_i q_{i+1})
        const BigInt a = BigInt(f.q[j]) * f.q[j + 1], b = BigInt(f.q[i]) * f.q[i + 1];
        return a > b ? Fraction(a, b) : Fraction(b, a);
    };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t sep = 0; sep <= 2 && i + 1 + sep < m; ++sep) {
            const std::size_t j = i + 1 + sep;
            // ratio > current max without building fractions for the common case
            const Fraction r = ratio(i, j);
            if (sep == 0 && r > st.adjacent.ratio) st.adjacent = {i, j, r};
            if (r > st.within_two.ratio) st.within_two = {i, j, r};
            if (sep == 0 && farey_generation(j, n) < n && r > st.lower_generation.ratio)
                st.lower_generation = {i, j, r};
        }
    return st;
}

/// Scalewise distortion of the box function at t = 2^-n: the largest
/// symmetric difference-quotient ratio max(A/B, B/A) with
/// A = H(x+t) - H(x), B = H(x) - H(x-t), over x in [t, 1-t] on the
/// level-(n+4) dyadic grid (exact values) and at the non-dyadic probes
/// x + 2^-(n+4)/3 (box_real). A grid supremum, hence a lower bound.
inline double scalewise_distortion(int n, int extra_levels = 4) {
    if (n < 1 || n + extra_levels > 20) throw level_too_large(n);
    const int level = n + extra_levels;
    const auto f = farey_level(level);
    const std::size_t step = std::size_t(1) << extra_levels;  // t in grid units
    const std::size_t last = f.size() - 1;
    double rho = 1.0;
    for (std::size_t k = step; k + step <= last; ++k) {
        const double a = f.value(k + step) - f.value(k);
        const double b = f.value(k) - f.value(k - step);
        rho = std::max({rho, a / b, b / a});
    }
    const double t = std::ldexp(1.0, -n), h = std::ldexp(1.0, -level) / 3.0;
    for (std::size_t k = step; k + step < last; ++k) {
        const double x = std::ldexp(double(k), -level) + h;
        const double hx = box_real(x), a = box_real(x + t) - hx, b = hx - box_real(x - t);
        if (a > 0 && b > 0) rho = std::max({rho, a / b, b / a});
    }
    return rho;
}

/// The Mobius chart with 0, 1, infinity -> 1, omega, omega^2.
inline const MobiusMap& circle_chart() {
    static const MobiusMap m = mobius_from_triples({SpherePoint(0.0), SpherePoint(1.0), SpherePoint::infinity()},
                                                   {SpherePoint(1.0), SpherePoint(omega), SpherePoint(omega * omega)},
                                                   false);
    return m;
}

inline double angle_of(cplx z) {
    double a = std::arg(z) / (2 * std::numbers::pi);
    if (a < 0) a += 1.0;
    if (a >= 1.0) a -= 1.0;
    return a;
}

/// Circle homeomorphism h (angles in turns) conjugating conj(z)^2 to the
/// ideal-triangle Nielsen map: h(y) = arg m(box(3y)) on [0, 1/3], extended
/// by h(y + 1/3) = h(y) + 1/3.
inline double circle_conjugacy_h(double y, double precision = 1e-15) {
    y = std::fmod(y, 1.0);
    if (y < 0) y += 1.0;
    int k = int(std::floor(3.0 * y));
    if (k > 2) k = 2;
    double x = 3.0 * y - k;  // exact for dyadic y with few bits
    x = std::clamp(x, 0.0, 1.0);
    const SpherePoint w = circle_chart()(SpherePoint(box_real(x, precision)));
    double a = angle_of(w.value());
    // arc 0 is [0, 1/3]; the endpoint 1/3 may come back as a tiny negative angle wrap
    if (x == 0.0) a = 0.0;
    else if (x == 1.0) a = 1.0 / 3.0;
    a += k / 3.0;
    return a >= 1.0 ? a - 1.0 : a;
}

/// Ideal-triangle reflection group circles: centres 2 e^{i pi (2k+1)/3}, radius sqrt3.
inline Circle ideal_triangle_circle(int k) {
    return {2.0 * std::polar(1.0, std::numbers::pi * (2 * k + 1) / 3.0), std::sqrt(3.0)};
}

/// Nielsen map of the ideal triangle on the unit circle: reflection in the
/// circle over the arc containing the point.
inline cplx rho2(cplx z) {
    int k = int(std::floor(3.0 * angle_of(z)));
    if (k > 2) k = 2;
    return reflect_in_circle(ideal_triangle_circle(k), SpherePoint(z)).value();
}

inline cplx g2_on_circle(cplx z) { return std::conj(z) * std::conj(z); }

inline cplx turn(double a) { return std::polar(1.0, 2 * std::numbers::pi * a); }

}  // namespace gasket
