#pragma once

// Dense complex polynomials and simultaneous root finding.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace gasket {

/// Coefficients in increasing degree: p(z) = sum c[k] z^k.
using Poly = std::vector<std::complex<double>>;

inline std::complex<double> poly_eval(const Poly& p, std::complex<double> z) {
    std::complex<double> acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
    return acc;
}

inline Poly poly_derivative(const Poly& p) {
    Poly d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * double(k));
    return d;
}

inline Poly poly_mul(const Poly& p, const Poly& q) {
    if (p.empty() || q.empty()) return {};
    Poly r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

inline Poly poly_add(const Poly& p, const Poly& q) {
    Poly r(std::max(p.size(), q.size()), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) r[i] += p[i];
    for (std::size_t i = 0; i < q.size(); ++i) r[i] += q[i];
    return r;
}

inline Poly poly_scale(const Poly& p, std::complex<double> s) {
    Poly r = p;
    for (auto& c : r) c *= s;
    return r;
}

inline std::size_t poly_degree(const Poly& p) {
    std::size_t d = p.size();
    while (d > 0 && p[d - 1] == std::complex<double>(0.0, 0.0)) --d;
    if (d == 0) throw std::invalid_argument("zero polynomial has no degree");
    return d - 1;
}

namespace detail {

inline void newton_polish(const Poly& p, const Poly& dp, std::complex<double>& z) {
    for (int it = 0; it < 4; ++it) {
        const auto d = poly_eval(dp, z);
        if (std::abs(d) == 0) return;
        const auto step = poly_eval(p, z) / d;
        if (!std::isfinite(std::abs(step))) return;
        const auto cand = z - step;
        if (std::abs(poly_eval(p, cand)) <= std::abs(poly_eval(p, z))) z = cand;
        else return;
    }
}

}  // namespace detail

/// All complex roots (with multiplicity) by Aberth-Ehrlich iteration.
inline std::vector<std::complex<double>> poly_roots(Poly p) {
    const std::size_t n = poly_degree(p);
    p.resize(n + 1);
    if (n == 0) return {};
    const auto lead = p[n];
    for (auto& c : p) c /= lead;
    const Poly dp = poly_derivative(p);

    // Cauchy bound sets the starting radius
    double bound = 0;
    for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, std::abs(p[k]));
    const double radius = std::min(1.0 + bound, 1e6);
    std::vector<std::complex<double>> z(n);
    for (std::size_t k = 0; k < n; ++k)
        z[k] = std::polar(radius * 0.5 + 0.25, 2 * std::numbers::pi * (double(k) + 0.25) / double(n) + 0.4);

    for (int iter = 0; iter < 500; ++iter) {
        double worst = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto pv = poly_eval(p, z[k]);
            const auto dv = poly_eval(dp, z[k]);
            if (pv == std::complex<double>(0.0, 0.0)) continue;
            const auto ratio = pv / dv;
            std::complex<double> sum = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) sum += 1.0 / (z[k] - z[j]);
            const auto w = ratio / (1.0 - ratio * sum);
            if (!std::isfinite(std::abs(w))) continue;
            z[k] -= w;
            worst = std::max(worst, std::abs(w) / std::max(1.0, std::abs(z[k])));
        }
        if (worst < 1e-15) break;
    }
    for (auto& r : z) detail::newton_polish(p, dp, r);
    return z;
}

}  // namespace gasket
