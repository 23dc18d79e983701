#pragma once

#include <complex>
#include <random>
#include <variant>

#include <gtest/gtest.h>

#include <gasketlab/geometry.hpp>

namespace gasket::testing {

// Circles compared by their defining parameters; lines up to the sign of
// the (normal, offset) pair.
inline ::testing::AssertionResult same_curve(const GenCircle& got, const GenCircle& want, double tol) {
    if (const auto* w = std::get_if<Circle>(&want)) {
        const auto* g = std::get_if<Circle>(&got);
        if (!g) return ::testing::AssertionFailure() << "expected a circle, got a line";
        const double e = std::max(std::abs(g->center - w->center), std::abs(g->radius - w->radius));
        if (e <= tol) return ::testing::AssertionSuccess();
        return ::testing::AssertionFailure() << "circle center " << g->center << " radius " << g->radius
                                             << ", expected " << w->center << " radius " << w->radius;
    }
    const auto* g = std::get_if<Line>(&got);
    if (!g) return ::testing::AssertionFailure() << "expected a line, got a circle";
    const auto& w = std::get<Line>(want);
    const double e1 = std::max(std::abs(g->normal - w.normal), std::abs(g->offset - w.offset));
    const double e2 = std::max(std::abs(g->normal + w.normal), std::abs(g->offset + w.offset));
    if (std::min(e1, e2) <= tol) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "line normal " << g->normal << " offset " << g->offset << ", expected "
                                         << w.normal << " offset " << w.offset;
}

inline cplx random_point(std::mt19937& rng, double r = 3.0) {
    std::uniform_real_distribution<double> u(-r, r);
    return {u(rng), u(rng)};
}

inline GenCircle random_circle(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < 0.2) return Line{std::polar(1.0, 6.283185307179586 * u(rng)), 4 * u(rng) - 2};
    return Circle{random_point(rng, 2.0), 0.2 + 2 * u(rng)};
}

}  // namespace gasket::testing
