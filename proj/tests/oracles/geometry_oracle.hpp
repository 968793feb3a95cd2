#pragma once

// Brute-force geometry for the annulus {r_in <= |x - center| <= r_out} in the
// plane and secant estimates of boundary normals.

#include "splitstab/constraint_set.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace oracle
{

using splitstab::Vector;

// Nearest point of the planar annulus over a polar grid.
inline Vector annulus_nearest_grid(const Vector& center, double r_in, double r_out, const Vector& x,
                                   int radial = 2000, int angular = 4000)
{
    double best = std::numeric_limits<double>::infinity();
    Vector arg = center;
    for (int i = 0; i <= radial; ++i)
    {
        const double rho = r_in + (r_out - r_in) * i / radial;
        for (int j = 0; j < angular; ++j)
        {
            const double phi = 2.0 * std::numbers::pi * j / angular;
            Vector p(2);
            p << center(0) + rho * std::cos(phi), center(1) + rho * std::sin(phi);
            const double dist = (p - x).norm();
            if (dist < best)
            {
                best = dist;
                arg = p;
            }
        }
    }
    return arg;
}

// Nearest point along the ray from the center through x, radius on a grid.
inline double annulus_radial_distance(const Vector& center, double r_in, double r_out, const Vector& x,
                                      int steps = 200000)
{
    const double t = (x - center).norm();
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i)
    {
        const double rho = r_in + (r_out - r_in) * i / steps;
        best = std::min(best, std::abs(rho - t));
    }
    return best;
}

// Outward normal of a planar set at a boundary point from secants: boundary
// points are located by bisection along two transversal lines, the tangent is
// their difference, and the sign is chosen so that stepping along the normal
// leaves the set.
inline Vector secant_normal(const std::function<bool(const Vector&)>& inside, const Vector& xbar,
                            const Vector& guess_normal, double h = 1e-6)
{
    Vector n = guess_normal.normalized();
    Vector t(2);
    t << -n(1), n(0);
    const auto boundary_near = [&](double s) {
        // Bisection on xbar + s t + lambda n between an inside and an outside point.
        double lo = -10.0 * h;
        double hi = 10.0 * h;
        const auto at = [&](double lambda) -> Vector { return xbar + s * t + lambda * n; };
        bool lo_in = inside(at(lo));
        for (int i = 0; i < 200; ++i)
        {
            const double mid = 0.5 * (lo + hi);
            if (inside(at(mid)) == lo_in)
            {
                lo = mid;
            }
            else
            {
                hi = mid;
            }
        }
        return at(0.5 * (lo + hi));
    };
    const Vector tangent = (boundary_near(h) - boundary_near(-h)).normalized();
    Vector normal(2);
    normal << -tangent(1), tangent(0);
    if (inside(xbar + 1e3 * h * normal))
    {
        normal = -normal;
    }
    return normal;
}

} // namespace oracle
