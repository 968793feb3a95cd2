#include "oracles/geometry_oracle.hpp"

#include "splitstab/constraint_set.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

using namespace splitstab;
using Catch::Matchers::WithinAbs;

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector vec(std::initializer_list<double> v)
{
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (const double x : v)
    {
        out(i++) = x;
    }
    return out;
}

// {x : x1 <= x2^2}
ConstraintSet omega1()
{
    Matrix P(2, 2);
    P << 0, 0, 0, -1;
    return ConstraintSet::quadratic(P, vec({1, 0}), 0.0, -kInf, 0.0);
}

// {x : 2 <= |x|^2 <= 5}
ConstraintSet omega2()
{
    return ConstraintSet::quadratic(Matrix::Identity(2, 2), Vector::Zero(2), 0.0, 2.0, 5.0);
}

Vector unit(const Vector& v)
{
    return v / v.norm();
}

// Angle between the generator of a ray and a direction.
double ray_angle(const Cone& k, const Vector& dir)
{
    const ConeSummary s = classify(k);
    REQUIRE(s.kind == ConeClass::Ray);
    return std::acos(std::clamp(unit(*s.direction).dot(unit(dir)), -1.0, 1.0));
}

std::vector<Vector> sample_set(const ConstraintSet& s, int count, double half_width, unsigned seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-half_width, half_width);
    std::vector<Vector> out;
    for (int tries = 0; static_cast<int>(out.size()) < count && tries < 1000 * count; ++tries)
    {
        Vector x(s.dim());
        for (Eigen::Index i = 0; i < x.size(); ++i)
        {
            x(i) = u(gen);
        }
        if (contains(s, x, 0.0))
        {
            out.push_back(x);
        }
    }
    return out;
}

// Largest <g, x - xbar> / (|g| |x - xbar|) over set points within radius rho of xbar.
double regular_normal_quotient(const ConstraintSet& s, const Vector& xbar, const Vector& g, double rho,
                               unsigned seed)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> u01;
    double worst = -kInf;
    int found = 0;
    for (int tries = 0; found < 10000 && tries < 100000; ++tries)
    {
        Vector d(xbar.size());
        for (Eigen::Index i = 0; i < d.size(); ++i)
        {
            d(i) = normal(gen);
        }
        d *= rho * std::pow(u01(gen), 1.0 / static_cast<double>(d.size())) / d.norm();
        if (d.norm() == 0.0 || !contains(s, xbar + d, 0.0))
        {
            continue;
        }
        ++found;
        worst = std::max(worst, g.dot(d) / (g.norm() * d.norm()));
    }
    REQUIRE(found > 1000);
    return worst;
}

struct NamedSet
{
    const char* name;
    ConstraintSet set;
};

std::vector<NamedSet> projectable_sets()
{
    Matrix rows(2, 2);
    rows << 1, 1, -1, 2;
    return {
        {"box", ConstraintSet::box(vec({-1, 0}), vec({1, kInf}))},
        {"orthant", ConstraintSet::orthant(3)},
        {"singleton", ConstraintSet::singleton(vec({0.5, -0.5}))},
        {"halfspace", ConstraintSet::polyhedron(Matrix(rows.topRows(1)), vec({1}))},
        {"polyhedron", ConstraintSet::polyhedron(rows, vec({1, 2}))},
        {"ball", ConstraintSet::quadratic(Matrix::Identity(2, 2), Vector::Zero(2), 0.0, -kInf, 2.0)},
        {"annulus", omega2()},
        {"omega1", omega1()},
        {"product", ConstraintSet::product({ConstraintSet::box(vec({-1}), vec({1})), omega2()})},
    };
}

} // namespace

TEST_CASE("contains", "[set]")
{
    CHECK(contains(omega1(), vec({1, 1}), 1e-12));
    CHECK_FALSE(contains(ConstraintSet::orthant(1), vec({-1}), 0.5));
    const double s = std::sqrt(3.0);
    const Vector xhat = vec({(1 - s) / 2, (1 + s) / 2});
    // |xhat|^2 = ((1 - s)^2 + (1 + s)^2) / 4 = (2 + 2 s^2) / 4 = 2
    CHECK_THAT(xhat.squaredNorm(), WithinAbs(2.0, 1e-14));
    CHECK(contains(omega2(), xhat, 1e-12));
    CHECK_THROWS_AS(contains(omega1(), vec({1}), 1e-12), Error);
}

TEST_CASE("normal cone examples", "[set]")
{
    const Cone k = normal_cone(omega1(), vec({1, 1}));
    CHECK(ray_angle(k, vec({1, -2})) < 1e-12);
    CHECK(describe(k) == "ray, generator (1,-2)");

    CHECK(classify(normal_cone(omega1(), vec({-1, 0}))).kind == ConeClass::Zero);

    const Cone o = normal_cone(ConstraintSet::orthant(1), vec({0}));
    CHECK(member(o, vec({-1}), 1e-12));
    CHECK_FALSE(member(o, vec({1}), 1e-9));

    CHECK(classify(normal_cone(ConstraintSet::singleton(vec({1, 2})), vec({1, 2}))).kind == ConeClass::Full);

    Matrix P = Matrix::Identity(2, 2);
    const ConstraintSet circle = ConstraintSet::quadratic(P, Vector::Zero(2), 0.0, 2.0, 2.0);
    CHECK(classify(normal_cone(circle, vec({1, 1}))).kind == ConeClass::Line);
}

TEST_CASE("annulus inner normal agrees with a secant estimate", "[set]")
{
    const ConstraintSet s = omega2();
    const auto inside = [&](const Vector& x) { return contains(s, x, 0.0); };
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (int t = 0; t < 20; ++t)
    {
        const double phi = angle(gen);
        const Vector x = std::sqrt(2.0) * vec({std::cos(phi), std::sin(phi)});
        const Vector n = oracle::secant_normal(inside, x, -x);
        CHECK(ray_angle(normal_cone(s, x), n) < 1e-4);
        // Outer boundary as well.
        const Vector y = std::sqrt(5.0) * vec({std::cos(phi), std::sin(phi)});
        CHECK(ray_angle(normal_cone(s, y), oracle::secant_normal(inside, y, y)) < 1e-4);
    }
}

TEST_CASE("normal cone errors", "[set]")
{
    CHECK_THROWS_MATCHES(normal_cone(omega1(), vec({2, 1})), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrorKind::PointNotInSet;
                         }));
    // {x : x1^2 <= 0} has a vanishing gradient on its whole boundary.
    Matrix P(2, 2);
    P << 1, 0, 0, 0;
    const ConstraintSet flat = ConstraintSet::quadratic(P, Vector::Zero(2), 0.0, -kInf, 0.0);
    CHECK_THROWS_MATCHES(normal_cone(flat, vec({0, 3})), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrorKind::QualificationFailure;
                         }));
}

TEST_CASE("normal cone at interior points is zero", "[set]")
{
    for (const auto& [name, s] : projectable_sets())
    {
        if (std::string(name) == "singleton")
        {
            continue;
        }
        INFO(name);
        for (const Vector& x : sample_set(s, 50, 3.0, 17))
        {
            // Rejection samples are interior with probability one.
            CHECK(is_trivial(normal_cone(s, x)).trivial);
        }
    }
}

TEST_CASE("normal cone generators satisfy the regular normal inequality", "[set]")
{
    // Polyhedral pieces: the quotient is exactly nonpositive.
    Matrix rows(2, 2);
    rows << 1, 1, -1, 2;
    const ConstraintSet poly = ConstraintSet::polyhedron(rows, vec({1, 2}));
    const Vector corner = vec({0, 1});
    const Cone kp = normal_cone(poly, corner);
    for (Eigen::Index j = 0; j < kp.G().cols(); ++j)
    {
        CHECK(regular_normal_quotient(poly, corner, kp.G().col(j), 1e-3, 1) <= 1e-6);
    }

    // Curved boundaries: the quotient is bounded by curvature times the radius,
    // so it vanishes in the limit.
    const std::vector<std::pair<ConstraintSet, Vector>> curved = {
        {omega1(), vec({1, 1})},
        {omega1(), vec({4, 2})},
        {omega2(), vec({1, 1})},
        {omega2(), vec({std::sqrt(5.0), 0})},
    };
    for (const auto& [s, x] : curved)
    {
        const Vector g = *classify(normal_cone(s, x)).direction;
        for (const double rho : {1e-3, 1e-5, 1e-7})
        {
            const double q = regular_normal_quotient(s, x, g, rho, 2);
            CHECK(q <= 2.0 * rho);
        }
        CHECK(regular_normal_quotient(s, x, g, 1e-7, 3) <= 1e-6);
    }
}

TEST_CASE("product rule for normal cones", "[set]")
{
    const ConstraintSet a = omega1();
    const ConstraintSet b = ConstraintSet::orthant(1);
    const ConstraintSet ab = ConstraintSet::product({a, b});
    const Cone k = normal_cone(ab, vec({1, 1, 0}));
    CHECK(member(k, vec({1, -2, -1}), 1e-12));
    CHECK(member(k, vec({0, 0, -1}), 1e-12));
    CHECK_FALSE(member(k, vec({1, -2, 1}), 1e-9));
    CHECK_FALSE(member(k, vec({1, 0, 0}), 1e-9));
    const Cone expected = product(normal_cone(a, vec({1, 1})), normal_cone(b, vec({0})));
    std::mt19937_64 gen(8);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int t = 0; t < 50; ++t)
    {
        const Vector z = vec({double(coef(gen)), double(coef(gen)), double(coef(gen))});
        CHECK(member(k, z, 1e-9) == member(expected, z, 1e-9));
    }
}

TEST_CASE("projection examples", "[set]")
{
    CHECK(project(ConstraintSet::orthant(2), vec({-1, 2})).isApprox(vec({0, 2})));
    const Vector p = project(omega2(), vec({0.1, 0}));
    CHECK((p - vec({std::sqrt(2.0), 0})).norm() < 1e-12);
    const Vector grid = oracle::annulus_nearest_grid(Vector::Zero(2), std::sqrt(2.0), std::sqrt(5.0), vec({0.1, 0}));
    CHECK((p - grid).norm() < 1e-3);
    CHECK_THAT(distance(omega2(), vec({0.1, 0})),
               WithinAbs(oracle::annulus_radial_distance(Vector::Zero(2), std::sqrt(2.0), std::sqrt(5.0), vec({0.1, 0})),
                         1e-5));
    CHECK(project(ConstraintSet::singleton(vec({3, 4})), vec({-7, 1})) == vec({3, 4}));
    // Tie at the center of an annulus.
    CHECK((project(omega2(), vec({0, 0})) - vec({std::sqrt(2.0), 0})).norm() < 1e-12);
}

TEST_CASE("annulus projection matches a polar grid search", "[set]")
{
    const Vector center = vec({0.5, -1});
    const ConstraintSet s = ConstraintSet::annulus(center, 1.0, 2.0);
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 10; ++t)
    {
        const Vector x = vec({u(gen), u(gen)});
        const Vector grid = oracle::annulus_nearest_grid(center, 1.0, 2.0, x, 400, 2000);
        CHECK((project(s, x) - x).norm() <= (grid - x).norm() + 1e-12);
        CHECK((project(s, x) - grid).norm() < 1e-2);
    }
}

TEST_CASE("projection is idempotent and nearest among sampled points", "[set]")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (const auto& [name, s] : projectable_sets())
    {
        INFO(name);
        REQUIRE(s.has_projection());
        const std::vector<Vector> members =
            std::string(name) == "singleton" ? std::vector<Vector>{vec({0.5, -0.5})} : sample_set(s, 1000, 4.0, 9);
        for (int t = 0; t < 20; ++t)
        {
            Vector x(s.dim());
            for (Eigen::Index i = 0; i < x.size(); ++i)
            {
                x(i) = u(gen);
            }
            const Vector p = project(s, x);
            CHECK(contains(s, p, 1e-9));
            CHECK((project(s, p) - p).norm() <= 1e-10);
            const double d = (x - p).norm();
            for (const Vector& y : members)
            {
                CHECK((x - y).norm() >= d - 1e-10);
            }
        }
    }
}

TEST_CASE("projection support and construction errors", "[set]")
{
    Matrix P = Matrix::Identity(4, 4);
    P(1, 1) = -1;
    P(3, 3) = -1;
    const ConstraintSet saddle = ConstraintSet::quadratic(P, Vector::Zero(4), 0.0, -kInf, 0.0);
    CHECK_FALSE(saddle.has_projection());
    CHECK_THROWS_MATCHES(project(saddle, Vector::Unit(4, 0)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrorKind::UnsupportedVariant;
                         }));

    CHECK_THROWS_MATCHES(ConstraintSet::quadratic(Matrix::Identity(2, 2), Vector::Zero(2), 0.0, -kInf, -1.0), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::EmptySet; }));
    Matrix rows(2, 1);
    rows << 1, -1;
    CHECK_THROWS_MATCHES(ConstraintSet::polyhedron(rows, vec({-1, -1})), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::EmptySet; }));
    CHECK_THROWS_AS(ConstraintSet::box(vec({1}), vec({0})), Error);
    CHECK_THROWS_AS(ConstraintSet::quadratic(Matrix::Identity(2, 2), Vector::Zero(3), 0.0, 0.0, 1.0), Error);
}

TEST_CASE("polyhedron projection by Dykstra matches a vertex solution", "[set]")
{
    // Projection of (2, 2) onto {x1 + x2 <= 1, x1 <= 0.2}: nearest point on the edge is (0.5, 0.5)
    // but x1 <= 0.2 cuts it, so the answer is the vertex (0.2, 0.8).
    Matrix rows(2, 2);
    rows << 1, 1, 1, 0;
    const ConstraintSet s = ConstraintSet::polyhedron(rows, vec({1, 0.2}));
    CHECK((project(s, vec({2, 2})) - vec({0.2, 0.8})).norm() < 1e-8);
}
