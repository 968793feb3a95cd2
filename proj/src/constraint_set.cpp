#include "splitstab/constraint_set.hpp"

#include "splitstab/simplex.hpp"

#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace splitstab
{
namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_active(double residual, double scale)
{
    return std::abs(residual) <= kActiveRelTol * (1.0 + std::abs(scale));
}

// Eigen decomposition with tiny eigenvalues flushed to zero.
struct Spectrum
{
    Vector values;
    Matrix vectors;
};

Spectrum spectrum(const Matrix& P)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (P + P.transpose()));
    Spectrum s{es.eigenvalues(), es.eigenvectors()};
    const double scale = std::max(1.0, s.values.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < s.values.size(); ++i)
    {
        if (std::abs(s.values(i)) <= 1e-12 * scale)
        {
            s.values(i) = 0.0;
        }
    }
    return s;
}

// Closed range [inf f, sup f] of a quadratic over R^d.
std::pair<double, double> quadratic_range(const QuadraticSublevel& s)
{
    const Spectrum sp = spectrum(s.P);
    const Vector qt = sp.vectors.transpose() * s.q;
    const double qscale = 1e-12 * (1.0 + s.q.cwiseAbs().maxCoeff());
    double lo = s.r;
    double hi = s.r;
    for (Eigen::Index i = 0; i < qt.size(); ++i)
    {
        const double lam = sp.values(i);
        if (lam > 0.0)
        {
            hi = kInf;
            lo -= qt(i) * qt(i) / (4.0 * lam);
        }
        else if (lam < 0.0)
        {
            lo = -kInf;
            hi -= qt(i) * qt(i) / (4.0 * lam);
        }
        else if (std::abs(qt(i)) > qscale)
        {
            lo = -kInf;
            hi = kInf;
        }
    }
    return {lo, hi};
}

// P == alpha I with alpha != 0.
double isotropic_alpha(const Matrix& P)
{
    const Eigen::Index d = P.rows();
    const double alpha = P(0, 0);
    if (alpha == 0.0)
    {
        return 0.0;
    }
    return (P - alpha * Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-14 * std::abs(alpha) ? alpha : 0.0;
}

void fill_cache(QuadraticSublevel& s)
{
    const Spectrum sp = spectrum(s.P);
    s.eigenvalues = sp.values;
    s.eigenvectors = sp.vectors;
    s.isotropic_alpha = isotropic_alpha(s.P);
    const Eigen::Index d = s.q.size();
    const Matrix twoP = 2.0 * s.P;
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(twoP);
    const Vector xc = cod.solve(-s.q);
    s.has_critical_points = (twoP * xc + s.q).norm() <= 1e-10 * (1.0 + s.q.norm());
    if (s.has_critical_points)
    {
        s.critical_point = xc;
        Eigen::FullPivLU<Matrix> lu(twoP);
        if (lu.rank() < d)
        {
            const Matrix ker = lu.kernel();
            const Eigen::HouseholderQR<Matrix> qr(ker);
            s.critical_basis = qr.householderQ() * Matrix::Identity(d, ker.cols());
        }
        else
        {
            s.critical_basis.resize(d, 0);
        }
    }
}

bool is_psd(const Matrix& P)
{
    return (spectrum(P).values.array() >= 0.0).all();
}

// Coefficients in increasing degree; degree <= 6 covers dimension <= 3.
class Poly
{
public:
    Poly() = default;
    Poly(std::initializer_list<double> coeffs)
    {
        for (const double v : coeffs)
        {
            c_[n_++] = v;
        }
    }
    explicit Poly(std::size_t n) : n_(n)
    {
        if (n > c_.size())
        {
            throw Error(ErrorKind::UnsupportedVariant, "polynomial degree too high");
        }
    }

    std::size_t size() const { return n_; }
    double& operator[](std::size_t i) { return c_[i]; }
    double operator[](std::size_t i) const { return c_[i]; }
    double back() const { return c_[n_ - 1]; }
    void pop_back() { --n_; }
    const double* data() const { return c_.data(); }
    const double* begin() const { return c_.data(); }
    const double* end() const { return c_.data() + n_; }

private:
    std::array<double, 8> c_{};
    std::size_t n_ = 0;
};

Poly poly_mul(const Poly& a, const Poly& b)
{
    Poly out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        for (std::size_t j = 0; j < b.size(); ++j)
        {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

Poly poly_add(const Poly& a, const Poly& b)
{
    Poly out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        out[i] += a[i];
    }
    for (std::size_t i = 0; i < b.size(); ++i)
    {
        out[i] += b[i];
    }
    return out;
}

Poly poly_scale(Poly a, double s)
{
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        a[i] *= s;
    }
    return a;
}

// Real roots of a polynomial via the companion matrix.
std::vector<double> real_roots(Poly coeffs)
{
    double scale = 0.0;
    for (const double c : coeffs)
    {
        scale = std::max(scale, std::abs(c));
    }
    if (scale == 0.0)
    {
        return {};
    }
    while (coeffs.size() > 1 && std::abs(coeffs.back()) <= 1e-13 * scale)
    {
        coeffs.pop_back();
    }
    if (coeffs.size() < 2)
    {
        return {};
    }
    if (coeffs.size() == 2)
    {
        return {-coeffs[0] / coeffs[1]};
    }
    if (coeffs.size() == 3)
    {
        const double a = coeffs[2];
        const double b = coeffs[1];
        const double c = coeffs[0];
        const double disc = b * b - 4.0 * a * c;
        if (disc < -1e-12 * (b * b + std::abs(4.0 * a * c)))
        {
            return {};
        }
        const double q = -0.5 * (b + std::copysign(std::sqrt(std::max(disc, 0.0)), b));
        if (q == 0.0)
        {
            return {0.0};
        }
        return {q / a, c / q};
    }
    if (coeffs.size() == 4)
    {
        const double a = coeffs[2] / coeffs[3];
        const double b = coeffs[1] / coeffs[3];
        const double c = coeffs[0] / coeffs[3];
        // t = y - a/3 gives y^3 + py + q = 0.
        const double shift = a / 3.0;
        const double p = b - a * a / 3.0;
        const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
        const double disc = 0.25 * q * q + p * p * p / 27.0;
        if (disc > 0.0)
        {
            const double sq = std::sqrt(disc);
            const double y = std::cbrt(-0.5 * q + sq) + std::cbrt(-0.5 * q - sq);
            // Also the would-be double root, for discriminants lost to rounding.
            return {y - shift, -std::cbrt(-0.5 * q) - shift};
        }
        if (p == 0.0)
        {
            return {-shift};
        }
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        return {m * std::cos(phi) - shift, m * std::cos(phi - 2.0 * std::numbers::pi / 3.0) - shift,
                m * std::cos(phi - 4.0 * std::numbers::pi / 3.0) - shift};
    }
    Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(c);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < solver.roots().size(); ++i)
    {
        const auto z = solver.roots()(i);
        if (std::abs(z.imag()) <= 1e-6 * (1.0 + std::abs(z.real())))
        {
            out.push_back(z.real());
        }
    }
    return out;
}

// Nearest point of the level set {f = theta} to p, for p outside the set.
Vector project_to_level(const QuadraticSublevel& s, const Vector& p, double theta)
{
    const Eigen::Index d = p.size();
    const double alpha = s.isotropic_alpha;
    if (alpha != 0.0)
    {
        // f(x) = alpha |x - c|^2 + r - alpha |c|^2.
        const Vector c = -s.q / (2.0 * alpha);
        const double rho2 = (theta - s.r + alpha * c.squaredNorm()) / alpha;
        const double rho = std::sqrt(std::max(0.0, rho2));
        const Vector off = p - c;
        const double n = off.norm();
        if (n == 0.0)
        {
            Vector x = c;
            x(0) += rho;
            return x;
        }
        return c + (rho / n) * off;
    }

    const Spectrum sp{s.eigenvalues, s.eigenvectors};
    const bool linear = (sp.values.array() == 0.0).all();
    if (!linear && d > 3)
    {
        throw Error(ErrorKind::UnsupportedVariant,
                    "projection onto non-isotropic quadratic sets is limited to dimension <= 3");
    }
    const Vector lam = sp.values;
    const Vector pt = sp.vectors.transpose() * p;
    const Vector qt = sp.vectors.transpose() * s.q;

    std::vector<Vector> candidates;

    // Stationary points x(t) = (I + 2tP)^{-1}(p - tq) on the level set.
    // Clearing denominators turns f(x(t)) = theta into a polynomial in t.
    {
        std::array<Poly, 3> D;
        std::array<Poly, 3> N;
        for (Eigen::Index i = 0; i < d; ++i)
        {
            D[static_cast<std::size_t>(i)] = {1.0, 2.0 * lam(i)};
            N[static_cast<std::size_t>(i)] = {pt(i), -qt(i)};
        }
        Poly total = {0.0};
        Poly all_d2 = {1.0};
        for (Eigen::Index j = 0; j < d; ++j)
        {
            all_d2 = poly_mul(all_d2, poly_mul(D[static_cast<std::size_t>(j)], D[static_cast<std::size_t>(j)]));
        }
        total = poly_add(total, poly_scale(all_d2, s.r - theta));
        for (Eigen::Index i = 0; i < d; ++i)
        {
            const auto ui = static_cast<std::size_t>(i);
            Poly others = {1.0};
            for (Eigen::Index j = 0; j < d; ++j)
            {
                if (j != i)
                {
                    const auto uj = static_cast<std::size_t>(j);
                    others = poly_mul(others, poly_mul(D[uj], D[uj]));
                }
            }
            Poly term = poly_add(poly_scale(poly_mul(N[ui], N[ui]), lam(i)),
                                 poly_scale(poly_mul(N[ui], D[ui]), qt(i)));
            total = poly_add(total, poly_mul(term, others));
        }

        auto x_of_t = [&](double t, Vector& xt) {
            xt.resize(d);
            for (Eigen::Index i = 0; i < d; ++i)
            {
                const double den = 1.0 + 2.0 * t * lam(i);
                if (std::abs(den) < 1e-14)
                {
                    return false;
                }
                xt(i) = (pt(i) - t * qt(i)) / den;
            }
            return true;
        };

        for (double t : real_roots(total))
        {
            Vector xt;
            // Newton polish of g(t) = f(x(t)) - theta.
            for (int it = 0; it < 8 && x_of_t(t, xt); ++it)
            {
                double g = s.r - theta;
                double dg = 0.0;
                for (Eigen::Index i = 0; i < d; ++i)
                {
                    const double den = 1.0 + 2.0 * t * lam(i);
                    const double num = pt(i) - t * qt(i);
                    const double dx = (-qt(i) * den - 2.0 * lam(i) * num) / (den * den);
                    g += lam(i) * xt(i) * xt(i) + qt(i) * xt(i);
                    dg += (2.0 * lam(i) * xt(i) + qt(i)) * dx;
                }
                if (dg == 0.0 || std::abs(g) == 0.0)
                {
                    break;
                }
                t -= g / dg;
            }
            if (x_of_t(t, xt))
            {
                candidates.push_back(sp.vectors * xt);
            }
        }
    }

    // Hard case: t = -1/(2 lambda) with vanishing numerators leaves the
    // lambda-eigenspace coordinates free on a sphere around pt.
    for (Eigen::Index k = 0; k < d; ++k)
    {
        if (lam(k) == 0.0)
        {
            continue;
        }
        const double t = -1.0 / (2.0 * lam(k));
        std::vector<Eigen::Index> group;
        bool ok = true;
        for (Eigen::Index i = 0; i < d; ++i)
        {
            if (std::abs(lam(i) - lam(k)) <= 1e-12 * (1.0 + std::abs(lam(k))))
            {
                group.push_back(i);
                if (std::abs(pt(i) - t * qt(i)) > 1e-12 * (1.0 + std::abs(pt(i))))
                {
                    ok = false;
                }
            }
        }
        if (!ok || group.front() != k)
        {
            continue;
        }
        Vector xt(d);
        double rest = s.r;
        double group_p2 = 0.0;
        for (Eigen::Index i = 0; i < d; ++i)
        {
            if (std::find(group.begin(), group.end(), i) != group.end())
            {
                xt(i) = pt(i);
                group_p2 += pt(i) * pt(i);
                continue;
            }
            const double den = 1.0 + 2.0 * t * lam(i);
            xt(i) = (pt(i) - t * qt(i)) / den;
            rest += lam(i) * xt(i) * xt(i) + qt(i) * xt(i);
        }
        const double rho2 = (theta - rest + lam(k) * group_p2) / lam(k);
        if (rho2 < 0.0)
        {
            continue;
        }
        xt(k) += std::sqrt(rho2);
        candidates.push_back(sp.vectors * xt);
        xt(k) -= 2.0 * std::sqrt(rho2);
        candidates.push_back(sp.vectors * xt);
    }

    // Critical points of f that lie on the level set.
    if (s.has_critical_points)
    {
        const Matrix& Q = s.critical_basis;
        candidates.push_back(s.critical_point + Q * (Q.transpose() * (p - s.critical_point)));
    }

    const double level_tol = 1e-7 * (1.0 + std::abs(theta));
    Vector best;
    double best_dist = kInf;
    for (const Vector& c : candidates)
    {
        if (!c.allFinite() || std::abs(s.value(c) - theta) > level_tol * (1.0 + c.squaredNorm()))
        {
            continue;
        }
        const double dist = (c - p).norm();
        if (dist < best_dist)
        {
            best_dist = dist;
            best = c;
        }
    }
    if (best.size() == 0)
    {
        throw Error(ErrorKind::UnsupportedVariant, "no nearest point found on quadratic level set");
    }
    // Snap onto the level set along the gradient.
    for (int it = 0; it < 4; ++it)
    {
        const Vector g = s.gradient(best);
        const double gg = g.squaredNorm();
        const double resid = s.value(best) - theta;
        if (gg == 0.0 || resid == 0.0)
        {
            break;
        }
        best -= (resid / gg) * g;
    }
    return best;
}

Vector project_quadratic(const QuadraticSublevel& s, const Vector& p)
{
    const double v = s.value(p);
    if (v >= s.theta_lo && v <= s.theta_hi)
    {
        return p;
    }
    return project_to_level(s, p, v > s.theta_hi ? s.theta_hi : s.theta_lo);
}

Vector project_halfspace(const Vector& a, double alpha, const Vector& x)
{
    const double aa = a.squaredNorm();
    const double excess = a.dot(x) - alpha;
    if (excess <= 0.0 || aa == 0.0)
    {
        return x;
    }
    return x - (excess / aa) * a;
}

bool polyhedron_feasible_lp(const Polyhedron& poly)
{
    // rows (x+ - x-) + s = rhs, all >= 0.
    const Eigen::Index k = poly.rows.rows();
    const Eigen::Index d = poly.rows.cols();
    Matrix A(k, 2 * d + k);
    A << poly.rows, -poly.rows, Matrix::Identity(k, k);
    const lp::Result r = lp::solve_standard_form(A, poly.rhs, Vector::Zero(A.cols()));
    return r.status != lp::Status::Infeasible;
}

Eigen::Index total_dim(const std::vector<ConstraintSet>& factors)
{
    Eigen::Index d = 0;
    for (const auto& f : factors)
    {
        d += f.dim();
    }
    return d;
}

} // namespace

ConstraintSet::ConstraintSet(Variant v) : v_(std::move(v))
{
    dim_ = std::visit(overloaded{
                          [](const Polyhedron& p) { return p.rows.cols(); },
                          [](const Box& b) { return b.lower.size(); },
                          [](const Orthant& o) { return o.dim; },
                          [](const Singleton& s) { return s.point.size(); },
                          [](const QuadraticSublevel& q) { return q.q.size(); },
                          [](const Product& p) { return total_dim(p.factors); },
                      },
                      v_);
    if (dim_ < 1)
    {
        throw Error(ErrorKind::InvalidArgument, "constraint set ambient dimension must be >= 1");
    }
}

ConstraintSet ConstraintSet::polyhedron(Matrix rows, Vector rhs)
{
    require_dim(rhs.size(), rows.rows(), "polyhedron rhs");
    if (rows.rows() == 0)
    {
        throw Error(ErrorKind::InvalidArgument, "polyhedron needs at least one halfspace");
    }
    Polyhedron poly{std::move(rows), std::move(rhs)};
    if (!poly.rows.allFinite() || !poly.rhs.allFinite())
    {
        throw Error(ErrorKind::InvalidArgument, "polyhedron data must be finite");
    }
    const Vector probe = project_polyhedron(poly, Vector::Zero(poly.rows.cols()));
    const double slack = (poly.rows * probe - poly.rhs).maxCoeff();
    const double scale = 1.0 + poly.rhs.cwiseAbs().maxCoeff();
    if (slack > 1e-7 * scale && !polyhedron_feasible_lp(poly))
    {
        throw Error(ErrorKind::EmptySet, "polyhedron is empty");
    }
    return ConstraintSet(std::move(poly));
}

ConstraintSet ConstraintSet::box(Vector lower, Vector upper)
{
    require_dim(upper.size(), lower.size(), "box bounds");
    for (Eigen::Index i = 0; i < lower.size(); ++i)
    {
        if (std::isnan(lower(i)) || std::isnan(upper(i)) || lower(i) > upper(i) || lower(i) == kInf ||
            upper(i) == -kInf)
        {
            throw Error(ErrorKind::EmptySet, "box interval " + std::to_string(i) + " is empty");
        }
    }
    return ConstraintSet(Box{std::move(lower), std::move(upper)});
}

ConstraintSet ConstraintSet::orthant(Eigen::Index dim)
{
    return ConstraintSet(Orthant{dim});
}

ConstraintSet ConstraintSet::singleton(Vector point)
{
    if (!point.allFinite())
    {
        throw Error(ErrorKind::InvalidArgument, "singleton point must be finite");
    }
    return ConstraintSet(Singleton{std::move(point)});
}

ConstraintSet ConstraintSet::quadratic(Matrix P, Vector q, double r, double theta_lo, double theta_hi)
{
    require_dim(P.rows(), q.size(), "quadratic P rows");
    require_dim(P.cols(), q.size(), "quadratic P cols");
    if (std::isnan(theta_lo) || std::isnan(theta_hi) || theta_lo > theta_hi)
    {
        throw Error(ErrorKind::InvalidArgument, "quadratic interval requires theta_lo <= theta_hi");
    }
    if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + P.cwiseAbs().maxCoeff()))
    {
        throw Error(ErrorKind::InvalidArgument, "quadratic P must be symmetric");
    }
    QuadraticSublevel s;
    s.P = 0.5 * (P + P.transpose());
    s.q = std::move(q);
    s.r = r;
    s.theta_lo = theta_lo;
    s.theta_hi = theta_hi;
    fill_cache(s);
    const auto [lo, hi] = quadratic_range(s);
    if (hi < theta_lo || lo > theta_hi)
    {
        throw Error(ErrorKind::EmptySet, "quadratic level interval misses the range of f");
    }
    return ConstraintSet(std::move(s));
}

ConstraintSet ConstraintSet::product(std::vector<ConstraintSet> factors)
{
    if (factors.empty())
    {
        throw Error(ErrorKind::InvalidArgument, "product needs at least one factor");
    }
    return ConstraintSet(Product{std::move(factors)});
}

ConstraintSet ConstraintSet::whole_space(Eigen::Index dim)
{
    return box(Vector::Constant(dim, -kInf), Vector::Constant(dim, kInf));
}

ConstraintSet ConstraintSet::annulus(const Vector& center, double r_inner, double r_outer)
{
    const Eigen::Index d = center.size();
    // |x - c|^2 = x^T x - 2 c^T x + |c|^2.
    return quadratic(Matrix::Identity(d, d), -2.0 * center, center.squaredNorm(), r_inner * r_inner,
                     r_outer * r_outer);
}

std::string ConstraintSet::kind_name() const
{
    return std::visit(overloaded{
                          [](const Polyhedron&) { return std::string("polyhedron"); },
                          [](const Box&) { return std::string("box"); },
                          [](const Orthant&) { return std::string("orthant"); },
                          [](const Singleton&) { return std::string("singleton"); },
                          [](const QuadraticSublevel&) { return std::string("quadratic"); },
                          [](const Product&) { return std::string("product"); },
                      },
                      v_);
}

bool ConstraintSet::is_convex() const
{
    return std::visit(overloaded{
                          [](const QuadraticSublevel& s) {
                              const bool linear = s.P.cwiseAbs().maxCoeff() == 0.0;
                              if (linear)
                              {
                                  return true;
                              }
                              if (s.theta_lo == -kInf && is_psd(s.P))
                              {
                                  return true;
                              }
                              return s.theta_hi == kInf && is_psd(-s.P);
                          },
                          [](const Product& p) {
                              return std::all_of(p.factors.begin(), p.factors.end(),
                                                 [](const ConstraintSet& f) { return f.is_convex(); });
                          },
                          [](const auto&) { return true; },
                      },
                      v_);
}

bool ConstraintSet::has_projection() const
{
    return std::visit(overloaded{
                          [](const QuadraticSublevel& s) {
                              return s.q.size() <= 3 || s.isotropic_alpha != 0.0 ||
                                     s.P.cwiseAbs().maxCoeff() == 0.0;
                          },
                          [](const Product& p) {
                              return std::all_of(p.factors.begin(), p.factors.end(),
                                                 [](const ConstraintSet& f) { return f.has_projection(); });
                          },
                          [](const auto&) { return true; },
                      },
                      v_);
}

bool contains(const ConstraintSet& set, const Vector& x, double tol)
{
    require_dim(x.size(), set.dim(), "contains");
    return std::visit(
        overloaded{
            [&](const Polyhedron& p) { return ((p.rows * x - p.rhs).array() <= tol).all(); },
            [&](const Box& b) {
                return ((x - b.lower).array() >= -tol).all() && ((b.upper - x).array() >= -tol).all();
            },
            [&](const Orthant&) { return (x.array() >= -tol).all(); },
            [&](const Singleton& s) { return (x - s.point).lpNorm<Eigen::Infinity>() <= tol; },
            [&](const QuadraticSublevel& s) {
                const double v = s.value(x);
                return v >= s.theta_lo - tol && v <= s.theta_hi + tol;
            },
            [&](const Product& p) {
                Eigen::Index off = 0;
                for (const auto& f : p.factors)
                {
                    if (!contains(f, x.segment(off, f.dim()), tol))
                    {
                        return false;
                    }
                    off += f.dim();
                }
                return true;
            },
        },
        set.variant());
}

namespace
{

[[noreturn]] void not_in_set(const ConstraintSet& set)
{
    throw Error(ErrorKind::PointNotInSet, "point is not in the " + set.kind_name() + " set");
}

Cone box_normal_cone(const ConstraintSet& set, const Vector& lower, const Vector& upper, const Vector& x)
{
    const Eigen::Index d = x.size();
    std::vector<Vector> gens;
    std::vector<Vector> lines;
    for (Eigen::Index i = 0; i < d; ++i)
    {
        const bool lo_finite = std::isfinite(lower(i));
        const bool hi_finite = std::isfinite(upper(i));
        const bool lo_active = lo_finite && is_active(x(i) - lower(i), lower(i));
        const bool hi_active = hi_finite && is_active(x(i) - upper(i), upper(i));
        if ((lo_finite && x(i) < lower(i) && !lo_active) || (hi_finite && x(i) > upper(i) && !hi_active))
        {
            not_in_set(set);
        }
        Vector e = Vector::Zero(d);
        e(i) = 1.0;
        if (lo_active && hi_active)
        {
            lines.push_back(e);
        }
        else if (hi_active)
        {
            gens.push_back(e);
        }
        else if (lo_active)
        {
            gens.push_back(-e);
        }
    }
    Matrix G(d, static_cast<Eigen::Index>(gens.size()));
    for (std::size_t j = 0; j < gens.size(); ++j)
    {
        G.col(static_cast<Eigen::Index>(j)) = gens[j];
    }
    Matrix L(d, static_cast<Eigen::Index>(lines.size()));
    for (std::size_t j = 0; j < lines.size(); ++j)
    {
        L.col(static_cast<Eigen::Index>(j)) = lines[j];
    }
    return Cone::generated(G, L);
}

} // namespace

Cone normal_cone(const ConstraintSet& set, const Vector& x)
{
    require_dim(x.size(), set.dim(), "normal_cone");
    return std::visit(
        overloaded{
            [&](const Polyhedron& p) {
                std::vector<Eigen::Index> active;
                for (Eigen::Index i = 0; i < p.rows.rows(); ++i)
                {
                    const double res = p.rows.row(i).dot(x) - p.rhs(i);
                    const double scale = std::abs(p.rhs(i)) + p.rows.row(i).lpNorm<1>() * x.lpNorm<Eigen::Infinity>();
                    if (is_active(res, scale))
                    {
                        active.push_back(i);
                    }
                    else if (res > 0.0)
                    {
                        not_in_set(set);
                    }
                }
                Matrix G(x.size(), static_cast<Eigen::Index>(active.size()));
                for (std::size_t j = 0; j < active.size(); ++j)
                {
                    G.col(static_cast<Eigen::Index>(j)) = p.rows.row(active[j]).transpose();
                }
                return Cone::generated(G, Matrix(x.size(), 0));
            },
            [&](const Box& b) { return box_normal_cone(set, b.lower, b.upper, x); },
            [&](const Orthant& o) {
                return box_normal_cone(set, Vector::Zero(o.dim), Vector::Constant(o.dim, kInf), x);
            },
            [&](const Singleton& s) {
                if (!is_active((x - s.point).lpNorm<Eigen::Infinity>(), s.point.lpNorm<Eigen::Infinity>()))
                {
                    not_in_set(set);
                }
                return Cone::full(x.size());
            },
            [&](const QuadraticSublevel& s) {
                const double v = s.value(x);
                const double scale = s.P.cwiseAbs().maxCoeff() * x.squaredNorm() +
                                     s.q.cwiseAbs().maxCoeff() * x.lpNorm<1>() + std::abs(s.r);
                const bool lo_active = std::isfinite(s.theta_lo) && is_active(v - s.theta_lo, scale + std::abs(s.theta_lo));
                const bool hi_active = std::isfinite(s.theta_hi) && is_active(v - s.theta_hi, scale + std::abs(s.theta_hi));
                if ((v < s.theta_lo && !lo_active) || (v > s.theta_hi && !hi_active))
                {
                    not_in_set(set);
                }
                if (!lo_active && !hi_active)
                {
                    return Cone::zero(x.size());
                }
                const Vector g = s.gradient(x);
                const double gscale = 1.0 + s.q.norm() + 2.0 * s.P.norm() * x.norm();
                if (g.norm() <= 1e-12 * gscale)
                {
                    throw Error(ErrorKind::QualificationFailure,
                                "gradient of the defining quadratic vanishes at an active bound");
                }
                if (lo_active && hi_active)
                {
                    return Cone::line(g);
                }
                return hi_active ? Cone::ray(g) : Cone::ray(-g);
            },
            [&](const Product& p) {
                Eigen::Index off = 0;
                std::optional<Cone> acc;
                for (const auto& f : p.factors)
                {
                    Cone k = normal_cone(f, x.segment(off, f.dim()));
                    acc = acc ? product(*acc, k) : k;
                    off += f.dim();
                }
                return *acc;
            },
        },
        set.variant());
}

Vector project_polyhedron(const Polyhedron& poly, const Vector& x, const DykstraOptions& opt)
{
    const Eigen::Index k = poly.rows.rows();
    if (k == 1)
    {
        return project_halfspace(poly.rows.row(0).transpose(), poly.rhs(0), x);
    }
    Vector cur = x;
    Matrix incr = Matrix::Zero(x.size(), k);
    for (int cycle = 0; cycle < opt.max_cycles; ++cycle)
    {
        const Vector start = cur;
        double incr_change = 0.0;
        for (Eigen::Index i = 0; i < k; ++i)
        {
            const Vector y = cur + incr.col(i);
            const Vector next = project_halfspace(poly.rows.row(i).transpose(), poly.rhs(i), y);
            const Vector new_incr = y - next;
            incr_change += (new_incr - incr.col(i)).squaredNorm();
            incr.col(i) = new_incr;
            cur = next;
        }
        if ((cur - start).norm() <= opt.tol && std::sqrt(incr_change) <= opt.tol * (1.0 + x.norm()))
        {
            break;
        }
    }
    return cur;
}

Vector project(const ConstraintSet& set, const Vector& x)
{
    require_dim(x.size(), set.dim(), "project");
    if (!set.has_projection())
    {
        throw Error(ErrorKind::UnsupportedVariant, "no projection rule for this " + set.kind_name() + " set");
    }
    return std::visit(overloaded{
                          [&](const Polyhedron& p) { return project_polyhedron(p, x); },
                          [&](const Box& b) -> Vector { return x.cwiseMax(b.lower).cwiseMin(b.upper); },
                          [&](const Orthant&) -> Vector { return x.cwiseMax(0.0); },
                          [&](const Singleton& s) -> Vector { return s.point; },
                          [&](const QuadraticSublevel& s) { return project_quadratic(s, x); },
                          [&](const Product& p) {
                              Vector out(x.size());
                              Eigen::Index off = 0;
                              for (const auto& f : p.factors)
                              {
                                  out.segment(off, f.dim()) = project(f, x.segment(off, f.dim()));
                                  off += f.dim();
                              }
                              return out;
                          },
                      },
                      set.variant());
}

double distance(const ConstraintSet& set, const Vector& x)
{
    return (x - project(set, x)).norm();
}

} // namespace splitstab
