#include "splitstab/cone.hpp"

#include "splitstab/simplex.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace splitstab
{

const char* to_string(ConeClass c)
{
    switch (c)
    {
    case ConeClass::Zero: return "ZERO";
    case ConeClass::Ray: return "ray";
    case ConeClass::Line: return "line";
    case ConeClass::HalflineProduct: return "halfline-product";
    case ConeClass::Full: return "FULL";
    case ConeClass::General: return "general";
    }
    return "general";
}

namespace
{

Matrix drop_zero_columns(const Matrix& m)
{
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
    {
        if (m.col(j).lpNorm<Eigen::Infinity>() > 0.0)
        {
            keep.push_back(j);
        }
    }
    Matrix out(m.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
    {
        out.col(static_cast<Eigen::Index>(k)) = m.col(keep[k]);
    }
    return out;
}

Matrix block_diag(const Matrix& a, const Matrix& b)
{
    Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

Matrix vstack(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() + b.rows(), a.cols());
    out.topRows(a.rows()) = a;
    out.bottomRows(b.rows()) = b;
    return out;
}

bool is_identity(const Matrix& e)
{
    return e.rows() == e.cols() && e.isIdentity(0.0);
}

// Columns: [z+ (d) | z- (d) | lambda (k) | mu+ (m) | mu- (m)].
struct ConeLp
{
    Matrix A;
    Eigen::Index d, k, m;
};

ConeLp cone_system(const Cone& cone)
{
    const Eigen::Index d = cone.ambient_dim();
    const Eigen::Index k = cone.G().cols();
    const Eigen::Index m = cone.L().cols();
    const Eigen::Index e = cone.E().rows();
    ConeLp lp{Matrix::Zero(e, 2 * d + k + 2 * m), d, k, m};
    lp.A.middleCols(0, d) = cone.E();
    lp.A.middleCols(d, d) = -cone.E();
    lp.A.middleCols(2 * d, k) = -cone.G();
    lp.A.middleCols(2 * d + k, m) = -cone.L();
    lp.A.middleCols(2 * d + k + m, m) = cone.L();
    return lp;
}

} // namespace

Cone::Cone(Matrix E, Matrix G, Matrix L) : E_(std::move(E)), G_(std::move(G)), L_(std::move(L))
{
    if (E_.cols() < 1)
    {
        throw Error(ErrorKind::InvalidArgument, "cone ambient dimension must be >= 1");
    }
    if (G_.cols() == 0)
    {
        G_.resize(E_.rows(), 0);
    }
    if (L_.cols() == 0)
    {
        L_.resize(E_.rows(), 0);
    }
    require_dim(G_.rows(), E_.rows(), "cone generator rows");
    require_dim(L_.rows(), E_.rows(), "cone lineality rows");
    G_ = drop_zero_columns(G_);
    L_ = drop_zero_columns(L_);
    generator_form_ = is_identity(E_);
}

Cone Cone::zero(Eigen::Index dim)
{
    return Cone(Matrix::Identity(dim, dim), Matrix(dim, 0), Matrix(dim, 0));
}

Cone Cone::full(Eigen::Index dim)
{
    return Cone(Matrix::Identity(dim, dim), Matrix(dim, 0), Matrix::Identity(dim, dim));
}

Cone Cone::generated(const Matrix& G, const Matrix& L)
{
    const Eigen::Index dim = G.cols() > 0 ? G.rows() : L.rows();
    return Cone(Matrix::Identity(dim, dim), G, L);
}

Cone Cone::ray(const Vector& g)
{
    return Cone(Matrix::Identity(g.size(), g.size()), Matrix(g), Matrix(g.size(), 0));
}

Cone Cone::line(const Vector& g)
{
    return Cone(Matrix::Identity(g.size(), g.size()), Matrix(g.size(), 0), Matrix(g));
}

Cone negate(const Cone& k)
{
    if (k.is_generator_form())
    {
        return Cone(k.E(), -k.G(), k.L());
    }
    return Cone(-k.E(), k.G(), k.L());
}

Cone preimage_transpose(const Matrix& M, const Cone& k)
{
    require_dim(M.cols(), k.ambient_dim(), "preimage_transpose: columns of M vs cone dimension");
    if (is_identity(M))
    {
        return k;
    }
    return Cone(k.E() * M.transpose(), k.G(), k.L());
}

Cone intersect(const Cone& a, const Cone& b)
{
    require_dim(b.ambient_dim(), a.ambient_dim(), "intersect");
    if (a.is_canonical_zero())
    {
        return a;
    }
    if (b.is_canonical_zero())
    {
        return b;
    }
    return Cone(vstack(a.E(), b.E()), block_diag(a.G(), b.G()), block_diag(a.L(), b.L()));
}

Cone product(const Cone& a, const Cone& b)
{
    return Cone(block_diag(a.E(), b.E()), block_diag(a.G(), b.G()), block_diag(a.L(), b.L()));
}

double membership_residual(const Cone& k, const Vector& z)
{
    require_dim(z.size(), k.ambient_dim(), "cone membership");
    const Vector target = k.E() * z;
    const Eigen::Index e = target.size();
    const Eigen::Index nk = k.G().cols();
    const Eigen::Index nm = k.L().cols();
    if (nk == 0 && nm == 0)
    {
        return target.norm();
    }
    if (nk == 0)
    {
        // Pure subspace: least squares is exact.
        const Vector mu = k.L().completeOrthogonalDecomposition().solve(target);
        return (target - k.L() * mu).norm();
    }

    // min sum(p + q)  s.t.  G lambda + L mu+ - L mu- + p - q = E z.
    Matrix A = Matrix::Zero(e, nk + 2 * nm + 2 * e);
    A.middleCols(0, nk) = k.G();
    A.middleCols(nk, nm) = k.L();
    A.middleCols(nk + nm, nm) = -k.L();
    A.middleCols(nk + 2 * nm, e) = Matrix::Identity(e, e);
    A.middleCols(nk + 2 * nm + e, e) = -Matrix::Identity(e, e);
    Vector c = Vector::Zero(A.cols());
    c.tail(2 * e).setOnes();
    const lp::Result r = lp::solve_standard_form(A, target, c);
    if (r.status != lp::Status::Optimal)
    {
        throw Error(ErrorKind::LpFailure, "membership LP did not reach optimality");
    }
    const Vector lambda = r.x.segment(0, nk);
    const Vector mu = r.x.segment(nk, nm) - r.x.segment(nk + nm, nm);
    return (target - k.G() * lambda - k.L() * mu).norm();
}

bool member(const Cone& k, const Vector& z, double tol)
{
    return membership_residual(k, z) <= tol;
}

TrivialityResult is_trivial(const Cone& k)
{
    TrivialityResult out;
    if (k.is_canonical_zero())
    {
        return out;
    }
    const ConeLp sys = cone_system(k);
    const Eigen::Index d = sys.d;
    bool lp_feasible_somewhere = false;

    for (Eigen::Index i = 0; i < d; ++i)
    {
        for (const double s : {1.0, -1.0})
        {
            Matrix A(sys.A.rows() + 1, sys.A.cols());
            A.topRows(sys.A.rows()) = sys.A;
            A.bottomRows(1).setZero();
            A(sys.A.rows(), i) = 1.0;
            A(sys.A.rows(), d + i) = -1.0;
            Vector b = Vector::Zero(A.rows());
            b(A.rows() - 1) = s;
            const lp::Result r = lp::solve_standard_form(A, b, Vector::Zero(A.cols()));
            if (r.status == lp::Status::Infeasible)
            {
                continue;
            }
            lp_feasible_somewhere = true;
            Vector z = r.x.head(d) - r.x.segment(d, d);
            const double scale = z.lpNorm<Eigen::Infinity>();
            if (scale <= 0.0)
            {
                continue;
            }
            z /= scale;
            if (member(k, z, 1e-8))
            {
                out.trivial = false;
                out.witness = z;
                return out;
            }
        }
    }
    if (lp_feasible_somewhere)
    {
        throw Error(ErrorKind::LpFailure,
                    "triviality LP reported a nonzero cone element that failed re-verification");
    }
    return out;
}

namespace
{

// {P w : w in K} for the orthogonal projector P onto span(z)^perp, encoded in
// implicit form with w carried as free (lineality) variables.
Cone project_off(const Cone& k, const Vector& z)
{
    const Eigen::Index d = k.ambient_dim();
    const Vector u = z.normalized();
    const Matrix P = Matrix::Identity(d, d) - u * u.transpose();
    const Eigen::Index e = k.E().rows();
    Matrix E = Matrix::Zero(d + e, d);
    E.topRows(d) = Matrix::Identity(d, d);
    Matrix G = Matrix::Zero(d + e, k.G().cols());
    G.bottomRows(e) = k.G();
    Matrix L = Matrix::Zero(d + e, d + k.L().cols());
    L.topLeftCorner(d, d) = P;
    L.bottomLeftCorner(e, d) = -k.E();
    L.bottomRightCorner(e, k.L().cols()) = k.L();
    return Cone(E, G, L);
}

bool on_coordinate_axis(const Vector& v)
{
    Eigen::Index nonzero = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        if (v(i) != 0.0)
        {
            ++nonzero;
        }
    }
    return nonzero == 1;
}

} // namespace

ConeSummary classify(const Cone& k)
{
    ConeSummary out;
    const TrivialityResult t = is_trivial(k);
    if (t.trivial)
    {
        out.kind = ConeClass::Zero;
        return out;
    }
    const Eigen::Index d = k.ambient_dim();

    bool full = true;
    for (Eigen::Index i = 0; i < d && full; ++i)
    {
        for (const double s : {1.0, -1.0})
        {
            Vector e = Vector::Zero(d);
            e(i) = s;
            if (!member(k, e, 1e-9))
            {
                full = false;
                break;
            }
        }
    }
    if (full)
    {
        out.kind = ConeClass::Full;
        return out;
    }

    const Vector z = *t.witness;
    if (is_trivial(project_off(k, z)).trivial)
    {
        out.kind = member(k, Vector(-z), 1e-9) ? ConeClass::Line : ConeClass::Ray;
        Vector dir = z;
        if (k.is_generator_form() && out.kind == ConeClass::Ray && k.G().cols() > 0)
        {
            dir = k.G().col(0);
        }
        else if (k.is_generator_form() && out.kind == ConeClass::Line && k.L().cols() > 0)
        {
            dir = k.L().col(0);
        }
        out.direction = dir.normalized();
        return out;
    }

    if (k.is_generator_form())
    {
        bool axes = true;
        for (Eigen::Index j = 0; j < k.G().cols(); ++j)
        {
            axes = axes && on_coordinate_axis(k.G().col(j));
        }
        for (Eigen::Index j = 0; j < k.L().cols(); ++j)
        {
            axes = axes && on_coordinate_axis(k.L().col(j));
        }
        if (axes)
        {
            out.kind = ConeClass::HalflineProduct;
            return out;
        }
    }
    out.kind = ConeClass::General;
    return out;
}

namespace
{

std::string format_vector(const Vector& v)
{
    std::ostringstream os;
    os << '(';
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        if (i > 0)
        {
            os << ',';
        }
        os << v(i);
    }
    os << ')';
    return os.str();
}

} // namespace

std::string describe(const Cone& k)
{
    const ConeSummary s = classify(k);
    std::string text = to_string(s.kind);
    if (s.kind == ConeClass::Ray || s.kind == ConeClass::Line)
    {
        Vector g = *s.direction;
        // Generator-form cones print their stored generator unscaled.
        if (k.is_generator_form() && s.kind == ConeClass::Ray && k.G().cols() == 1)
        {
            g = k.G().col(0);
        }
        else if (k.is_generator_form() && s.kind == ConeClass::Line && k.L().cols() == 1 &&
                 k.G().cols() == 0)
        {
            g = k.L().col(0);
        }
        text += ", generator " + format_vector(g);
    }
    return text;
}

} // namespace splitstab
