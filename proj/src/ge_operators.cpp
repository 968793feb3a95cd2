#include "splitstab/ge_operators.hpp"

namespace splitstab
{

int numerical_rank(const Matrix& m, double rel_tol)
{
    if (m.size() == 0)
    {
        return 0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0)
    {
        return 0;
    }
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
    {
        if (s(i) > rel_tol * s(0))
        {
            ++rank;
        }
    }
    return rank;
}

namespace
{

Vector row_major(const Matrix& M)
{
    Vector out(M.size());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < M.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < M.cols(); ++j)
        {
            out(k++) = M(i, j);
        }
    }
    return out;
}

Matrix from_row_major(const Vector& v, Eigen::Index offset, Eigen::Index rows, Eigen::Index cols)
{
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
    {
        for (Eigen::Index j = 0; j < cols; ++j)
        {
            M(i, j) = v(offset + i * cols + j);
        }
    }
    return M;
}

void same_shape(const NsepPoint& a, const NsepPoint& b)
{
    require_dim(b.n(), a.n(), "nsep increment n");
    require_dim(b.m(), a.m(), "nsep increment m");
    require_dim(b.l(), a.l(), "nsep increment l");
    b.validate();
}

void same_shape(const NsfpPoint& a, const NsfpPoint& b)
{
    require_dim(b.n(), a.n(), "nsfp increment n");
    require_dim(b.m(), a.m(), "nsfp increment m");
    b.validate();
}

} // namespace

void NsepPoint::validate() const
{
    require_dim(A.rows(), l(), "A rows vs c");
    require_dim(B.rows(), l(), "B rows vs c");
    require_dim(A.cols(), n(), "A cols vs x");
    require_dim(B.cols(), m(), "B cols vs y");
}

NsepPoint NsepPoint::zeros_like(const NsepPoint& p)
{
    return {Matrix::Zero(p.A.rows(), p.A.cols()), Matrix::Zero(p.B.rows(), p.B.cols()),
            Vector::Zero(p.l()), Vector::Zero(p.n()), Vector::Zero(p.m())};
}

void NsfpPoint::validate() const
{
    require_dim(A.rows(), m(), "A rows vs b");
    require_dim(A.cols(), n(), "A cols vs x");
}

NsfpPoint NsfpPoint::zeros_like(const NsfpPoint& p)
{
    return {Matrix::Zero(p.A.rows(), p.A.cols()), Vector::Zero(p.m()), Vector::Zero(p.n())};
}

Vector flatten(const NsepPoint& p)
{
    p.validate();
    Vector out(p.A.size() + p.B.size() + p.l() + p.n() + p.m());
    out << row_major(p.A), row_major(p.B), p.c, p.x, p.y;
    return out;
}

Vector flatten(const NsfpPoint& p)
{
    p.validate();
    Vector out(p.A.size() + p.m() + p.n());
    out << row_major(p.A), p.b, p.x;
    return out;
}

NsepPoint unflatten_like(const NsepPoint& shape, const Vector& v)
{
    const Eigen::Index l = shape.l(), n = shape.n(), m = shape.m();
    require_dim(v.size(), l * n + l * m + l + n + m, "nsep flat vector");
    NsepPoint p;
    p.A = from_row_major(v, 0, l, n);
    p.B = from_row_major(v, l * n, l, m);
    p.c = v.segment(l * n + l * m, l);
    p.x = v.segment(l * n + l * m + l, n);
    p.y = v.segment(l * n + l * m + l + n, m);
    return p;
}

NsfpPoint unflatten_like(const NsfpPoint& shape, const Vector& v)
{
    const Eigen::Index n = shape.n(), m = shape.m();
    require_dim(v.size(), m * n + m + n, "nsfp flat vector");
    NsfpPoint p;
    p.A = from_row_major(v, 0, m, n);
    p.b = v.segment(m * n, m);
    p.x = v.segment(m * n + m, n);
    return p;
}

Vector f1_eval(const NsepPoint& p)
{
    p.validate();
    Vector out(p.n() + p.m() + p.l());
    out << -p.x, -p.y, p.A * p.x - p.B * p.y - p.c;
    return out;
}

Vector f1_derivative_apply(const NsepPoint& base, const NsepPoint& d)
{
    base.validate();
    same_shape(base, d);
    Vector out(base.n() + base.m() + base.l());
    out << -d.x, -d.y, base.A * d.x - base.B * d.y + d.A * base.x - d.B * base.y - d.c;
    return out;
}

Matrix f1_derivative_matrix(const NsepPoint& base)
{
    base.validate();
    const Eigen::Index l = base.l(), n = base.n(), m = base.m();
    const Eigen::Index rows = n + m + l;
    const Eigen::Index cols = l * n + l * m + l + n + m;
    Matrix D = Matrix::Zero(rows, cols);
    const Eigen::Index z0 = n + m;
    // dA(i,j) contributes x_j to row i of the third block.
    for (Eigen::Index i = 0; i < l; ++i)
    {
        for (Eigen::Index j = 0; j < n; ++j)
        {
            D(z0 + i, i * n + j) = base.x(j);
        }
        for (Eigen::Index j = 0; j < m; ++j)
        {
            D(z0 + i, l * n + i * m + j) = -base.y(j);
        }
        D(z0 + i, l * n + l * m + i) = -1.0;
    }
    const Eigen::Index xc = l * n + l * m + l;
    D.block(0, xc, n, n) = -Matrix::Identity(n, n);
    D.block(n, xc + n, m, m) = -Matrix::Identity(m, m);
    D.block(z0, xc, l, n) = base.A;
    D.block(z0, xc + n, l, m) = -base.B;
    return D;
}

NsepPoint f1_adjoint_apply(const NsepPoint& base, const Vector& v)
{
    base.validate();
    const Eigen::Index l = base.l(), n = base.n(), m = base.m();
    require_dim(v.size(), n + m + l, "f1 adjoint argument");
    const Vector xp = v.head(n);
    const Vector yp = v.segment(n, m);
    const Vector zp = v.tail(l);
    NsepPoint out;
    out.A = zp * base.x.transpose();
    out.B = -zp * base.y.transpose();
    out.c = -zp;
    out.x = -xp + base.A.transpose() * zp;
    out.y = -yp - base.B.transpose() * zp;
    return out;
}

bool f1_derivative_surjective(const NsepPoint& base)
{
    const Matrix D = f1_derivative_matrix(base);
    return numerical_rank(D, 1e-10) == D.rows();
}

Vector f2_eval(const NsfpPoint& p)
{
    p.validate();
    Vector out(p.n() + p.m());
    out << -p.x, -p.A * p.x - p.b;
    return out;
}

Vector f2_derivative_apply(const NsfpPoint& base, const NsfpPoint& d)
{
    base.validate();
    same_shape(base, d);
    Vector out(base.n() + base.m());
    out << -d.x, -base.A * d.x - d.A * base.x - d.b;
    return out;
}

Matrix f2_derivative_matrix(const NsfpPoint& base)
{
    base.validate();
    const Eigen::Index n = base.n(), m = base.m();
    Matrix D = Matrix::Zero(n + m, m * n + m + n);
    for (Eigen::Index i = 0; i < m; ++i)
    {
        for (Eigen::Index j = 0; j < n; ++j)
        {
            D(n + i, i * n + j) = -base.x(j);
        }
        D(n + i, m * n + i) = -1.0;
    }
    const Eigen::Index xc = m * n + m;
    D.block(0, xc, n, n) = -Matrix::Identity(n, n);
    D.block(n, xc, m, n) = -base.A;
    return D;
}

NsfpPoint f2_adjoint_apply(const NsfpPoint& base, const Vector& v)
{
    base.validate();
    const Eigen::Index n = base.n(), m = base.m();
    require_dim(v.size(), n + m, "f2 adjoint argument");
    const Vector up = v.head(n);
    const Vector vp = v.tail(m);
    NsfpPoint out;
    out.A = -vp * base.x.transpose();
    out.b = -vp;
    out.x = -up - base.A.transpose() * vp;
    return out;
}

bool f2_derivative_surjective(const NsfpPoint& base)
{
    const Matrix D = f2_derivative_matrix(base);
    return numerical_rank(D, 1e-10) == D.rows();
}

bool coderivative_G1_nonempty(const Vector& vbar, const Vector& vprime, const ConstraintSet& C,
                              const ConstraintSet& Q, double tol)
{
    const Eigen::Index n = C.dim(), m = Q.dim();
    const Eigen::Index l = vbar.size() - n - m;
    if (l < 0)
    {
        throw Error(ErrorKind::DimensionMismatch, "vbar shorter than dim C + dim Q");
    }
    require_dim(vprime.size(), vbar.size(), "coderivative argument");
    if (l > 0 && vbar.tail(l).lpNorm<Eigen::Infinity>() > kActiveRelTol)
    {
        throw Error(ErrorKind::PointNotInSet, "third block of vbar must be 0");
    }
    const Cone nc = normal_cone(C, vbar.head(n));
    const Cone nq = normal_cone(Q, vbar.segment(n, m));
    return member(nc, -vprime.head(n), tol) && member(nq, -vprime.segment(n, m), tol);
}

bool coderivative_G2_nonempty(const Vector& ubar, const Vector& vbar, const Vector& uprime,
                              const Vector& vprime, const ConstraintSet& C, const ConstraintSet& Q,
                              double tol)
{
    require_dim(uprime.size(), ubar.size(), "coderivative u'");
    require_dim(vprime.size(), vbar.size(), "coderivative v'");
    const Cone nc = normal_cone(C, ubar);
    const Cone nq = normal_cone(Q, vbar);
    return member(negate(nc), uprime, tol) && member(negate(nq), vprime, tol);
}

} // namespace splitstab
