#include "splitstab/problem.hpp"

#include <sstream>

namespace splitstab
{

const char* to_string(ProblemKind kind)
{
    return kind == ProblemKind::Nsep ? "nsep" : "nsfp";
}

ProblemInstance ProblemInstance::nsep(Matrix A, Matrix B, Vector c, ConstraintSet C, ConstraintSet Q,
                                      Vector x, Vector y)
{
    ProblemInstance p;
    p.kind = ProblemKind::Nsep;
    p.A = std::move(A);
    p.B = std::move(B);
    p.c = std::move(c);
    p.C = std::move(C);
    p.Q = std::move(Q);
    p.x = std::move(x);
    p.y = std::move(y);
    p.check_dimensions();
    return p;
}

ProblemInstance ProblemInstance::nsfp(Matrix A, Vector b, ConstraintSet C, ConstraintSet Q, Vector x)
{
    ProblemInstance p;
    p.kind = ProblemKind::Nsfp;
    p.A = std::move(A);
    p.b = std::move(b);
    p.C = std::move(C);
    p.Q = std::move(Q);
    p.x = std::move(x);
    p.check_dimensions();
    return p;
}

void ProblemInstance::check_dimensions() const
{
    require_dim(C.dim(), A.cols(), "dim C vs columns of A");
    require_dim(x.size(), A.cols(), "reference x vs columns of A");
    if (kind == ProblemKind::Nsep)
    {
        require_dim(B.rows(), A.rows(), "rows of B vs rows of A");
        require_dim(c.size(), A.rows(), "c vs rows of A");
        require_dim(Q.dim(), B.cols(), "dim Q vs columns of B");
        require_dim(y.size(), B.cols(), "reference y vs columns of B");
    }
    else
    {
        require_dim(b.size(), A.rows(), "b vs rows of A");
        require_dim(Q.dim(), A.rows(), "dim Q vs rows of A");
    }
}

void ProblemInstance::check_feasible() const
{
    check_dimensions();
    const double tol = kReferenceFeasibilityTol;
    std::ostringstream why;
    if (!contains(C, x, tol))
    {
        why << "x is not in C";
    }
    else if (kind == ProblemKind::Nsep)
    {
        const double res = (A * x - B * y - c).norm();
        if (!contains(Q, y, tol))
        {
            why << "y is not in Q";
        }
        else if (res > tol)
        {
            why << "|Ax - By - c| = " << res;
        }
    }
    else
    {
        const Vector image = A * x + b;
        if (!contains(Q, image, tol))
        {
            why << "Ax + b is not in Q";
            if (Q.has_projection())
            {
                why << " (distance " << distance(Q, image) << ")";
            }
        }
    }
    const std::string msg = why.str();
    if (!msg.empty())
    {
        throw Error(ErrorKind::InfeasibleReference, msg);
    }
}

Vector ProblemInstance::decision() const
{
    if (kind == ProblemKind::Nsfp)
    {
        return x;
    }
    Vector u(x.size() + y.size());
    u << x, y;
    return u;
}

Eigen::Index ProblemInstance::decision_dim() const
{
    return kind == ProblemKind::Nsfp ? x.size() : x.size() + y.size();
}

NsepPoint ProblemInstance::nsep_point() const
{
    return {A, B, c, x, y};
}

NsfpPoint ProblemInstance::nsfp_point() const
{
    return {A, b, x};
}

ProblemInstance ProblemInstance::with_decision(const Vector& u) const
{
    require_dim(u.size(), decision_dim(), "decision vector");
    ProblemInstance p = *this;
    p.x = u.head(x.size());
    if (kind == ProblemKind::Nsep)
    {
        p.y = u.tail(y.size());
    }
    return p;
}

} // namespace splitstab
