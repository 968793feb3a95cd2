#include "splitstab/feasibility.hpp"

#include "splitstab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace splitstab
{
namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

// Points within this membership tolerance count as distance 0, which saves
// a projection for points that were just projected.
constexpr double kOnSetTol = 1e-13;

double set_distance(const ConstraintSet& set, const Vector& x)
{
    if (contains(set, x, kOnSetTol))
    {
        return 0.0;
    }
    return set.has_projection() ? distance(set, x) : kInf;
}

struct Candidate
{
    Vector w; // affine-side point
    Vector z; // its set-side projection
    double merit = kInf;
};

} // namespace

double residual_nsep(const ProblemInstance& p, const Vector& x, const Vector& y)
{
    require_dim(x.size(), p.A.cols(), "x");
    require_dim(y.size(), p.B.cols(), "y");
    return (p.A * x - p.B * y - p.c).norm() + set_distance(p.C, x) + set_distance(p.Q, y);
}

double residual_nsfp(const ProblemInstance& p, const Vector& x)
{
    require_dim(x.size(), p.A.cols(), "x");
    return set_distance(p.C, x) + set_distance(p.Q, p.A * x + p.b);
}

double residual(const ProblemInstance& p, const Vector& u)
{
    require_dim(u.size(), p.decision_dim(), "decision vector");
    if (p.kind == ProblemKind::Nsfp)
    {
        return residual_nsfp(p, u);
    }
    const Eigen::Index n = p.x.size();
    return residual_nsep(p, u.head(n), u.tail(u.size() - n));
}

bool is_feasible(const ProblemInstance& p, const Vector& u, double tol)
{
    require_dim(u.size(), p.decision_dim(), "decision vector");
    const Eigen::Index n = p.x.size();
    const Vector x = u.head(n);
    if (!contains(p.C, x, tol))
    {
        return false;
    }
    if (p.kind == ProblemKind::Nsfp)
    {
        return contains(p.Q, p.A * x + p.b, tol);
    }
    const Vector y = u.tail(u.size() - n);
    return contains(p.Q, y, tol) && (p.A * x - p.B * y - p.c).lpNorm<Eigen::Infinity>() <= tol;
}

AlternatingSolver::AlternatingSolver(const ProblemInstance& p) : p_(p)
{
    if (!p.C.has_projection() || !p.Q.has_projection())
    {
        throw Error(ErrorKind::UnsupportedVariant, "solve_alternating needs projections onto C and Q");
    }
    if (p.kind == ProblemKind::Nsep)
    {
        M_.resize(p.A.rows(), p.A.cols() + p.B.cols());
        M_ << p.A, -p.B;
        pinv_ = Eigen::CompleteOrthogonalDecomposition<Matrix>(M_).pseudoInverse();
    }
    else
    {
        pinv_ = Eigen::CompleteOrthogonalDecomposition<Matrix>(p.A).pseudoInverse();
    }
}

// Projection onto C x Q, or onto C.
Vector AlternatingSolver::set_side(const Vector& u) const
{
    const Eigen::Index n = p_.x.size();
    if (p_.kind == ProblemKind::Nsfp)
    {
        return project(p_.C, u);
    }
    Vector out(u.size());
    out << project(p_.C, u.head(n)), project(p_.Q, u.tail(u.size() - n));
    return out;
}

// Least-norm correction onto {Ax - By = c}, or the pullback step.
Vector AlternatingSolver::affine_side(const Vector& u) const
{
    if (p_.kind == ProblemKind::Nsep)
    {
        return u - pinv_ * (M_ * u - p_.c);
    }
    const Vector image = p_.A * u + p_.b;
    return u + pinv_ * (project(p_.Q, image) - image);
}

// Violation of the coupling constraint for u on the set side.
double AlternatingSolver::coupling(const Vector& u) const
{
    if (p_.kind == ProblemKind::Nsep)
    {
        return (M_ * u - p_.c).norm();
    }
    return set_distance(p_.Q, p_.A * u + p_.b);
}

SolveReport AlternatingSolver::solve(const Vector& start, const SolveOptions& opt) const
{
    const ProblemInstance& p = p_;
    require_dim(start.size(), p.decision_dim(), "start");
    SolveReport report;
    const auto done = [&](const Vector& u, double res) {
        return res <= opt.tol && is_feasible(p, u, opt.tol);
    };

    report.point = start;
    report.residual = std::numeric_limits<double>::infinity();
    if (is_feasible(p, start, opt.tol))
    {
        report.residual = residual(p, start);
        if (done(start, report.residual))
        {
            report.converged = true;
            return report;
        }
    }

    Vector z = set_side(start);
    double merit = coupling(z);
    std::optional<Vector> w_prev;

    for (int it = 1; it <= opt.max_iterations; ++it)
    {
        const Vector w = affine_side(z);
        Candidate best{w, set_side(w), 0.0};
        best.merit = coupling(best.z);

        if (opt.extrapolate && w_prev)
        {
            const Vector d = w - *w_prev;
            const auto trial = [&](double t) {
                Candidate c{*w_prev + t * d, {}, 0.0};
                c.z = set_side(c.w);
                c.merit = coupling(c.z);
                return c;
            };
            // Near a transversal crossing of the two sides the iterates
            // contract towards the crossing by the merit ratio rho per
            // cycle, so the crossing sits at step 1 / (1 - rho).
            bool jumped = false;
            if (best.merit > 0.0 && best.merit < merit)
            {
                const double t = std::min(1.0 / (1.0 - best.merit / merit), 1e6);
                if (t > 1.5)
                {
                    Candidate c = trial(t);
                    if (c.merit < best.merit)
                    {
                        best = std::move(c);
                        jumped = true;
                    }
                }
            }
            // Otherwise double the step while the merit improves.
            for (double t = 2.0; !jumped && t <= 1048576.0; t *= 2.0)
            {
                Candidate c = trial(t);
                if (!(c.merit < best.merit))
                {
                    break;
                }
                best = std::move(c);
            }
        }

        w_prev = best.w;
        z = std::move(best.z);
        merit = best.merit;
        const double res = residual(p, z);
        if (opt.record_history)
        {
            report.history.push_back(res);
        }
        report.iterations = it;
        if (res < report.residual)
        {
            report.residual = res;
            report.point = z;
        }
        if (done(z, res))
        {
            report.point = z;
            report.residual = res;
            report.converged = true;
            return report;
        }
        if (merit == 0.0 && res > opt.tol)
        {
            // Set side and coupling agree but membership fails: stuck.
            break;
        }
    }
    return report;
}

SolveReport solve_alternating(const ProblemInstance& p, const Vector& start, const SolveOptions& opt)
{
    return AlternatingSolver(p).solve(start, opt);
}

namespace
{

std::optional<Vector> sample_one(const ProblemInstance& p, const AlternatingSolver& solver, const Vector& center,
                                 double radius, std::uint64_t seed, int index, const SampleOptions& opt)
{
    Rng rng(stream_seed(seed, 0x5a4d504c45ULL, static_cast<std::uint64_t>(index)));
    const Vector start = center + radius * rng.unit_ball(center.size());
    SolveOptions so;
    so.max_iterations = opt.max_iterations;
    so.tol = opt.tol;
    const SolveReport rep = solver.solve(start, so);
    if (!rep.converged || (rep.point - center).norm() > radius || !is_feasible(p, rep.point, opt.tol))
    {
        return std::nullopt;
    }
    return rep.point;
}

std::vector<Vector> compact(std::vector<std::optional<Vector>>& slots)
{
    std::vector<Vector> out;
    for (auto& s : slots)
    {
        if (s)
        {
            out.push_back(std::move(*s));
        }
    }
    return out;
}

void check_sample_args(const ProblemInstance& p, const Vector& center, double radius)
{
    require_dim(center.size(), p.decision_dim(), "sample center");
    if (!(radius > 0.0))
    {
        throw Error(ErrorKind::InvalidArgument, "sample radius must be positive");
    }
    if (!p.C.has_projection() || !p.Q.has_projection())
    {
        throw Error(ErrorKind::UnsupportedVariant, "sampling needs projections onto C and Q");
    }
}

} // namespace

std::vector<Vector> sample_solutions(const ProblemInstance& p, const Vector& center, double radius, int count,
                                     std::uint64_t seed, const SampleOptions& opt)
{
    check_sample_args(p, center, radius);
    const AlternatingSolver solver(p);
    std::vector<std::optional<Vector>> slots(static_cast<std::size_t>(std::max(count, 0)));
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < count; ++i)
    {
        slots[static_cast<std::size_t>(i)] = sample_one(p, solver, center, radius, seed, i, opt);
    }
    return compact(slots);
}

std::vector<Vector> sample_solutions_serial(const ProblemInstance& p, const Vector& center, double radius,
                                            int count, std::uint64_t seed, const SampleOptions& opt)
{
    check_sample_args(p, center, radius);
    const AlternatingSolver solver(p);
    std::vector<std::optional<Vector>> slots(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i)
    {
        slots[static_cast<std::size_t>(i)] = sample_one(p, solver, center, radius, seed, i, opt);
    }
    return compact(slots);
}

} // namespace splitstab
