#pragma once

#include "splitstab/problem.hpp"

#include <cstdint>
#include <vector>

namespace splitstab
{

struct SolveOptions
{
    int max_iterations = 100000;
    double tol = 1e-8;
    /// Line search along the last step of the affine side; plain cyclic
    /// projections when false.
    bool extrapolate = true;
    /// Store the residual after every iteration in SolveReport::history.
    bool record_history = false;
};

struct SolveReport
{
    Vector point;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;
};

/// |Ax - By - c|_2 + dist(x, C) + dist(y, Q). Distance terms fall back to a
/// 0 / infinity membership penalty for sets without a projection rule.
double residual_nsep(const ProblemInstance& p, const Vector& x, const Vector& y);

/// dist(x, C) + dist(Ax + b, Q), same conventions.
double residual_nsfp(const ProblemInstance& p, const Vector& x);

/// Residual of a decision vector u = (x, y) or x.
double residual(const ProblemInstance& p, const Vector& u);

/// Membership tests at tolerance tol: x in C, y in Q and |Ax - By - c|_inf <= tol
/// (nsep), or x in C and Ax + b in Q (nsfp).
bool is_feasible(const ProblemInstance& p, const Vector& u, double tol);

/// Cyclic projections between C x Q and the affine set {Ax - By = c} (nsep),
/// or between C and the pullback of Q (nsfp). Holds a reference to the
/// instance and the pseudo-inverse of the affine side, so one solver can
/// repair many starting points.
class AlternatingSolver
{
public:
    /// Throws UnsupportedVariant when C or Q has no projection rule.
    explicit AlternatingSolver(const ProblemInstance& p);

    SolveReport solve(const Vector& start, const SolveOptions& opt = {}) const;

private:
    Vector set_side(const Vector& u) const;
    Vector affine_side(const Vector& u) const;
    double coupling(const Vector& u) const;

    const ProblemInstance& p_;
    Matrix M_;
    Matrix pinv_;
};

/// Cyclic projections between C x Q and the affine set {Ax - By = c} (nsep),
/// or between C and the pullback of Q, where the pullback step projects
/// Ax + b onto Q and corrects x by least squares (nsfp). Nonconvex sets make
/// this best effort; convergence is declared only after the membership tests
/// pass. Without convergence the best point seen is returned.
SolveReport solve_alternating(const ProblemInstance& p, const Vector& start, const SolveOptions& opt = {});

struct SampleOptions
{
    int max_iterations = 2000;
    double tol = 1e-8;
};

/// Up to `count` feasible points in B(center, radius): uniform candidates in
/// the ball, each repaired by solve_alternating and kept when it converges
/// and stays in the ball. Candidates are evaluated in parallel; output is in
/// candidate order and identical for a fixed seed.
std::vector<Vector> sample_solutions(const ProblemInstance& p, const Vector& center, double radius, int count,
                                     std::uint64_t seed, const SampleOptions& opt = {});

/// Single-threaded reference for sample_solutions; same output.
std::vector<Vector> sample_solutions_serial(const ProblemInstance& p, const Vector& center, double radius,
                                            int count, std::uint64_t seed, const SampleOptions& opt = {});

} // namespace splitstab
