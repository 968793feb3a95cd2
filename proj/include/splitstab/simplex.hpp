#pragma once

#include "splitstab/common.hpp"

namespace splitstab::lp
{

enum class Status
{
    Optimal,
    Infeasible,
    Unbounded,
};

struct Result
{
    Status status = Status::Infeasible;
    Vector x;
    double objective = 0.0;
    int iterations = 0;
};

struct Options
{
    double feasibility_tol = 1e-9;
    double pivot_tol = 1e-11;
    int max_iterations = 50000;
};

/// Dense two-phase primal simplex for
///
///   minimize c^T x   subject to   A x = b,  x >= 0.
///
/// Bland's rule is used in both phases, so the method terminates on
/// degenerate problems. Phase one minimizes the sum of artificial variables;
/// the problem is declared infeasible when that sum exceeds
/// `feasibility_tol * (1 + |b|_inf)`. Hitting the iteration cap throws
/// ErrorKind::LpFailure rather than guessing a status.
Result solve_standard_form(const Matrix& A, const Vector& b, const Vector& c,
                           const Options& options = {});

} // namespace splitstab::lp
