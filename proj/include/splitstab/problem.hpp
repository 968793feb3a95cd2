#pragma once

#include "splitstab/constraint_set.hpp"
#include "splitstab/ge_operators.hpp"

#include <string>

namespace splitstab
{

enum class ProblemKind
{
    Nsep,
    Nsfp,
};

const char* to_string(ProblemKind kind);

/// Absolute tolerance for the reference point: equality residual and set
/// membership.
inline constexpr double kReferenceFeasibilityTol = 1e-9;

/// One split equality instance (A, B, c, C, Q) at (xbar, ybar), or one split
/// feasibility instance (A, b, C, Q) at xbar. Unused fields are empty.
struct ProblemInstance
{
    ProblemKind kind = ProblemKind::Nsfp;
    Matrix A;
    Matrix B; // nsep
    Vector c; // nsep
    Vector b; // nsfp
    ConstraintSet C = ConstraintSet::orthant(1);
    ConstraintSet Q = ConstraintSet::orthant(1);
    Vector x;
    Vector y; // nsep

    static ProblemInstance nsep(Matrix A, Matrix B, Vector c, ConstraintSet C, ConstraintSet Q, Vector x,
                                Vector y);
    static ProblemInstance nsfp(Matrix A, Vector b, ConstraintSet C, ConstraintSet Q, Vector x);

    /// Throws DimensionMismatch on inconsistent shapes.
    void check_dimensions() const;
    /// Throws InfeasibleReference when the reference point is not a solution.
    void check_feasible() const;

    /// Decision vector u = (x, y) or x.
    Vector decision() const;
    Eigen::Index decision_dim() const;

    NsepPoint nsep_point() const;
    NsfpPoint nsfp_point() const;

    /// Same problem with the reference point replaced; no feasibility check.
    ProblemInstance with_decision(const Vector& u) const;
};

} // namespace splitstab
