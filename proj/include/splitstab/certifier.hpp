#pragma once

#include "splitstab/cone.hpp"
#include "splitstab/problem.hpp"

#include <optional>

namespace splitstab
{

enum class Verdict
{
    LipschitzLike,
    NotLipschitzLike,
    Inconclusive,
};

const char* to_string(Verdict v);

/// Cones computed on the way to the verdict, in the order they are formed.
struct VerdictTrace
{
    Cone normal_cone_C;          // N(xbar; C)
    Cone normal_cone_Q;          // N(ybar; Q) or N(A xbar + b; Q)
    Cone preimage_C;             // (A^T)^{-1}(-N(xbar; C))
    Cone preimage_Q;             // (B^T)^{-1}(N(ybar; Q)); for nsfp, N(A xbar + b; Q) itself
    Cone intersection;
};

struct StabilityVerdict
{
    Verdict verdict = Verdict::Inconclusive;
    /// The regularity condition: the intersection cone is {0}.
    bool condition_holds = false;
    /// Nonzero element of the intersection when the condition fails.
    std::optional<Vector> witness;
    /// |reference point|_inf, reported so near-zero cases are visible.
    double reference_norm = 0.0;
    VerdictTrace trace;
};

/// Reference points with |u|_inf <= this are treated as exactly zero.
inline constexpr double kZeroReferenceTol = 1e-12;

/// Split equality: the solution map (A,B,c) -> {(x,y) in C x Q : Ax - By = c}
/// is Lipschitz-like at the reference iff
///
///   (A^T)^{-1}(-N(xbar;C)) ∩ (B^T)^{-1}(N(ybar;Q)) = {0},
///
/// where the "only if" direction needs (xbar, ybar) != 0. When the
/// intersection is nontrivial at the zero reference the verdict is
/// Inconclusive.
StabilityVerdict certify_nsep(const ProblemInstance& p);

/// Split feasibility: x in C, Ax + b in Q. Condition
/// (A^T)^{-1}(-N(xbar;C)) ∩ N(A xbar + b; Q) = {0}; necessity needs xbar != 0.
StabilityVerdict certify_nsfp(const ProblemInstance& p);

/// Dispatches on p.kind.
StabilityVerdict certify(const ProblemInstance& p);

/// Recomputes condition_holds from the stored intersection cone.
bool replay_condition(const VerdictTrace& trace);

} // namespace splitstab
