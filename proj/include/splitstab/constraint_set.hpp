#pragma once

#include "splitstab/common.hpp"
#include "splitstab/cone.hpp"

#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace splitstab
{

class ConstraintSet;

/// { x : rows.row(i) . x <= rhs(i) for all i }
struct Polyhedron
{
    Matrix rows;
    Vector rhs;
};

/// Per-coordinate closed intervals; bounds may be +-infinity.
struct Box
{
    Vector lower;
    Vector upper;
};

/// Nonnegative orthant R_+^dim.
struct Orthant
{
    Eigen::Index dim = 1;
};

struct Singleton
{
    Vector point;
};

/// f^{-1}([theta_lo, theta_hi]) with f(x) = x^T P x + q^T x + r, P symmetric.
struct QuadraticSublevel
{
    Matrix P;
    Vector q;
    double r = 0.0;
    double theta_lo = -std::numeric_limits<double>::infinity();
    double theta_hi = std::numeric_limits<double>::infinity();

    double value(const Vector& x) const { return x.dot(P * x) + q.dot(x) + r; }
    Vector gradient(const Vector& x) const { return 2.0 * (P * x) + q; }

    // Filled by ConstraintSet::quadratic; projection reuses it.
    Vector eigenvalues;
    Matrix eigenvectors;
    double isotropic_alpha = 0.0; // nonzero iff P == alpha I
    bool has_critical_points = false;
    Vector critical_point;  // a solution of 2Px + q = 0
    Matrix critical_basis;  // orthonormal basis of ker P
};

struct Product
{
    std::vector<ConstraintSet> factors;
};

/// A nonempty closed set from the supported catalog. Construction goes
/// through the named factories, which validate dimensions and probe for
/// nonemptiness (ErrorKind::EmptySet on failure).
class ConstraintSet
{
public:
    using Variant = std::variant<Polyhedron, Box, Orthant, Singleton, QuadraticSublevel, Product>;

    static ConstraintSet polyhedron(Matrix rows, Vector rhs);
    static ConstraintSet box(Vector lower, Vector upper);
    static ConstraintSet orthant(Eigen::Index dim);
    static ConstraintSet singleton(Vector point);
    static ConstraintSet quadratic(Matrix P, Vector q, double r, double theta_lo, double theta_hi);
    static ConstraintSet product(std::vector<ConstraintSet> factors);

    /// R^dim as an unbounded box.
    static ConstraintSet whole_space(Eigen::Index dim);
    /// {x : r_inner^2 <= |x - center|^2 <= r_outer^2}.
    static ConstraintSet annulus(const Vector& center, double r_inner, double r_outer);

    Eigen::Index dim() const { return dim_; }
    const Variant& variant() const { return v_; }
    std::string kind_name() const;

    bool is_convex() const;
    bool has_projection() const;

private:
    explicit ConstraintSet(Variant v);
    Variant v_;
    Eigen::Index dim_ = 0;
};

bool contains(const ConstraintSet& set, const Vector& x, double tol);

/// Tolerance used to decide that a constraint is active at x:
/// |residual| <= kActiveRelTol * (1 + data scale).
inline constexpr double kActiveRelTol = 1e-9;

/// Limiting normal cone N(x; set). Requires x in the set (within the active
/// tolerance); throws PointNotInSet otherwise. For quadratic sublevel sets a
/// vanishing gradient at an active bound throws QualificationFailure.
Cone normal_cone(const ConstraintSet& set, const Vector& x);

/// A nearest point of the set. Throws UnsupportedVariant when no projection
/// rule exists for the variant.
Vector project(const ConstraintSet& set, const Vector& x);

/// |x - project(set, x)|_2.
double distance(const ConstraintSet& set, const Vector& x);

struct DykstraOptions
{
    int max_cycles = 100000;
    double tol = 1e-10;
};

Vector project_polyhedron(const Polyhedron& poly, const Vector& x, const DykstraOptions& opt = {});

} // namespace splitstab
