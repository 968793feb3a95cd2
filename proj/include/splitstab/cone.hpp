#pragma once

#include "splitstab/common.hpp"

#include <optional>
#include <string>

namespace splitstab
{

enum class ConeClass
{
    Zero,
    Ray,
    Line,
    HalflineProduct,
    Full,
    General,
};

const char* to_string(ConeClass c);

/// Polyhedral cone in implicit-generated form
///
///   K = { z in R^d : E z = G lambda + L mu,  lambda >= 0 }.
///
/// Cones coming out of the set catalog have E = I (plain generator form).
/// Negation, transpose-preimage, product and intersection only ever compose
/// or stack these matrices, so no vertex/facet enumeration is needed.
class Cone
{
public:
    /// {z : E z in cone(G) + span(L)}. G and L must have E.rows() rows; a
    /// matrix with zero columns is allowed.
    Cone(Matrix E, Matrix G, Matrix L);

    static Cone zero(Eigen::Index dim);
    static Cone full(Eigen::Index dim);
    /// Generator form {G lambda + L mu : lambda >= 0}.
    static Cone generated(const Matrix& G, const Matrix& L);
    static Cone ray(const Vector& g);
    static Cone line(const Vector& g);

    Eigen::Index ambient_dim() const { return E_.cols(); }
    const Matrix& E() const { return E_; }
    const Matrix& G() const { return G_; }
    const Matrix& L() const { return L_; }

    /// True when E is the identity, i.e. the cone is stored by generators.
    bool is_generator_form() const { return generator_form_; }

    /// Syntactically the zero cone (generator form with no generators).
    bool is_canonical_zero() const { return generator_form_ && G_.cols() == 0 && L_.cols() == 0; }

private:
    Matrix E_;
    Matrix G_;
    Matrix L_;
    bool generator_form_ = false;
};

Cone negate(const Cone& k);

/// {z in R^l : M^T z in K} for an l x n matrix M and K in R^n.
Cone preimage_transpose(const Matrix& M, const Cone& k);

Cone intersect(const Cone& a, const Cone& b);

/// K1 x K2.
Cone product(const Cone& a, const Cone& b);

struct TrivialityResult
{
    bool trivial = true;
    /// Nonzero element with |z|_inf = 1, present iff !trivial.
    std::optional<Vector> witness;
};

/// Decides K == {0}. For each coordinate i and sign s a feasibility LP
/// {E z = G lambda + L mu, lambda >= 0, z_i = s} is solved; any nonzero
/// element rescales to one of these. Witnesses are renormalized to
/// |z|_inf = 1 and re-verified with member(K, z, 1e-8).
TrivialityResult is_trivial(const Cone& k);

/// True iff min over lambda >= 0, mu of |E z - G lambda - L mu|_2 is <= tol.
bool member(const Cone& k, const Vector& z, double tol);

/// Minimal residual |E z - G lambda - L mu| over feasible multipliers (L1
/// minimizer, reported in the Euclidean norm).
double membership_residual(const Cone& k, const Vector& z);

struct ConeSummary
{
    ConeClass kind = ConeClass::General;
    /// Unit generator for rays/lines.
    std::optional<Vector> direction;
};

/// Human-readable classification used in reports. Generator-form cones are
/// classified from their generators; derived cones are classified by LP
/// probes (zero / full / one-dimensional).
ConeSummary classify(const Cone& k);

std::string describe(const Cone& k);

} // namespace splitstab
