#pragma once

#include "splitstab/common.hpp"
#include "splitstab/constraint_set.hpp"

namespace splitstab
{

/// Parameters w = (A, B, c) and decision u = (x, y) of a split equality
/// problem. Also used as the shape of increments.
struct NsepPoint
{
    Matrix A; // l x n
    Matrix B; // l x m
    Vector c; // l
    Vector x; // n
    Vector y; // m

    Eigen::Index n() const { return x.size(); }
    Eigen::Index m() const { return y.size(); }
    Eigen::Index l() const { return c.size(); }

    void validate() const;
    static NsepPoint zeros_like(const NsepPoint& p);
};

/// Parameters w = (A, b) and decision x of a split feasibility problem.
struct NsfpPoint
{
    Matrix A; // m x n
    Vector b; // m
    Vector x; // n

    Eigen::Index n() const { return x.size(); }
    Eigen::Index m() const { return b.size(); }

    void validate() const;
    static NsfpPoint zeros_like(const NsfpPoint& p);
};

// Flattening of the parameter/decision space W x U. Matrices are row-major.
// NSEP: [vec(A) | vec(B) | c | x | y];  NSFP: [vec(A) | b | x].
Vector flatten(const NsepPoint& p);
Vector flatten(const NsfpPoint& p);
NsepPoint unflatten_like(const NsepPoint& shape, const Vector& v);
NsfpPoint unflatten_like(const NsfpPoint& shape, const Vector& v);

// ---- split equality: f1(w, u) = (-x, -y, Ax - By - c) in R^n x R^m x R^l

Vector f1_eval(const NsepPoint& p);

/// grad f1(base)(delta) = (-dx, -dy, A dx - B dy + dA x - dB y - dc).
Vector f1_derivative_apply(const NsepPoint& base, const NsepPoint& delta);

/// Dense matrix of grad f1(base), (n+m+l) x dim(W x U).
Matrix f1_derivative_matrix(const NsepPoint& base);

/// grad f1(base)^* v as a W x U shaped covector, v = (x', y', z').
/// The u-block is (-x' + A^T z', -y' - B^T z'); the w-block is
/// (z' x^T, -z' y^T, -z').
NsepPoint f1_adjoint_apply(const NsepPoint& base, const Vector& v);

/// Full row rank of the derivative (rank == n+m+l, relative tol 1e-10).
bool f1_derivative_surjective(const NsepPoint& base);

// ---- split feasibility: f2(w, x) = (-x, -Ax - b) in R^n x R^m

Vector f2_eval(const NsfpPoint& p);
/// grad f2(base)(delta) = (-dx, -A dx - dA x - db).
Vector f2_derivative_apply(const NsfpPoint& base, const NsfpPoint& delta);
Matrix f2_derivative_matrix(const NsfpPoint& base);
/// v = (u', v'): w-block (-v' x^T, -v'), x-block -u' - A^T v'.
NsfpPoint f2_adjoint_apply(const NsfpPoint& base, const Vector& v);
bool f2_derivative_surjective(const NsfpPoint& base);

// ---- coderivatives of the constant-graph maps G1 = C x Q x {0}, G2 = C x Q

/// D*G1(vbar)(v') is {(0,0)} iff -v' lies in N(xbar;C) x N(ybar;Q) x R^l,
/// and empty otherwise. Returns whether it is nonempty.
/// vbar = (xbar, ybar, 0) must belong to C x Q x {0}.
bool coderivative_G1_nonempty(const Vector& vbar, const Vector& vprime, const ConstraintSet& C,
                              const ConstraintSet& Q, double tol = 1e-9);

/// D*G2(ubar, vbar)(u', v') is {(0,0)} iff u' in -N(ubar;C) and
/// v' in -N(vbar;Q).
bool coderivative_G2_nonempty(const Vector& ubar, const Vector& vbar, const Vector& uprime,
                              const Vector& vprime, const ConstraintSet& C, const ConstraintSet& Q,
                              double tol = 1e-9);

} // namespace splitstab
