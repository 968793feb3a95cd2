#pragma once

// Independent triviality oracle for cones {z : E z = G lambda + L mu, lambda >= 0}.
// Uses nonnegative least squares and singular vectors only; no LP.

#include "splitstab/cone.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace oracle
{

using splitstab::Matrix;
using splitstab::Vector;

// Lawson-Hanson active set method for min |A x - b|, x >= 0.
inline Vector nnls(const Matrix& A, const Vector& b, int max_iter = 500)
{
    const Eigen::Index n = A.cols();
    Vector x = Vector::Zero(n);
    if (n == 0)
    {
        return x;
    }
    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    const double tol = 1e-12 * (1.0 + A.norm()) * (1.0 + b.norm());
    for (int outer = 0; outer < max_iter; ++outer)
    {
        const Vector w = A.transpose() * (b - A * x);
        Eigen::Index best = -1;
        double best_w = tol;
        for (Eigen::Index j = 0; j < n; ++j)
        {
            if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w)
            {
                best_w = w(j);
                best = j;
            }
        }
        if (best < 0)
        {
            break;
        }
        passive[static_cast<std::size_t>(best)] = true;
        for (int inner = 0; inner < max_iter; ++inner)
        {
            std::vector<Eigen::Index> idx;
            for (Eigen::Index j = 0; j < n; ++j)
            {
                if (passive[static_cast<std::size_t>(j)])
                {
                    idx.push_back(j);
                }
            }
            Matrix Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
            for (std::size_t k = 0; k < idx.size(); ++k)
            {
                Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
            }
            const Vector zp = Ap.completeOrthogonalDecomposition().solve(b);
            Vector z = Vector::Zero(n);
            for (std::size_t k = 0; k < idx.size(); ++k)
            {
                z(idx[k]) = zp(static_cast<Eigen::Index>(k));
            }
            bool all_pos = true;
            for (const Eigen::Index j : idx)
            {
                all_pos = all_pos && z(j) > 0.0;
            }
            if (all_pos)
            {
                x = z;
                break;
            }
            double alpha = 1.0;
            for (const Eigen::Index j : idx)
            {
                if (z(j) <= 0.0)
                {
                    alpha = std::min(alpha, x(j) / (x(j) - z(j)));
                }
            }
            x += alpha * (z - x);
            for (const Eigen::Index j : idx)
            {
                if (x(j) <= 1e-15)
                {
                    x(j) = 0.0;
                    passive[static_cast<std::size_t>(j)] = false;
                }
            }
        }
    }
    return x;
}

// Orthogonal projector onto the complement of range(W).
inline Matrix complement_projector(const Matrix& W, Eigen::Index rows)
{
    Matrix P = Matrix::Identity(rows, rows);
    if (W.cols() == 0)
    {
        return P;
    }
    Eigen::JacobiSVD<Matrix> svd(W, Eigen::ComputeThinU);
    const double cutoff = 1e-12 * std::max(1.0, svd.singularValues()(0));
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    {
        if (svd.singularValues()(i) > cutoff)
        {
            P -= svd.matrixU().col(i) * svd.matrixU().col(i).transpose();
        }
    }
    return P;
}

struct Fit
{
    double residual = 0.0;
    Vector lambda;
};

// min over lambda >= 0, mu of |E z - G lambda - L mu|_2.
inline Fit cone_fit(const splitstab::Cone& k, const Vector& z)
{
    const Matrix P = complement_projector(k.L(), k.E().rows());
    const Vector t = P * (k.E() * z);
    const Matrix PG = P * k.G();
    Fit f;
    f.lambda = nnls(PG, t);
    f.residual = (t - PG * f.lambda).norm();
    return f;
}

inline double cone_residual(const splitstab::Cone& k, const Vector& z)
{
    return cone_fit(k, z).residual;
}

struct SampledTriviality
{
    bool nontrivial = false;
    Vector direction;
    double residual = std::numeric_limits<double>::infinity();
};

// Samples unit directions, then polishes the most promising ones: with the
// support S of the current multipliers fixed, the unit vector minimizing the
// residual is the smallest right singular vector of P_S E, where P_S projects
// onto the complement of span(G_S, L).
inline SampledTriviality sampled_triviality(const splitstab::Cone& k, int directions = 10000,
                                            unsigned seed = 7, int polish = 40)
{
    const Eigen::Index d = k.ambient_dim();
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    std::vector<std::pair<double, Vector>> scored;
    scored.reserve(static_cast<std::size_t>(directions));
    for (int i = 0; i < directions; ++i)
    {
        Vector v(d);
        for (Eigen::Index j = 0; j < d; ++j)
        {
            v(j) = normal(gen);
        }
        v.normalize();
        scored.emplace_back(cone_residual(k, v), v);
    }
    std::partial_sort(scored.begin(), scored.begin() + std::min<std::ptrdiff_t>(polish, directions), scored.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

    SampledTriviality out;
    const double scale = 1.0 + k.E().norm() + k.G().norm() + k.L().norm();
    for (int s = 0; s < std::min(polish, directions); ++s)
    {
        Vector v = scored[static_cast<std::size_t>(s)].second;
        for (int it = 0; it < 30; ++it)
        {
            const Fit f = cone_fit(k, v);
            if (f.residual < out.residual)
            {
                out.residual = f.residual;
                out.direction = v;
            }
            if (f.residual <= 1e-13 * scale)
            {
                break;
            }
            std::vector<Eigen::Index> support;
            for (Eigen::Index j = 0; j < f.lambda.size(); ++j)
            {
                if (f.lambda(j) > 0.0)
                {
                    support.push_back(j);
                }
            }
            Matrix W(k.E().rows(), static_cast<Eigen::Index>(support.size()) + k.L().cols());
            for (std::size_t j = 0; j < support.size(); ++j)
            {
                W.col(static_cast<Eigen::Index>(j)) = k.G().col(support[j]);
            }
            W.rightCols(k.L().cols()) = k.L();
            const Matrix PE = complement_projector(W, k.E().rows()) * k.E();
            Eigen::JacobiSVD<Matrix> svd(PE, Eigen::ComputeFullV);
            Vector next = svd.matrixV().col(d - 1);
            if (next.dot(v) < 0.0)
            {
                next = -next;
            }
            if ((next - v).norm() < 1e-14)
            {
                break;
            }
            v = next;
        }
    }
    out.nontrivial = out.residual <= 1e-9 * scale;
    return out;
}

} // namespace oracle
