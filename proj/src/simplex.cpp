#include "splitstab/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace splitstab::lp
{
namespace
{

// Tableau layout: rows 0..m-1 are constraints, column `cols` is the RHS.
// The objective row is kept separately as reduced costs.
class Tableau
{
public:
    Tableau(Matrix body, std::vector<int> basis) : t_(std::move(body)), basis_(std::move(basis)) {}

    Eigen::Index rows() const { return t_.rows(); }
    Eigen::Index cols() const { return t_.cols() - 1; }
    double rhs(Eigen::Index i) const { return t_(i, cols()); }
    double at(Eigen::Index i, Eigen::Index j) const { return t_(i, j); }
    const std::vector<int>& basis() const { return basis_; }

    void pivot(Eigen::Index row, Eigen::Index col)
    {
        t_.row(row) /= t_(row, col);
        for (Eigen::Index i = 0; i < t_.rows(); ++i)
        {
            if (i != row && t_(i, col) != 0.0)
            {
                t_.row(i) -= t_(i, col) * t_.row(row);
            }
        }
        basis_[static_cast<std::size_t>(row)] = static_cast<int>(col);
    }

    void drop_row(Eigen::Index row)
    {
        Matrix next(t_.rows() - 1, t_.cols());
        next.topRows(row) = t_.topRows(row);
        next.bottomRows(t_.rows() - row - 1) = t_.bottomRows(t_.rows() - row - 1);
        t_ = std::move(next);
        basis_.erase(basis_.begin() + row);
    }

    // Reduced costs for cost vector `c` restricted to columns [0, active_cols).
    Vector reduced_costs(const Vector& c, Eigen::Index active_cols) const
    {
        Vector d = c.head(active_cols);
        for (Eigen::Index i = 0; i < rows(); ++i)
        {
            const double cb = c(basis_[static_cast<std::size_t>(i)]);
            if (cb != 0.0)
            {
                d -= cb * t_.row(i).head(active_cols).transpose();
            }
        }
        return d;
    }

    Vector primal(Eigen::Index n) const
    {
        Vector x = Vector::Zero(n);
        for (Eigen::Index i = 0; i < rows(); ++i)
        {
            const int j = basis_[static_cast<std::size_t>(i)];
            if (j < n)
            {
                x(j) = rhs(i);
            }
        }
        return x;
    }

private:
    Matrix t_;
    std::vector<int> basis_;
};

enum class Phase
{
    Optimal,
    Unbounded,
};

// Runs Bland-rule simplex iterations over columns [0, active_cols).
Phase iterate(Tableau& tab, const Vector& c, Eigen::Index active_cols, const Options& opt,
              int& iterations)
{
    while (true)
    {
        if (iterations >= opt.max_iterations)
        {
            throw Error(ErrorKind::LpFailure,
                        "simplex iteration cap of " + std::to_string(opt.max_iterations) + " reached");
        }
        const Vector d = tab.reduced_costs(c, active_cols);
        Eigen::Index entering = -1;
        for (Eigen::Index j = 0; j < active_cols; ++j)
        {
            if (d(j) < -opt.feasibility_tol)
            {
                entering = j;
                break;
            }
        }
        if (entering < 0)
        {
            return Phase::Optimal;
        }

        Eigen::Index leaving = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < tab.rows(); ++i)
        {
            const double a = tab.at(i, entering);
            if (a > opt.pivot_tol)
            {
                const double ratio = tab.rhs(i) / a;
                if (leaving < 0)
                {
                    best_ratio = ratio;
                    leaving = i;
                    continue;
                }
                const double slack = 1e-15 * (1.0 + std::abs(best_ratio));
                const bool better = ratio < best_ratio - slack;
                const bool tie = !better && std::abs(ratio - best_ratio) <= slack;
                if (better || (tie && tab.basis()[static_cast<std::size_t>(i)] <
                                          tab.basis()[static_cast<std::size_t>(leaving)]))
                {
                    best_ratio = ratio;
                    leaving = i;
                }
            }
        }
        if (leaving < 0)
        {
            return Phase::Unbounded;
        }
        tab.pivot(leaving, entering);
        ++iterations;
    }
}

} // namespace

Result solve_standard_form(const Matrix& A, const Vector& b, const Vector& c, const Options& opt)
{
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    require_dim(b.size(), m, "simplex rhs");
    require_dim(c.size(), n, "simplex cost");

    Result result;
    if (m == 0)
    {
        result.x = Vector::Zero(n);
        if ((c.array() < -opt.feasibility_tol).any())
        {
            result.status = Status::Unbounded;
            return result;
        }
        result.status = Status::Optimal;
        return result;
    }

    // [A | I | b] with rows flipped so that b >= 0.
    Matrix body = Matrix::Zero(m, n + m + 1);
    for (Eigen::Index i = 0; i < m; ++i)
    {
        const double sign = b(i) < 0.0 ? -1.0 : 1.0;
        body.row(i).head(n) = sign * A.row(i);
        body(i, n + i) = 1.0;
        body(i, n + m) = sign * b(i);
    }
    std::vector<int> basis(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i)
    {
        basis[static_cast<std::size_t>(i)] = static_cast<int>(n + i);
    }
    Tableau tab(std::move(body), std::move(basis));

    Vector phase1_cost = Vector::Zero(n + m);
    phase1_cost.tail(m).setOnes();
    int iterations = 0;
    iterate(tab, phase1_cost, n + m, opt, iterations);

    double artificial_sum = 0.0;
    for (Eigen::Index i = 0; i < tab.rows(); ++i)
    {
        if (tab.basis()[static_cast<std::size_t>(i)] >= n)
        {
            artificial_sum += tab.rhs(i);
        }
    }
    const double scale = 1.0 + b.lpNorm<Eigen::Infinity>();
    if (artificial_sum > opt.feasibility_tol * scale)
    {
        result.status = Status::Infeasible;
        result.iterations = iterations;
        result.objective = artificial_sum;
        return result;
    }

    // Drive remaining (zero-valued) artificials out of the basis; rows where
    // that is impossible are linearly dependent and are removed.
    for (Eigen::Index i = tab.rows() - 1; i >= 0; --i)
    {
        if (tab.basis()[static_cast<std::size_t>(i)] < n)
        {
            continue;
        }
        Eigen::Index col = -1;
        for (Eigen::Index j = 0; j < n; ++j)
        {
            if (std::abs(tab.at(i, j)) > 1e-9)
            {
                col = j;
                break;
            }
        }
        if (col >= 0)
        {
            tab.pivot(i, col);
        }
        else
        {
            tab.drop_row(i);
        }
    }

    Vector phase2_cost = Vector::Zero(n + m);
    phase2_cost.head(n) = c;
    const Phase phase2 = iterate(tab, phase2_cost, n, opt, iterations);
    result.iterations = iterations;
    result.x = tab.primal(n).cwiseMax(0.0);
    result.objective = c.dot(result.x);
    result.status = phase2 == Phase::Optimal ? Status::Optimal : Status::Unbounded;
    return result;
}

} // namespace splitstab::lp
