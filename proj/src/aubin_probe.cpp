#include "splitstab/aubin_probe.hpp"

#include "splitstab/feasibility.hpp"
#include "splitstab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace splitstab
{
namespace
{

constexpr std::uint64_t kParamStream = 1;
constexpr std::uint64_t kDiscStream = 2;
constexpr std::uint64_t kEvalStream = 3;

// Normalized perturbation: a point of the unit ball of the parameter norm
// |dA|_max + |dB|_max + |dc|_max (or |dA|_max + |db|_max).
struct Perturbation
{
    Matrix A;
    Matrix B;
    Vector c;
    Vector b;
};

// Uniform draw from the unit ball of a sum of k-dimensional max-norms. The
// block radii (rho_1, ..., rho_n) have density proportional to
// prod rho_i^(k_i - 1) on the simplex sum rho_i <= 1, i.e. the first n
// coordinates of Dirichlet(k_1, ..., k_n, 1); each block is then uniform on
// its max-norm sphere (one coordinate at +-rho, the rest uniform).
Perturbation draw_perturbation(const ProblemInstance& p, Rng& rng)
{
    std::vector<Eigen::Index> sizes = {p.A.size()};
    if (p.kind == ProblemKind::Nsep)
    {
        sizes.push_back(p.B.size());
        sizes.push_back(p.c.size());
    }
    else
    {
        sizes.push_back(p.b.size());
    }
    const auto exponential = [&] { return -std::log(1.0 - rng.uniform()); };
    std::vector<double> gamma(sizes.size());
    double total = exponential();
    for (std::size_t i = 0; i < sizes.size(); ++i)
    {
        gamma[i] = 0.0;
        for (Eigen::Index k = 0; k < sizes[i]; ++k)
        {
            gamma[i] += exponential();
        }
        total += gamma[i];
    }
    std::vector<Vector> blocks;
    for (std::size_t i = 0; i < sizes.size(); ++i)
    {
        Vector v(sizes[i]);
        for (Eigen::Index k = 0; k < v.size(); ++k)
        {
            v(k) = rng.uniform(-1.0, 1.0);
        }
        const auto face = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(v.size())));
        v(face) = rng.uniform() < 0.5 ? -1.0 : 1.0;
        blocks.push_back(gamma[i] / total * v);
    }
    const auto reshape = [](const Vector& v, const Matrix& like) {
        Matrix m(like.rows(), like.cols());
        for (Eigen::Index k = 0; k < v.size(); ++k)
        {
            m(k / like.cols(), k % like.cols()) = v(k);
        }
        return m;
    };
    Perturbation d;
    d.A = reshape(blocks[0], p.A);
    if (p.kind == ProblemKind::Nsep)
    {
        d.B = reshape(blocks[1], p.B);
        d.c = blocks[2];
    }
    else
    {
        d.b = blocks[1];
    }
    return d;
}

ProblemInstance perturbed(const ProblemInstance& p, const Perturbation& d, double scale)
{
    ProblemInstance q = p;
    q.A += scale * d.A;
    if (p.kind == ProblemKind::Nsep)
    {
        q.B += scale * d.B;
        q.c += scale * d.c;
    }
    else
    {
        q.b += scale * d.b;
    }
    return q;
}

// Sum of block max-norms of the difference of two scaled perturbations.
double parameter_distance(const Perturbation& a, const Perturbation& b, double scale)
{
    const auto maxabs = [](const auto& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); };
    return scale * (maxabs(a.A - b.A) + maxabs(a.B - b.B) + maxabs(a.c - b.c) + maxabs(a.b - b.b));
}

int auto_pool_size(int samples)
{
    int pool = 2;
    while (pool * (pool - 1) < samples)
    {
        ++pool;
    }
    return pool;
}

struct RadiusOutcome
{
    std::optional<double> estimate;
    int evaluated = 0;
    int discretized = 0;
};

RadiusOutcome probe_radius(const ProblemInstance& p, const std::vector<Perturbation>& pool, double r,
                           int samples, std::uint64_t seed, const ProbeOptions& opt)
{
    const bool parallel = opt.policy == ExecutionPolicy::Parallel;
    const int P = static_cast<int>(pool.size());
    const double scale = r;
    const Vector ubar = p.decision();
    const Eigen::Index dim = ubar.size();

    std::vector<ProblemInstance> instances;
    instances.reserve(pool.size());
    for (const auto& d : pool)
    {
        instances.push_back(perturbed(p, d, scale));
    }

    std::vector<AlternatingSolver> solvers;
    solvers.reserve(instances.size());
    for (const auto& inst : instances)
    {
        solvers.emplace_back(inst);
    }

    SolveOptions repair;
    repair.max_iterations = opt.repair_iterations;

    // Discretizations of F(w_j), one column per feasible point.
    const int M = opt.oracle_factor * samples;
    const long total = static_cast<long>(P) * M;
    std::vector<std::optional<Vector>> slots(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic, 32) if (parallel)
    for (long t = 0; t < total; ++t)
    {
        const int j = static_cast<int>(t / M);
        const int i = static_cast<int>(t % M);
        Rng rng(stream_seed(seed, kDiscStream, static_cast<std::uint64_t>(j) << 32 | static_cast<std::uint64_t>(i)));
        const Vector start = ubar + 2.0 * r * rng.unit_ball(dim);
        try
        {
            const SolveReport rep = solvers[static_cast<std::size_t>(j)].solve(start, repair);
            if (rep.converged)
            {
                slots[static_cast<std::size_t>(t)] = rep.point;
            }
        }
        catch (const Error&)
        {
        }
    }

    RadiusOutcome out;
    std::vector<Matrix> disc(static_cast<std::size_t>(P));
    std::vector<std::vector<int>> near(static_cast<std::size_t>(P)); // columns inside B(ubar, r)
    for (int j = 0; j < P; ++j)
    {
        std::vector<const Vector*> pts;
        for (int i = 0; i < M; ++i)
        {
            const auto& s = slots[static_cast<std::size_t>(j) * static_cast<std::size_t>(M) + static_cast<std::size_t>(i)];
            if (s)
            {
                pts.push_back(&*s);
            }
        }
        Matrix& D = disc[static_cast<std::size_t>(j)];
        D.resize(dim, static_cast<Eigen::Index>(pts.size()));
        for (std::size_t c = 0; c < pts.size(); ++c)
        {
            D.col(static_cast<Eigen::Index>(c)) = *pts[c];
            if ((*pts[c] - ubar).norm() <= r)
            {
                near[static_cast<std::size_t>(j)].push_back(static_cast<int>(c));
            }
        }
        out.discretized += static_cast<int>(pts.size());
    }

    // Ordered pairs (j, k), j != k, cycled through by the evaluation index.
    const int pairs = P * (P - 1);
    std::vector<double> ratios(static_cast<std::size_t>(samples), -1.0);
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
    for (int e = 0; e < samples; ++e)
    {
        const int q = e % pairs;
        const int j = q / (P - 1);
        int k = q % (P - 1);
        if (k >= j)
        {
            ++k;
        }
        const auto& cand = near[static_cast<std::size_t>(k)];
        if (cand.empty())
        {
            continue;
        }
        Rng rng(stream_seed(seed, kEvalStream, static_cast<std::uint64_t>(e)));
        const int pick = cand[rng.index(cand.size())];
        const Vector u = disc[static_cast<std::size_t>(k)].col(pick);

        const AlternatingSolver& solver = solvers[static_cast<std::size_t>(j)];
        double dist = std::numeric_limits<double>::infinity();
        std::optional<Vector> nearest;
        const auto consider = [&](const Vector& start) {
            try
            {
                const SolveReport rep = solver.solve(start, repair);
                const double d = (rep.point - u).norm();
                if (rep.converged && d < dist)
                {
                    dist = d;
                    nearest = rep.point;
                }
            }
            catch (const Error&)
            {
            }
        };
        const Matrix& D = disc[static_cast<std::size_t>(j)];
        if (D.cols() > 0)
        {
            Eigen::Index col = 0;
            dist = std::sqrt((D.colwise() - u).colwise().squaredNorm().minCoeff(&col));
            nearest = D.col(col);
        }
        consider(u);
        // Local refinement: repair points between u and the nearest known solution.
        if (nearest)
        {
            for (const double t : {0.75, 0.5, 0.25})
            {
                const Vector z = *nearest;
                consider(u + t * (z - u));
            }
        }
        const double dw = parameter_distance(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(k)], scale);
        if (std::isfinite(dist) && dw > 0.0)
        {
            ratios[static_cast<std::size_t>(e)] = dist / dw;
        }
    }

    for (const double v : ratios)
    {
        if (v >= 0.0)
        {
            ++out.evaluated;
            out.estimate = std::max(out.estimate.value_or(0.0), v);
        }
    }
    return out;
}

} // namespace

ModulusEstimate estimate_modulus(const ProblemInstance& p, const std::vector<double>& radii,
                                 int samples_per_radius, std::uint64_t seed, const ProbeOptions& opt)
{
    for (std::size_t i = 0; i < radii.size(); ++i)
    {
        if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] < radii[i - 1])))
        {
            throw Error(ErrorKind::InvalidArgument, "radii must be positive and strictly decreasing");
        }
    }
    if (samples_per_radius < 0)
    {
        throw Error(ErrorKind::InvalidArgument, "samples per radius must be nonnegative");
    }
    if (!p.C.has_projection() || !p.Q.has_projection())
    {
        throw Error(ErrorKind::UnsupportedVariant, "the probe needs projections onto C and Q");
    }
    p.check_feasible();

    ModulusEstimate est;
    est.radii = radii;
    est.samples_per_radius = samples_per_radius;
    est.seed = seed;
    est.pool_size = opt.pool_size > 1 ? opt.pool_size : auto_pool_size(samples_per_radius);

    std::vector<Perturbation> pool;
    for (int j = 0; j < est.pool_size; ++j)
    {
        Rng rng(stream_seed(seed, kParamStream, static_cast<std::uint64_t>(j)));
        pool.push_back(draw_perturbation(p, rng));
    }

    for (const double r : radii)
    {
        RadiusOutcome o;
        if (samples_per_radius > 0)
        {
            o = probe_radius(p, pool, r, samples_per_radius, seed, opt);
        }
        est.estimates.push_back(o.estimate);
        est.sample_counts.push_back(o.evaluated);
        est.discretization_sizes.push_back(o.discretized);
        if (!o.estimate)
        {
            std::ostringstream msg;
            msg << "radius " << r << ": no solution samples";
            est.errors.push_back(msg.str());
        }
    }
    if (!est.estimates.empty() && est.estimates.front() && est.estimates.back() && *est.estimates.front() > 0.0)
    {
        est.blowup_factor = *est.estimates.back() / *est.estimates.front();
    }
    return est;
}

const char* to_string(ProbeConsistency c)
{
    switch (c)
    {
    case ProbeConsistency::Consistent: return "CONSISTENT";
    case ProbeConsistency::Inconsistent: return "INCONSISTENT";
    case ProbeConsistency::Insufficient: return "INSUFFICIENT";
    }
    return "INSUFFICIENT";
}

ProbeConsistency judge(const ModulusEstimate& est, Verdict verdict, double threshold)
{
    if (!est.blowup_factor || verdict == Verdict::Inconclusive)
    {
        return ProbeConsistency::Insufficient;
    }
    const double f = *est.blowup_factor;
    if (verdict == Verdict::LipschitzLike)
    {
        return f <= threshold ? ProbeConsistency::Consistent : ProbeConsistency::Inconsistent;
    }
    return f >= threshold ? ProbeConsistency::Consistent : ProbeConsistency::Inconsistent;
}

} // namespace splitstab
