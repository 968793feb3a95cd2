#pragma once

#include "splitstab/certifier.hpp"
#include "splitstab/problem.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace splitstab
{

enum class ExecutionPolicy
{
    Serial,
    Parallel,
};

struct ProbeOptions
{
    /// blowup_factor above this reads as modulus growth.
    double blowup_threshold = 10.0;
    /// Discretization of each F(w) uses this many candidates per sample.
    int oracle_factor = 10;
    /// Parameter points per radius; 0 picks the smallest pool with
    /// pool * (pool - 1) >= samples, so every sample uses its own ordered pair.
    int pool_size = 0;
    int repair_iterations = 500;
    ExecutionPolicy policy = ExecutionPolicy::Parallel;
};

struct ModulusEstimate
{
    std::vector<double> radii;
    /// max dist(u', F(w)) / |w' - w| per radius; empty when no pair could be
    /// evaluated at that radius.
    std::vector<std::optional<double>> estimates;
    /// Evaluated (w, w', u') triples per radius.
    std::vector<int> sample_counts;
    /// Feasible points in each discretization, summed over the pool.
    std::vector<int> discretization_sizes;
    int samples_per_radius = 0;
    int pool_size = 0;
    std::uint64_t seed = 0;
    /// estimates.back() / estimates.front() when both exist.
    std::optional<double> blowup_factor;
    std::vector<std::string> errors;
};

/// Empirical local Lipschitz modulus of the solution map at the reference.
///
/// For each radius r a pool of parameter points w_j is drawn uniformly from
/// the ball |w - wbar| <= r of the parameter norm, the sum of entrywise
/// max-norms of the blocks (A, B, c) or (A, b). Each F(w_j) is discretized by repairing oracle_factor * samples
/// uniform candidates from B(ubar, 2r). For ordered pool pairs (w_j, w_k) a
/// point u' of F(w_k) ∩ B(ubar, r) is taken from the discretization of w_k
/// and dist(u', F(w_j)) is the smaller of the distance to the discretization
/// of w_j, to the repair of u' under w_j and to repairs of points between u'
/// and the nearest known solution. Every candidate is a verified solution,
/// so distances are only ever overestimated.
///
/// Normalized draws are shared across radii, so the radius sweep compares
/// the same perturbation directions at different scales.
ModulusEstimate estimate_modulus(const ProblemInstance& p, const std::vector<double>& radii,
                                 int samples_per_radius, std::uint64_t seed, const ProbeOptions& opt = {});

enum class ProbeConsistency
{
    Consistent,
    Inconsistent,
    Insufficient,
};

const char* to_string(ProbeConsistency c);

/// Compares the probe with a verdict: LipschitzLike expects
/// blowup <= threshold, NotLipschitzLike expects blowup >= threshold.
/// Missing estimates or an Inconclusive verdict give Insufficient.
ProbeConsistency judge(const ModulusEstimate& est, Verdict verdict, double threshold = 10.0);

} // namespace splitstab
