#include "splitstab/certifier.hpp"

#include <algorithm>

namespace splitstab
{

const char* to_string(Verdict v)
{
    switch (v)
    {
    case Verdict::LipschitzLike: return "LipschitzLike";
    case Verdict::NotLipschitzLike: return "NotLipschitzLike";
    case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

namespace
{

StabilityVerdict decide(VerdictTrace trace, double reference_norm)
{
    StabilityVerdict out{Verdict::Inconclusive, false, std::nullopt, reference_norm, std::move(trace)};
    const TrivialityResult t = is_trivial(out.trace.intersection);
    out.condition_holds = t.trivial;
    if (t.trivial)
    {
        out.verdict = Verdict::LipschitzLike;
        return out;
    }
    out.witness = t.witness;
    out.verdict = reference_norm > kZeroReferenceTol ? Verdict::NotLipschitzLike : Verdict::Inconclusive;
    return out;
}

} // namespace

StabilityVerdict certify_nsep(const ProblemInstance& p)
{
    if (p.kind != ProblemKind::Nsep)
    {
        throw Error(ErrorKind::InvalidArgument, "certify_nsep needs a split equality instance");
    }
    p.check_feasible();
    Cone nc = normal_cone(p.C, p.x);
    Cone nq = normal_cone(p.Q, p.y);
    Cone pre_c = preimage_transpose(p.A, negate(nc));
    Cone pre_q = preimage_transpose(p.B, nq);
    Cone both = intersect(pre_c, pre_q);
    const double ref = std::max(p.x.lpNorm<Eigen::Infinity>(), p.y.lpNorm<Eigen::Infinity>());
    return decide({std::move(nc), std::move(nq), std::move(pre_c), std::move(pre_q), std::move(both)}, ref);
}

StabilityVerdict certify_nsfp(const ProblemInstance& p)
{
    if (p.kind != ProblemKind::Nsfp)
    {
        throw Error(ErrorKind::InvalidArgument, "certify_nsfp needs a split feasibility instance");
    }
    p.check_feasible();
    Cone nc = normal_cone(p.C, p.x);
    Cone nq = normal_cone(p.Q, p.A * p.x + p.b);
    Cone pre_c = preimage_transpose(p.A, negate(nc));
    Cone both = intersect(pre_c, nq);
    const double ref = p.x.lpNorm<Eigen::Infinity>();
    Cone pre_q = nq;
    return decide({std::move(nc), std::move(nq), std::move(pre_c), std::move(pre_q), std::move(both)}, ref);
}

StabilityVerdict certify(const ProblemInstance& p)
{
    return p.kind == ProblemKind::Nsep ? certify_nsep(p) : certify_nsfp(p);
}

bool replay_condition(const VerdictTrace& trace)
{
    return is_trivial(trace.intersection).trivial;
}

} // namespace splitstab
