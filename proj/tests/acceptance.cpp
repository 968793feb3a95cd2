// One line per acceptance criterion; exit status 1 if any fails.

#include "oracles/cone_oracle.hpp"
#include "support/normal_cases.hpp"
#include "support/random_cones.hpp"

#include "splitstab/aubin_probe.hpp"
#include "splitstab/certifier.hpp"
#include "splitstab/ge_operators.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

using namespace splitstab;

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector vec(std::initializer_list<double> v)
{
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (const double x : v)
    {
        out(i++) = x;
    }
    return out;
}

Matrix row(std::initializer_list<double> v)
{
    return vec(v).transpose();
}

ConstraintSet omega1()
{
    Matrix P(2, 2);
    P << 0, 0, 0, -1;
    return ConstraintSet::quadratic(P, vec({1, 0}), 0.0, -kInf, 0.0);
}

ConstraintSet omega2()
{
    return ConstraintSet::annulus(Vector::Zero(2), std::sqrt(2.0), std::sqrt(5.0));
}

ProblemInstance parabola(const Vector& x)
{
    return ProblemInstance::nsfp(row({1, -2}), vec({1}), omega1(), ConstraintSet::orthant(1), x);
}

ProblemInstance annulus(const Vector& x, const Vector& y)
{
    return ProblemInstance::nsep(row({1, 1}), row({0.5}), vec({1}), omega2(), ConstraintSet::orthant(1), x, y);
}

struct Outcome
{
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome ac1()
{
    const auto t0 = std::chrono::steady_clock::now();
    const Verdict a = certify_nsfp(parabola(vec({1, 1}))).verdict;
    const Verdict b = certify_nsfp(parabola(vec({-1, 0}))).verdict;
    const Verdict c = certify_nsfp(parabola(vec({4, 2}))).verdict;
    const double t = seconds_since(t0);
    std::ostringstream os;
    os << "(1,1) " << to_string(a) << ", (-1,0) " << to_string(b) << ", (4,2) " << to_string(c) << ", " << t << " s";
    return {a == Verdict::NotLipschitzLike && b == Verdict::LipschitzLike && c == Verdict::LipschitzLike && t < 1.0,
            os.str()};
}

Outcome ac2()
{
    const auto t0 = std::chrono::steady_clock::now();
    const double s = std::sqrt(3.0);
    const Verdict a = certify_nsep(annulus(vec({1, 1}), vec({2}))).verdict;
    const Verdict b = certify_nsep(annulus(vec({(1 - s) / 2, (1 + s) / 2}), vec({0}))).verdict;
    const double t = seconds_since(t0);
    std::ostringstream os;
    os << "((1,1),2) " << to_string(a) << ", (xhat,0) " << to_string(b) << ", " << t << " s";
    return {a == Verdict::LipschitzLike && b == Verdict::LipschitzLike && t < 1.0, os.str()};
}

Outcome ac3()
{
    const ConeSummary ray = classify(normal_cone(omega1(), vec({1, 1})));
    const Vector expected = vec({1, -2}).normalized();
    const double gen_err =
        ray.kind == ConeClass::Ray ? (ray.direction->normalized() - expected).lpNorm<Eigen::Infinity>() : kInf;
    const bool interior_zero = classify(normal_cone(omega1(), vec({-1, 0}))).kind == ConeClass::Zero;
    const Cone o = normal_cone(ConstraintSet::orthant(1), vec({0}));
    const bool minus_halfline = member(o, vec({-1}), 1e-12) && !member(o, vec({1}), 1e-9);
    std::ostringstream os;
    os << "generator error " << gen_err << ", interior cone zero " << interior_zero << ", N(0;R+) = -R+ "
       << minus_halfline;
    return {gen_err <= 1e-12 && interior_zero && minus_halfline, os.str()};
}

Outcome ac4()
{
    support::ConeFactory f(4);
    int agree = 0;
    int lp_only = 0;
    int disagree = 0;
    int nontrivial = 0;
    double worst_witness = 0.0;
    for (int t = 0; t < 200; ++t)
    {
        const Cone k = f.make();
        const TrivialityResult lp = is_trivial(k);
        const oracle::SampledTriviality o = oracle::sampled_triviality(k, 10000);
        if (!lp.trivial)
        {
            ++nontrivial;
            worst_witness = std::max(worst_witness, membership_residual(k, *lp.witness));
            worst_witness = std::max(worst_witness, oracle::cone_residual(k, *lp.witness));
        }
        if (lp.trivial == !o.nontrivial)
        {
            ++agree;
        }
        else if (!lp.trivial && oracle::cone_residual(k, *lp.witness) <= 1e-8)
        {
            // Thin cone missed by the sampler, settled by the verified witness.
            ++lp_only;
        }
        else
        {
            ++disagree;
        }
    }
    std::ostringstream os;
    os << agree << "/200 agree, " << lp_only << " settled by witness, " << disagree << " disagree, " << nontrivial
       << " nontrivial, worst witness residual " << worst_witness;
    return {disagree == 0 && worst_witness <= 1e-8, os.str()};
}

Outcome ac5()
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-2, 2);
    std::uniform_int_distribution<int> dim(1, 4);
    const auto mat = [&](Eigen::Index r, Eigen::Index c) {
        Matrix m(r, c);
        for (Eigen::Index i = 0; i < m.size(); ++i)
        {
            m.data()[i] = u(gen);
        }
        return m;
    };
    int full_rank = 0;
    double worst_adjoint = 0.0;
    for (int t = 0; t < 100; ++t)
    {
        const int l = dim(gen), n = dim(gen), m = dim(gen);
        const NsepPoint p{mat(l, n), mat(l, m), mat(l, 1).col(0), mat(n, 1).col(0), mat(m, 1).col(0)};
        const int r1 = numerical_rank(f1_derivative_matrix(p), 1e-10);
        full_rank += f1_derivative_surjective(p) && r1 == n + m + l ? 1 : 0;
        const NsepPoint inc = unflatten_like(p, mat(flatten(p).size(), 1).col(0));
        const Vector v = mat(n + m + l, 1).col(0);
        worst_adjoint = std::max(worst_adjoint, std::abs(flatten(f1_adjoint_apply(p, v)).dot(flatten(inc)) -
                                                         v.dot(f1_derivative_apply(p, inc))));

        const int k = dim(gen), nn = dim(gen);
        const NsfpPoint q{mat(k, nn), mat(k, 1).col(0), mat(nn, 1).col(0)};
        const int r2 = numerical_rank(f2_derivative_matrix(q), 1e-10);
        full_rank += f2_derivative_surjective(q) && r2 == nn + k ? 1 : 0;
        const NsfpPoint qinc = unflatten_like(q, mat(flatten(q).size(), 1).col(0));
        const Vector w = mat(nn + k, 1).col(0);
        worst_adjoint = std::max(worst_adjoint, std::abs(flatten(f2_adjoint_apply(q, w)).dot(flatten(qinc)) -
                                                         w.dot(f2_derivative_apply(q, qinc))));
    }
    std::ostringstream os;
    os << full_rank << "/200 full row rank, worst adjoint gap " << worst_adjoint;
    return {full_rank == 200 && worst_adjoint <= 1e-10, os.str()};
}

Outcome ac6()
{
    support::NormalCaseFactory f(6);
    int match = 0;
    int nonempty = 0;
    for (int t = 0; t < 100; ++t)
    {
        const support::NormalCase c = f.make();
        const support::NormalCase q = f.make();
        const Vector xp = f.probe_for(c);
        const Vector yp = f.probe_for(q);
        const Eigen::Index l = f.pick(1, 3);
        Vector vbar(c.point.size() + q.point.size() + l);
        vbar << c.point, q.point, Vector::Zero(l);
        Vector vp(vbar.size());
        vp << xp, yp, f.random_vector(l);
        const bool expected = member(c.expected, -xp, 1e-9) && member(q.expected, -yp, 1e-9);
        const bool closed_form = c.in_cone(-xp) && q.in_cone(-yp);
        const bool g1 = coderivative_G1_nonempty(vbar, vp, c.set, q.set);
        const bool g2 = coderivative_G2_nonempty(c.point, q.point, xp, yp, c.set, q.set);
        match += g1 == expected && g2 == expected && closed_form == expected ? 1 : 0;
        nonempty += expected ? 1 : 0;
    }
    std::ostringstream os;
    os << match << "/100 match (" << nonempty << " nonempty)";
    return {match == 100, os.str()};
}

std::string format_estimates(const ModulusEstimate& e)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < e.radii.size(); ++i)
    {
        os << (i ? ", " : "") << e.radii[i] << ": ";
        if (e.estimates[i])
        {
            os << *e.estimates[i];
        }
        else
        {
            os << "missing";
        }
    }
    return os.str();
}

Outcome ac7()
{
    const std::vector<double> radii = {1e-1, 1e-2, 1e-3};
    const std::uint64_t seed = 1;
    auto t0 = std::chrono::steady_clock::now();
    const ModulusEstimate a = estimate_modulus(parabola(vec({1, 1})), radii, 1000, seed);
    const double ta = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const ModulusEstimate b = estimate_modulus(annulus(vec({1, 1}), vec({2})), radii, 1000, seed);
    const double tb = seconds_since(t0);
    const double fa = a.blowup_factor.value_or(-1.0);
    const double fb = b.blowup_factor.value_or(kInf);
    const ModulusEstimate again = estimate_modulus(annulus(vec({1, 1}), vec({2})), radii, 1000, seed);
    const bool deterministic = again.estimates == b.estimates;
    std::ostringstream os;
    os << "seed " << seed << "; parabola blowup " << fa << " [" << format_estimates(a) << "] " << ta << " s; annulus blowup "
       << fb << " [" << format_estimates(b) << "] " << tb << " s; deterministic " << deterministic;
    return {a.blowup_factor && b.blowup_factor && fa >= 10.0 && fb <= 10.0 && ta < 60.0 && tb < 60.0 && deterministic,
            os.str()};
}

Outcome ac8()
{
    const ProblemInstance p =
        ProblemInstance::nsfp(row({1, 0}), vec({0}), omega1(), ConstraintSet::orthant(1), vec({0, 0}));
    const StabilityVerdict v = certify_nsfp(p);
    std::ostringstream os;
    os << to_string(v.verdict) << ", condition holds " << v.condition_holds << ", reference norm " << v.reference_norm;
    return {v.verdict == Verdict::Inconclusive, os.str()};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},
        {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria)
    {
        Outcome o;
        try
        {
            o = check();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %s  %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
