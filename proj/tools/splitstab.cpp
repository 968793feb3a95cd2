#include "splitstab/aubin_probe.hpp"
#include "splitstab/certifier.hpp"
#include "splitstab/feasibility.hpp"
#include "splitstab/problem_io.hpp"
#include "splitstab/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace splitstab;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitError = 2;
constexpr int kExitNotLipschitz = 3;
constexpr int kExitInconclusive = 4;

Vector parse_point(const std::string& text)
{
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(item, &used);
        }
        catch (const std::exception&)
        {
            used = 0;
        }
        if (used == 0 || used != item.size())
        {
            throw Error(ErrorKind::InvalidArgument, "cannot parse '" + item + "' as a number in '" + text + "'");
        }
        vals.push_back(v);
    }
    return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::vector<double> parse_list(const std::string& text)
{
    const Vector v = parse_point(text);
    return {v.data(), v.data() + v.size()};
}

int exit_code(Verdict v)
{
    switch (v)
    {
    case Verdict::LipschitzLike: return kExitOk;
    case Verdict::NotLipschitzLike: return kExitNotLipschitz;
    case Verdict::Inconclusive: return kExitInconclusive;
    }
    return kExitError;
}

std::uint64_t default_seed()
{
    if (const char* env = std::getenv("SPLITSTAB_SEED"))
    {
        try
        {
            return std::stoull(env);
        }
        catch (const std::exception&)
        {
            throw Error(ErrorKind::InvalidArgument, std::string("SPLITSTAB_SEED is not an integer: ") + env);
        }
    }
    return 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Lipschitz-like stability of split equality / split feasibility solution maps"};
    app.require_subcommand(1);

    std::string file;
    bool json_out = false;

    auto* analyze = app.add_subcommand("analyze", "certify the reference point of a problem file");
    analyze->add_option("file", file, "problem file")->required();
    analyze->add_flag("--json", json_out, "print the JSON report");

    std::string which_set;
    std::string at;
    auto* ncone = app.add_subcommand("normal-cone", "normal cone of C or Q at a point");
    ncone->add_option("file", file, "problem file")->required();
    ncone->add_option("--set", which_set, "C or Q")->required()->check(CLI::IsMember({"C", "Q"}));
    ncone->add_option("--at", at, "comma-separated point")->required();
    ncone->add_flag("--json", json_out, "print JSON");

    std::string start;
    double tol = 1e-8;
    int max_iter = 100000;
    auto* solve = app.add_subcommand("solve", "find a solution by alternating projections");
    solve->add_option("file", file, "problem file")->required();
    solve->add_option("--start", start, "comma-separated starting point (default: the reference point)");
    solve->add_option("--tol", tol, "residual tolerance")->check(CLI::PositiveNumber);
    solve->add_option("--max-iter", max_iter, "iteration cap")->check(CLI::PositiveNumber);
    solve->add_flag("--json", json_out, "print the JSON report");

    std::string radii_text = "0.1,0.01,0.001";
    int samples = 1000;
    std::uint64_t seed = 0;
    double threshold = 10.0;
    bool ci = false;
    bool serial = false;
    auto* probe = app.add_subcommand("probe", "empirical Lipschitz modulus around the reference point");
    probe->add_option("file", file, "problem file")->required();
    probe->add_option("--radii", radii_text, "comma-separated decreasing radii");
    probe->add_option("--samples", samples, "samples per radius")->check(CLI::NonNegativeNumber);
    auto* seed_opt = probe->add_option("--seed", seed, "random seed (default: $SPLITSTAB_SEED or 1)");
    probe->add_option("--threshold", threshold, "blow-up threshold")->check(CLI::PositiveNumber);
    probe->add_flag("--ci", ci, "exit 1 when the probe contradicts the verdict");
    probe->add_flag("--serial", serial, "single-threaded evaluation");
    probe->add_flag("--json", json_out, "print the JSON report");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitError;
    }

    try
    {
        const ProblemInstance p = load_problem(file);

        if (analyze->parsed())
        {
            const StabilityVerdict v = certify(p);
            std::cout << (json_out ? dump_json(verdict_to_json(p, v)) : verdict_text(p, v));
            return exit_code(v.verdict);
        }

        if (ncone->parsed())
        {
            const ConstraintSet& set = which_set == "C" ? p.C : p.Q;
            const Cone k = normal_cone(set, parse_point(at));
            if (json_out)
            {
                std::cout << dump_json(cone_to_json(k));
            }
            else
            {
                std::cout << describe(k) << "\n"
                          << "E =\n" << k.E() << "\nG =\n" << k.G() << "\nL =\n" << k.L() << "\n";
            }
            return kExitOk;
        }

        if (solve->parsed())
        {
            SolveOptions opt;
            opt.tol = tol;
            opt.max_iterations = max_iter;
            const Vector u0 = start.empty() ? p.decision() : parse_point(start);
            const SolveReport r = solve_alternating(p, u0, opt);
            std::cout << (json_out ? dump_json(solve_to_json(p, r, tol)) : solve_text(r));
            return r.converged ? kExitOk : kExitFailed;
        }

        if (probe->parsed())
        {
            if (seed_opt->count() == 0)
            {
                seed = default_seed();
            }
            ProbeOptions opt;
            opt.blowup_threshold = threshold;
            opt.policy = serial ? ExecutionPolicy::Serial : ExecutionPolicy::Parallel;
            const StabilityVerdict v = certify(p);
            const ModulusEstimate est = estimate_modulus(p, parse_list(radii_text), samples, seed, opt);
            const ProbeConsistency label = judge(est, v.verdict, threshold);
            std::cout << (json_out ? dump_json(probe_to_json(est, v, label, threshold))
                                   : probe_text(est, v, label, threshold));
            return ci && label == ProbeConsistency::Inconsistent ? kExitFailed : kExitOk;
        }
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
