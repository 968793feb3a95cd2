// Serial reference vs OpenMP kernels: wall time and output equality.

#include "splitstab/aubin_probe.hpp"
#include "splitstab/feasibility.hpp"
#include "splitstab/problem_io.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace splitstab;

namespace
{

double time_it(const std::function<void()>& f, int reps)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r)
    {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

} // namespace

int main(int argc, char** argv)
{
    const std::string file = argc > 1 ? argv[1] : std::string(SPLITSTAB_PROBLEMS_DIR) + "/nsfp_parabola.json";
    const int count = argc > 2 ? std::stoi(argv[2]) : 20000;
    const int samples = argc > 3 ? std::stoi(argv[3]) : 200;
    const ProblemInstance p = load_problem(file);
    const Vector center = p.decision();

    std::printf("problem %s, %d threads\n", file.c_str(), omp_get_max_threads());

    std::vector<Vector> serial;
    std::vector<Vector> parallel;
    const double ts = time_it([&] { serial = sample_solutions_serial(p, center, 0.5, count, 1); }, 3);
    const double tp = time_it([&] { parallel = sample_solutions(p, center, 0.5, count, 1); }, 3);
    std::printf("sample_solutions   count %6d  serial %8.4f s  parallel %8.4f s  speedup %5.2f  identical %s\n", count,
                ts, tp, ts / tp, serial == parallel ? "yes" : "no");

    ProbeOptions so;
    so.policy = ExecutionPolicy::Serial;
    ProbeOptions po;
    po.policy = ExecutionPolicy::Parallel;
    ModulusEstimate es;
    ModulusEstimate ep;
    const std::vector<double> radii = {1e-1, 1e-2, 1e-3};
    const double ps = time_it([&] { es = estimate_modulus(p, radii, samples, 1, so); }, 1);
    const double pp = time_it([&] { ep = estimate_modulus(p, radii, samples, 1, po); }, 1);
    std::printf("estimate_modulus   samples %5d  serial %8.4f s  parallel %8.4f s  speedup %5.2f  identical %s\n",
                samples, ps, pp, ps / pp, es.estimates == ep.estimates ? "yes" : "no");
    return serial == parallel && es.estimates == ep.estimates ? 0 : 1;
}
