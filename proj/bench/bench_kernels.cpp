// Times the OpenMP kernels against their serial references.
//
//   bench_kernels [repeats] [--desk6]
//
// The serial filter is the brute-force O(n^2) reference, so its ratio mixes
// the bucket grid with threading. --desk6 adds a slow spatial RM build.
// Thread count follows OMP_NUM_THREADS / IRM_PLANNER_THREADS.

#include "irmplan/pipeline.hpp"
#include "irmplan/reachability.hpp"
#include "irmplan/regions.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

using namespace irmplan;

namespace {

double best_of(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

void report(const char* name, double parallel, double serial, bool same) {
  std::printf("%-28s parallel %8.4f s  serial %8.4f s  speedup %5.2fx  %s\n", name, parallel, serial, serial / parallel,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  apply_thread_cap_from_env();
  std::printf("threads: %d\n", omp_get_max_threads());

  {
    const auto arm = ArmModel::planar_two_link(0.4, 0.2);
    GridSpec grid;
    grid.delta_p = 0.02;
    grid.radius = arm.total_length();
    ReachabilityMap a, b;
    const double tp = best_of(repeats, [&] { a = build_rm(arm, grid); });
    const double ts = best_of(repeats, [&] { b = build_rm_serial(arm, grid); });
    report("build_rm planar 0.02 m", tp, ts, a == b);
  }
  if (argc > 2 && std::string(argv[2]) == "--desk6") {
    const auto arm = ArmModel::desk6();
    GridSpec grid;
    grid.delta_p = 0.25;
    grid.delta_r = 3.141592653589793;
    grid.radius = arm.total_length();
    ReachabilityMap a, b;
    const double tp = best_of(1, [&] { a = build_rm(arm, grid); });
    const double ts = best_of(1, [&] { b = build_rm_serial(arm, grid); });
    report("build_rm desk6 0.25 m", tp, ts, a == b);
  }
  {
    std::mt19937_64 rng(11);
    std::bernoulli_distribution keep(0.35);
    PointSet2 pts;
    for (int i = -400; i <= 400; ++i) {
      for (int j = -150; j <= 150; ++j) {
        if (keep(rng)) pts.push_back({0.05 * i, 0.05 * j});
      }
    }
    PointSet2 a, b;
    const double tp = best_of(repeats, [&] { a = filter_points(pts, 0.05); });
    const double ts = best_of(repeats, [&] { b = filter_points_serial(pts, 0.05); });
    report(("filter_points " + std::to_string(pts.size()) + " pts").c_str(), tp, ts, a == b);
  }
  return 0;
}
