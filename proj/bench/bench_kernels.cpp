/*
 * bench_kernels - serial against OpenMP timings for the form kernels
 * (d, wedge, integrate) on the S3 atlas.
 *
 *   heisen_bench [--grid 32] [--reps 5]
 *
 * Prints one line per kernel with the best-of-reps time of each path, the
 * ratio, and the largest serial/parallel difference.
 */
#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "heisen/contactgeo.hpp"
#include "heisen/forms.hpp"

using namespace heisen;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, double diff) {
  std::printf("%-10s serial %9.3f ms  parallel %9.3f ms  speedup %5.2f  max|diff| %.1e\n", name, serial * 1e3,
              parallel * 1e3, serial / parallel, diff);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"form kernel benchmark"};
  int grid = 32, reps = 5;
  app.add_option("--grid", grid, "nodes per chart axis");
  app.add_option("--reps", reps, "repetitions, best time is kept");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("openmp threads %d, grid %d, reps %d\n", omp_get_max_threads(), grid, reps);
#else
  std::printf("openmp disabled, grid %d, reps %d\n", grid, reps);
#endif

  ManifoldPtr M = std_s3(grid);
  Form f = bott_map(M);
  Form a = alpha_form(M);
  Form da = dalpha_form(M);
  Form top = wedge(a, da);

  Form ds, dp;
  double ts = best_of(reps, [&] { ds = d(f, Exec::Serial); });
  double tp = best_of(reps, [&] { dp = d(f, Exec::Parallel); });
  report("d", ts, tp, (ds - dp).max_abs(0));

  Form ws, wp;
  ts = best_of(reps, [&] { ws = wedge(ds, ds, Exec::Serial); });
  tp = best_of(reps, [&] { wp = wedge(ds, ds, Exec::Parallel); });
  report("wedge", ts, tp, (ws - wp).max_abs(0));

  cplx is = 0, ip = 0;
  ts = best_of(reps, [&] { is = integrate(top, Exec::Serial); });
  tp = best_of(reps, [&] { ip = integrate(top, Exec::Parallel); });
  report("integrate", ts, tp, std::abs(is - ip));
  return 0;
}
