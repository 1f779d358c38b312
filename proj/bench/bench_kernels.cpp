// Serial references (brute-force k-NN, one thread) vs the kd-tree / OpenMP kernels.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "nns/asymptotics.hpp"
#include "nns/experiment.hpp"

namespace {

double seconds(const std::function<void()>& f, int repeats = 3) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-34s %10.4f s %10.4f s %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
  const int threads = omp_get_max_threads();
  std::printf("threads: %d\n%-34s %12s %12s %9s\n", threads, "kernel", "reference", "openmp", "speedup");

  for (int d : {1, 2, 3}) {
    const auto ps = nns::sample_points(20000, d, 7);
    char name[64];
    std::snprintf(name, sizeof name, "knn graph N=20000 d=%d k=3", d);
    row(name, seconds([&] { nns::build_knn_graph_serial(ps, 3); }, 1),
        seconds([&] { nns::build_knn_graph(ps, 3); }));
  }

  nns::ExperimentConfig cfg;
  cfg.dim = 2;
  cfg.n_reps = 200;
  row("replications N=1000 d=2 x200", seconds([&] { nns::run_replications_serial(cfg); }, 1),
      seconds([&] { nns::run_replications(cfg); }, 1));

  const auto integral = [](int n_threads) {
    return seconds(
        [&] {
          omp_set_num_threads(n_threads);
          nns::union_integrals(2, 200000, 3);
        },
        1);
  };
  const double one = integral(1);
  const double many = integral(threads);
  row("union integrals d=2 n=2e5", one, many);
  return 0;
}
