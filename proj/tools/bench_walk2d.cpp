// Benchmark: serial reference kernel vs. row-parallel (OpenMP) kernel for the
// streamed 2D evolution behind origin_mu_sequence.  Both paths are required to
// produce bit-identical compression sequences; this tool times them side by
// side and verifies the match.
//
// Usage: bench_walk2d [n_max ...]         (default: 64 128 256)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qrec/walk2d.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double run_once(const qrec::Walk2DJob& job, qrec::MatSeries* out) {
  const auto t0 = Clock::now();
  *out = qrec::origin_mu_sequence(job);
  const auto t1 = Clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

double max_diff(const qrec::MatSeries& a, const qrec::MatSeries& b) {
  if (a.size() != b.size()) return 1.0;
  double worst = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const double d = (a[n] - b[n]).cwiseAbs().maxCoeff();
    if (d > worst) worst = d;
  }
  return worst;
}

qrec::CoinSpec2D coin_for(const std::string& lattice) {
  qrec::CoinSpec2D spec;
  if (lattice == "square") {
    spec.kind = qrec::Lattice2D::square;
    spec.coin = qrec::grover_coin(4);
  } else {
    spec.kind = qrec::Lattice2D::hexagonal;
    spec.coin = qrec::c0_coin();
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<long> sizes;
  for (int i = 1; i < argc; ++i) sizes.push_back(std::strtol(argv[i], nullptr, 10));
  if (sizes.empty()) sizes = {64, 128, 256};

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; 'parallel' column runs the same serial path\n");
#endif
  std::printf("%-10s %8s %12s %12s %9s %10s\n", "lattice", "n_max", "serial [s]",
              "parallel [s]", "speedup", "max diff");

  int mismatches = 0;
  for (const char* lattice : {"square", "hexagonal"}) {
    for (long n_max : sizes) {
      qrec::Walk2DJob job;
      job.spec = coin_for(lattice);
      job.n_max = n_max;
      job.tail = qrec::TailPolicy::none;

      qrec::MatSeries mu_serial, mu_parallel;
      job.parallel = false;
      const double ts = run_once(job, &mu_serial);
      job.parallel = true;
      const double tp = run_once(job, &mu_parallel);

      const double diff = max_diff(mu_serial, mu_parallel);
      if (diff != 0.0) ++mismatches;
      std::printf("%-10s %8ld %12.4f %12.4f %8.2fx %10.2e\n", lattice, n_max, ts,
                  tp, ts / tp, diff);
    }
  }

  if (mismatches > 0) {
    std::fprintf(stderr, "FAIL: serial and parallel kernels disagree\n");
    return 1;
  }
  std::printf("serial and parallel sequences are bit-identical\n");
  return 0;
}
