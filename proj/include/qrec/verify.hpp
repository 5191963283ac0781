#pragma once
// Self-contained invariant suites covering every module: unitarity of the
// model builders, renewal-equation round-trips, Schur bounds on disk grids,
// return-operator bounds, survival monotonicity and the amplitude-survival
// identity, truncation-doubling invariance, the Geronimus parameter pattern,
// Szego/second-kind/Khrushchev identities, site-factorization cross-checks,
// and winding integrality. The "full" suite adds the published 2D table at a
// reduced horizon. Randomized inputs are driven by the given seed, so runs
// are reproducible.

#include <array>
#include <string>
#include <vector>

namespace qrec {

struct VerifyCheck {
  std::string name;
  bool passed = false;
  double worst = 0.0;      // worst defect observed by the check
  double tolerance = 0.0;  // defect bound the check enforces
  double seconds = 0.0;
};

struct VerifyReport {
  std::string suite;
  unsigned long seed = 0;
  std::vector<VerifyCheck> checks;
  bool all_passed() const;
  double total_seconds() const;
};

// suite: "fast" (the sub-minute battery) or "full" (adds the published-table
// reproduction at a reduced horizon). inject_failure corrupts one tolerance
// beyond reach so the failure path of callers can be exercised.
VerifyReport run_verify(const std::string& suite, unsigned long seed,
                        bool inject_failure = false);

// One line per check plus a PASS/FAIL summary line.
std::string format_verify(const VerifyReport& r);

// Published origin return-probability eigenvalues of the four coined 2D
// walks (square Grover/Fourier, hexagonal Grover/C0), largest first.
struct PublishedReturnRow {
  const char* lattice;
  const char* coin;
  int count = 0;
  std::array<double, 4> values{};
};
const std::vector<PublishedReturnRow>& published_return_eigenvalues();

}  // namespace qrec
