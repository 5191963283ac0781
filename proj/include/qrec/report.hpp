#pragma once
// Recurrence summary reports and the serialization conventions shared by the
// command-line tools: JSON documents (schema-version field, complex numbers
// as [re, im] pairs, matrices flattened row-major), CSV curve tables, and
// key=value run-configuration files. Identical inputs produce byte-identical
// output strings.

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qrec/monitor.hpp"
#include "qrec/walk2d.hpp"

namespace qrec {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Recurrence summary of a monitored pair (U, V).
// ---------------------------------------------------------------------------

enum class Classification { recurrent_finite_tau, recurrent, not_recurrent };
std::string to_string(Classification c);

struct RecurrenceReport {
  long horizon = 0;
  long dim_v = 0;
  MatC r_op;  // partial sum of a_n^dag a_n
  double r_trace_remainder = 0.0;
  std::vector<EigenvalueEstimate> r_eigenvalues;  // sorted descending
  double avg_return_probability = 0.0;            // Tr(R)/dim V
  Interval avg_return_interval;
  bool tau_finite = false;
  MatC tau_op;  // partial sum of n a_n^dag a_n (meaningful when tau_finite)
  double avg_tau = 0.0;  // Tr(tau_op)/dim V; +inf when not tau_finite
  Interval avg_tau_interval;
  bool k_defined = false;
  long k = -1;  // minimal invariant dimension (consensus of all routes)
  Classification classification = Classification::not_recurrent;
  PowerLawTail tail_fit;  // fit of tr(a_n^dag a_n)
};

// Assembles the report from first-return amplitudes. The K invariant is only
// attempted on a genuinely finite step operator, where its routes certify
// each other; truncated models leave k_defined = false.
RecurrenceReport recurrence_report(const UnitaryStep& u, const Subspace& v,
                                   long n_max,
                                   TailPolicy tail = TailPolicy::power_law,
                                   double recurrence_tol = 1e-6);
RecurrenceReport report_from_amplitudes(const MatSeries& a, TailPolicy tail,
                                        double recurrence_tol = 1e-6);

// ---------------------------------------------------------------------------
// JSON fragments (conventions used by every document).
// ---------------------------------------------------------------------------

Json json_complex(cplx z);              // [re, im]
Json json_interval(const Interval& v);  // [lo, hi]
Json json_matrix(const MatC& m);        // {rows, cols, entries row-major}
Json json_vector(const VecC& v);        // [[re, im], ...]
Json json_tail(const PowerLawTail& t);
Json json_eigenvalues(const std::vector<EigenvalueEstimate>& es);

// The documented JSON object mirroring RecurrenceReport (schema field
// "qrec.recurrence_report/1").
Json json_report(const RecurrenceReport& r);

// Serialization used for every emitted document: 2-space indent, '\n'
// terminated; nlohmann's shortest-round-trip doubles keep it deterministic.
std::string json_dump(const Json& j);

// ---------------------------------------------------------------------------
// CSV curve tables: one comment line "# schema: qrec.curve/1", a header of
// column names, then rows of shortest-round-trip doubles.
// ---------------------------------------------------------------------------

struct CurveTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // each of size columns.size()
};
std::string to_csv(const CurveTable& t);

void write_text_file(const std::string& path, const std::string& content);

// ---------------------------------------------------------------------------
// Run configuration. Flags fill the struct first; an optional key=value file
// (lines "key = value", '#' comments) overrides them. Keys match the flag
// names: model, lattice, coin, coins, site, sites, nmax, tol, seed, out,
// tail, suite, curves, points.
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string command;          // example | site1d | walk2d | verify
  std::string model;            // example name: shift-eig | cyclic | crossover
  std::string lattice;          // half_line | finite | line | square | hexagonal
  std::string coin;             // 1D: default gamma; 2D: grover | fourier | c0
  std::string coins;            // 1D window "x:gamma;x:gamma;..."
  std::string out_dir = ".";
  std::string tail = "powerlaw";  // none | powerlaw
  std::string suite = "fast";     // verify: fast | full
  int site = 0;
  int sites = 0;        // N for the finite 1D lattice
  long n_max = 0;       // 0 = per-command default
  double tol = 1e-9;
  unsigned long seed = 0;
  bool curves = false;  // walk2d/site1d: also emit figure curve CSVs
  int points = 33;      // curve sample count
  bool inject_failure = false;  // verify: corrupt one tolerance (test mode)
  void validate() const;
};

// Parses "0.6", "0.3+0.2i", "-0.5i", "i" (spaces ignored).
cplx parse_complex(const std::string& s);
// Parses the coin window "0:0.3+0.1i;2:0.5".
std::vector<std::pair<int, cplx>> parse_coin_window(const std::string& s);
// Applies the key=value file on top of the current values.
void apply_config_file(RunConfig& cfg, const std::string& path);

// Model assembly from a config (validates the relevant fields).
CoinSpec1D coin_spec_1d(const RunConfig& cfg);
Walk2DJob walk_job(const RunConfig& cfg);

}  // namespace qrec
