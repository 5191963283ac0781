#include "qrec/report.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace qrec {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Recurrence report assembly
// ---------------------------------------------------------------------------

std::string to_string(Classification c) {
  switch (c) {
    case Classification::recurrent_finite_tau:
      return "recurrent_finite_tau";
    case Classification::recurrent:
      return "recurrent";
    default:
      return "not_recurrent";
  }
}

RecurrenceReport report_from_amplitudes(const MatSeries& a, TailPolicy tail,
                                        double recurrence_tol) {
  if (a.empty()) throw InvalidInput("empty amplitude sequence");
  RecurrenceReport out;
  out.horizon = static_cast<long>(a.size()) - 1;
  out.dim_v = a[0].rows();
  const double d = static_cast<double>(out.dim_v);

  ReturnProbability r = return_probability(a, tail);
  out.r_op = r.partial;
  out.r_trace_remainder = r.trace_remainder;
  out.r_eigenvalues = return_probability_eigenvalues(r);
  out.tail_fit = r.fit;
  out.avg_return_probability = std::real(r.partial.trace()) / d;
  out.avg_return_interval = {
      out.avg_return_probability,
      std::min(out.avg_return_probability + r.trace_remainder / d, 1.0)};

  // Recurrence needs evidence that the missing mass actually arrives: the
  // deficit of the smallest eigenvalue must be covered by the fitted tail
  // (the rigorous trace_remainder bound only widens enclosures, it is not
  // evidence of convergence to I).
  const double lambda_min = out.r_eigenvalues.back().value;
  const double tail_evidence = r.fit.valid ? r.fit.remainder : 0.0;
  const bool recurrent = 1.0 - lambda_min <= recurrence_tol + tail_evidence;

  // Expected-return-time convergence. A non-recurrent pair leaves with
  // positive probability, so its expected return time is infinite no matter
  // how fast the amplitudes decay. When recurrent, an exactly terminating
  // amplitude sequence is summed as-is; otherwise the first-moment tail
  // sum_{n>N} n q_n ~ C N^{2-p}/(p-2) needs exponent p > 2.
  ReturnTimeOperator t = tau_operator(a);
  out.tau_op = t.partial;
  const double tau_partial = std::real(t.partial.trace()) / d;
  if (!recurrent) {
    out.tau_finite = false;
    out.avg_tau = kInf;
    out.avg_tau_interval = {tau_partial, kInf};
  } else if (t.exact) {
    out.tau_finite = true;
    out.avg_tau = tau_partial;
    out.avg_tau_interval = {tau_partial, tau_partial};
  } else if (r.fit.valid && r.fit.exponent > 2.1) {
    const double p = r.fit.exponent;
    const double n_max = static_cast<double>(out.horizon);
    const double moment_tail =
        r.fit.amplitude * std::pow(n_max, 2.0 - p) / (p - 2.0);
    out.tau_finite = true;
    out.avg_tau = tau_partial + moment_tail / d;
    out.avg_tau_interval = {tau_partial, tau_partial + 2.0 * moment_tail / d};
  } else if (!r.fit.valid &&
             1.0 - out.avg_return_probability <= recurrence_tol) {
    out.tau_finite = true;  // decay too fast for the fit to see a tail
    out.avg_tau = tau_partial;
    out.avg_tau_interval = {
        tau_partial, tau_partial + recurrence_tol * static_cast<double>(
                                       out.horizon)};
  } else {
    out.tau_finite = false;
    out.avg_tau = kInf;
    out.avg_tau_interval = {tau_partial, kInf};
  }

  out.classification = !recurrent ? Classification::not_recurrent
                       : out.tau_finite
                           ? Classification::recurrent_finite_tau
                           : Classification::recurrent;
  return out;
}

RecurrenceReport recurrence_report(const UnitaryStep& u, const Subspace& v,
                                   long n_max, TailPolicy tail,
                                   double recurrence_tol) {
  FirstReturnData fr = first_return_direct(u, v, n_max);
  RecurrenceReport out = report_from_amplitudes(fr.a, tail, recurrence_tol);
  if (u.genuinely_finite()) {
    KInvariant k = k_invariant(u, v);
    out.k_defined = true;
    out.k = k.value;
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON fragments
// ---------------------------------------------------------------------------

Json json_complex(cplx z) { return Json::array({z.real(), z.imag()}); }

Json json_interval(const Interval& v) {
  Json j = Json::array();
  j.push_back(v.lo);
  j.push_back(std::isinf(v.hi) ? Json("inf") : Json(v.hi));
  return j;
}

Json json_matrix(const MatC& m) {
  Json entries = Json::array();
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) entries.push_back(json_complex(m(i, j)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Json json_vector(const VecC& v) {
  Json j = Json::array();
  for (long i = 0; i < v.size(); ++i) j.push_back(json_complex(v(i)));
  return j;
}

Json json_tail(const PowerLawTail& t) {
  return Json{{"valid", t.valid},
              {"amplitude", t.amplitude},
              {"exponent", t.exponent},
              {"remainder", t.remainder}};
}

Json json_eigenvalues(const std::vector<EigenvalueEstimate>& es) {
  Json j = Json::array();
  for (const auto& e : es)
    j.push_back(Json{{"value", e.value}, {"enclosure", json_interval(e.enclosure)}});
  return j;
}

Json json_report(const RecurrenceReport& r) {
  Json j;
  j["schema"] = "qrec.recurrence_report/1";
  j["horizon"] = r.horizon;
  j["dim_v"] = r.dim_v;
  j["r_op"] = json_matrix(r.r_op);
  j["r_trace_remainder"] = r.r_trace_remainder;
  j["r_eigenvalues"] = json_eigenvalues(r.r_eigenvalues);
  j["avg_return_probability"] = r.avg_return_probability;
  j["avg_return_interval"] = json_interval(r.avg_return_interval);
  j["tau_finite"] = r.tau_finite;
  if (r.tau_finite) {
    j["tau_op"] = json_matrix(r.tau_op);
    j["avg_tau"] = r.avg_tau;
  } else {
    j["avg_tau"] = "inf";
  }
  j["avg_tau_interval"] = json_interval(r.avg_tau_interval);
  j["k_defined"] = r.k_defined;
  if (r.k_defined) j["k"] = r.k;
  j["classification"] = to_string(r.classification);
  j["tail_fit"] = json_tail(r.tail_fit);
  return j;
}

std::string json_dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string to_csv(const CurveTable& t) {
  std::string out = "# schema: qrec.curve/1\n";
  for (size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += t.columns[c];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size())
      throw InvalidInput("curve row width does not match the header");
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += Json(row[c]).dump();  // shortest round-trip, same as JSON
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open for writing: " + path);
  f << content;
  if (!f) throw InvalidInput("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

void RunConfig::validate() const {
  if (tol <= 0) throw InvalidInput("tolerance must be positive");
  if (n_max < 0) throw InvalidInput("nmax must be non-negative");
  if (points < 2) throw InvalidInput("points must be at least 2");
  if (tail != "none" && tail != "powerlaw")
    throw InvalidInput("tail must be 'none' or 'powerlaw'");
  if (suite != "fast" && suite != "full")
    throw InvalidInput("suite must be 'fast' or 'full'");
}

namespace {

std::string strip(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_real_strict(const std::string& s) {
  if (s.empty()) throw InvalidInput("empty number");
  size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidInput("not a number: '" + s + "'");
  }
  if (used != s.size()) throw InvalidInput("not a number: '" + s + "'");
  return v;
}

long parse_long_strict(const std::string& s) {
  if (s.empty()) throw InvalidInput("empty integer");
  size_t used = 0;
  long v;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw InvalidInput("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw InvalidInput("not an integer: '" + s + "'");
  return v;
}

bool parse_bool_strict(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw InvalidInput("not a boolean: '" + s + "'");
}

// One signed term of a complex literal: "1.5", "-2e-3i", "i", "-i".
void add_term(cplx& acc, const std::string& term) {
  if (term.empty() || term == "+" || term == "-")
    throw InvalidInput("malformed complex literal");
  if (term.back() == 'i' || term.back() == 'I') {
    std::string coef = term.substr(0, term.size() - 1);
    if (coef.empty() || coef == "+")
      acc += cplx(0, 1);
    else if (coef == "-")
      acc += cplx(0, -1);
    else
      acc += cplx(0, parse_real_strict(coef));
  } else {
    acc += cplx(parse_real_strict(term), 0);
  }
}

}  // namespace

cplx parse_complex(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw InvalidInput("empty complex literal");
  // Split into terms at '+'/'-' signs that are not exponent signs and not
  // the leading sign.
  std::vector<std::string> terms;
  size_t start = 0;
  for (size_t k = 1; k < s.size(); ++k) {
    if ((s[k] == '+' || s[k] == '-') &&
        s[k - 1] != 'e' && s[k - 1] != 'E') {
      terms.push_back(s.substr(start, k - start));
      start = k;
    }
  }
  terms.push_back(s.substr(start));
  if (terms.size() > 2) throw InvalidInput("malformed complex literal: " + raw);
  cplx acc(0, 0);
  for (const auto& t : terms) add_term(acc, t);
  return acc;
}

std::vector<std::pair<int, cplx>> parse_coin_window(const std::string& s) {
  std::vector<std::pair<int, cplx>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = strip(item);
    if (item.empty()) continue;
    size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw InvalidInput("coin window entries need the form site:gamma");
    out.emplace_back(
        static_cast<int>(parse_long_strict(strip(item.substr(0, colon)))),
        parse_complex(item.substr(colon + 1)));
  }
  return out;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("cannot read config file: " + path);
  std::string line;
  long line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config line " + std::to_string(line_no) +
                         " is not key = value");
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key == "model")
      cfg.model = value;
    else if (key == "lattice")
      cfg.lattice = value;
    else if (key == "coin")
      cfg.coin = value;
    else if (key == "coins")
      cfg.coins = value;
    else if (key == "out")
      cfg.out_dir = value;
    else if (key == "tail")
      cfg.tail = value;
    else if (key == "suite")
      cfg.suite = value;
    else if (key == "site")
      cfg.site = static_cast<int>(parse_long_strict(value));
    else if (key == "sites")
      cfg.sites = static_cast<int>(parse_long_strict(value));
    else if (key == "nmax")
      cfg.n_max = parse_long_strict(value);
    else if (key == "tol")
      cfg.tol = parse_real_strict(value);
    else if (key == "seed")
      cfg.seed = static_cast<unsigned long>(parse_long_strict(value));
    else if (key == "curves")
      cfg.curves = parse_bool_strict(value);
    else if (key == "points")
      cfg.points = static_cast<int>(parse_long_strict(value));
    else if (key == "inject_failure")
      cfg.inject_failure = parse_bool_strict(value);
    else
      throw InvalidInput("unknown config key: '" + key + "'");
  }
}

// ---------------------------------------------------------------------------
// Model assembly
// ---------------------------------------------------------------------------

CoinSpec1D coin_spec_1d(const RunConfig& cfg) {
  CoinSpec1D spec;
  if (cfg.lattice == "half_line")
    spec.kind = Lattice1D::half_line;
  else if (cfg.lattice == "finite")
    spec.kind = Lattice1D::finite;
  else if (cfg.lattice == "line")
    spec.kind = Lattice1D::line;
  else
    throw InvalidInput("1D lattice must be half_line, finite or line (got '" +
                       cfg.lattice + "')");
  if (spec.kind == Lattice1D::finite) {
    if (cfg.sites < 1)
      throw InvalidInput("finite lattices need sites >= 1");
    spec.num_sites = cfg.sites;
  }
  if (!cfg.coin.empty()) spec.default_gamma = parse_complex(cfg.coin);
  for (const auto& [x, g] : parse_coin_window(cfg.coins)) spec.window[x] = g;
  return spec;
}

Walk2DJob walk_job(const RunConfig& cfg) {
  Walk2DJob job;
  if (cfg.lattice == "square")
    job.spec.kind = Lattice2D::square;
  else if (cfg.lattice == "hexagonal")
    job.spec.kind = Lattice2D::hexagonal;
  else
    throw InvalidInput("2D lattice must be square or hexagonal (got '" +
                       cfg.lattice + "')");
  const int d = job.spec.internal_dim();
  if (cfg.coin == "grover")
    job.spec.coin = grover_coin(d);
  else if (cfg.coin == "fourier")
    job.spec.coin = fourier_coin(d);
  else if (cfg.coin == "c0") {
    if (job.spec.kind != Lattice2D::hexagonal)
      throw InvalidInput("the c0 coin is three-dimensional (hexagonal only)");
    job.spec.coin = c0_coin();
  } else {
    throw InvalidInput("2D coin must be grover, fourier or c0 (got '" +
                       cfg.coin + "')");
  }
  job.n_max = cfg.n_max > 0 ? cfg.n_max : 1024;
  job.tail = cfg.tail == "none" ? TailPolicy::none : TailPolicy::power_law;
  return job;
}

}  // namespace qrec
