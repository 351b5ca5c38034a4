#include "cdh/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include <omp.h>

#include "cdh/default_grid_data.hpp"
#include "cdh/errors.hpp"
#include "cdh/harness.hpp"
#include "cdh/quadrature.hpp"
#include "cdh/weyl.hpp"
#include "cdh/weyl_parser.hpp"

namespace cdh {

namespace {

using nlohmann::json;

struct Task {
  std::string check;
  json params;
  double tolerance;
  std::function<double()> run;
};

double num(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ArgumentError(std::string("grid entry is missing numeric field '") + key + "': " + j.dump());
  }
  return j.at(key).get<double>();
}

int int_or(const json& j, const char* key, int fallback) {
  return j.contains(key) ? j.at(key).get<int>() : fallback;
}

ProcessParams process_from(const json& j) {
  if (j.contains("pair_re")) return ProcessParams::conjugate(num(j, "pair_re"), num(j, "pair_im"), num(j, "C"));
  return ProcessParams::real(num(j, "A"), num(j, "B"), num(j, "C"));
}

CdhParams family_from(const json& j) {
  if (j.contains("pair_re")) return CdhParams::conjugate(num(j, "alpha"), num(j, "pair_re"), num(j, "pair_im"));
  return CdhParams::real(num(j, "alpha"), num(j, "beta"), num(j, "gamma"));
}

const json& section(const json& grid, const char* name) {
  if (!grid.contains(name) || grid.at(name).empty()) {
    throw ArgumentError(std::string("grid has no entries for suite '") + name + "'");
  }
  return grid.at(name);
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Random rationals p/q with |p| <= 30, 1 <= q <= 12.
class RationalSource {
 public:
  explicit RationalSource(std::uint64_t seed) : rng_(seed) {}

  Rational next() {
    std::uniform_int_distribution<int> p(-30, 30), q(1, 12);
    Rational r(p(rng_), q(rng_));
    r.canonicalize();
    return r;
  }

 private:
  std::mt19937_64 rng_;
};

json rational_json(const Rational& r) { return r.get_str(); }

void add_orthogonality(std::vector<Task>& tasks, const json& grid) {
  for (const json& e : section(grid, "orthogonality")) {
    const CdhParams p = family_from(e);
    const int n_max = int_or(e, "n_max", 8);
    tasks.push_back({"orthogonality", e, 1e-9, [p, n_max] { return verify_orthogonality(p, n_max); }});
  }
}

void add_martingale(std::vector<Task>& tasks, const json& grid) {
  for (const json& e : section(grid, "martingale")) {
    const ProcessParams pp = process_from(e);
    const double s = num(e, "s"), t = num(e, "t"), x = num(e, "x");
    const int n_max = int_or(e, "n_max", 8);
    if (e.value("expect_reject", false)) {
      // Passes when the call is refused for x outside E_s.
      tasks.push_back({"martingale-reject", e, 0.0, [=] {
                         try {
                           verify_martingale(pp, s, t, x, n_max);
                         } catch (const ArgumentError&) {
                           return 0.0;
                         }
                         return 1.0;
                       }});
    } else {
      tasks.push_back({"martingale", e, 1e-8, [=] { return verify_martingale(pp, s, t, x, n_max); }});
    }
  }
}

void add_chapman(std::vector<Task>& tasks, const json& grid) {
  for (const json& e : section(grid, "chapman")) {
    const double C = num(e, "C"), s = num(e, "s"), t = num(e, "t"), u = num(e, "u"), x = num(e, "x");
    const int degree = int_or(e, "degree", 8);
    tasks.push_back({"chapman", e, 1e-8, [=] { return verify_chapman_kolmogorov(C, s, t, u, x, degree); }});
  }
}

void add_marginal_evolution(std::vector<Task>& tasks, const json& grid) {
  for (const json& e : section(grid, "marginal_evolution")) {
    const ProcessParams pp = process_from(e);
    const double s = e.value("s_is_tau", false) ? pp.tau() : num(e, "s");
    const double t = num(e, "t");
    const int degree = int_or(e, "degree", 8);
    tasks.push_back(
        {"marginal-evolution", e, 1e-8, [=] { return verify_marginal_evolution(pp, s, t, degree); }});
  }
}

// Largest violation of: scaled <= entrance, scaled increasing in B, and
// scaled / entrance >= exp(-x/(B+t)^2 - x/(B+t)).
double entrance_violation(double A, double C, double t, double x, const std::vector<double>& Bs) {
  double worst = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < Bs.size(); ++i) {
    const double B = Bs[i];
    const EntranceComparison cmp = entrance_limit_compare(A, C, t, B, x);
    const double ratio = cmp.scaled_marginal / cmp.entrance;
    const double bound = std::exp(-x / ((B + t) * (B + t)) - x / (B + t));
    worst = std::max({worst, ratio - 1.0, bound - ratio});
    if (i > 0) worst = std::max(worst, (prev - cmp.scaled_marginal) / cmp.entrance);
    prev = cmp.scaled_marginal;
  }
  return std::max(worst, 0.0);
}

void add_entrance_limit(std::vector<Task>& tasks, const json& grid) {
  const json& g = section(grid, "entrance_limit");
  const auto list = [&g](const char* key) {
    if (!g.contains(key) || !g.at(key).is_array() || g.at(key).empty()) {
      throw ArgumentError(std::string("entrance_limit grid needs a non-empty array '") + key + "'");
    }
    return g.at(key).get<std::vector<double>>();
  };
  const std::vector<double> As = list("A"), Cs = list("C"), ts = list("t"), xs = list("x"), Bs = list("B");
  for (double A : As) {
    for (double C : Cs) {
      for (double t : ts) {
        for (double x : xs) {
          json params{{"A", A}, {"C", C}, {"t", t}, {"x", x}, {"B", Bs}};
          tasks.push_back({"entrance-limit", params, 1e-10, [=] { return entrance_violation(A, C, t, x, Bs); }});
        }
      }
    }
  }
}

void add_commutator(std::vector<Task>& tasks, const json& grid, std::uint64_t seed) {
  const json& g = section(grid, "commutator");
  const int count = int_or(g, "count", 100);
  const int K = int_or(g, "K", 16);
  RationalSource src(seed ^ 0x636f6d6d75746174ULL);
  for (int i = 0; i < count; ++i) {
    const Rational A = src.next(), B = src.next(), C = src.next();
    json params{{"A", rational_json(A)}, {"B", rational_json(B)}, {"C", rational_json(C)}, {"K", K}};
    tasks.push_back({"commutator", params, 0.0,
                     [=] { return commutator_residual(jacobi_matrices(A, B, C, K)).get_d(); }});
  }
}

void add_qvar(std::vector<Task>& tasks, const json& grid, std::uint64_t seed) {
  const json& g = section(grid, "qvar_matrix");
  const int count = int_or(g, "count", 50);
  const int K = int_or(g, "K", 14);
  RationalSource src(seed ^ 0x7176617220202020ULL);
  for (int i = 0; i < count; ++i) {
    const Rational A = src.next(), B = src.next(), C = src.next();
    std::vector<Rational> times;
    while (times.size() < 3) {
      const Rational r = src.next();
      if (std::find(times.begin(), times.end(), r) == times.end()) times.push_back(r);
    }
    std::sort(times.begin(), times.end());
    const Rational s = times[0], t = times[1], u = times[2];
    json params{{"A", rational_json(A)}, {"B", rational_json(B)}, {"C", rational_json(C)}, {"s", rational_json(s)},
                {"t", rational_json(t)}, {"u", rational_json(u)}, {"K", K}};
    tasks.push_back({"qvar-matrix", params, 0.0, [=] {
                       const Rational q = quadratic_variance_matrix_identity(A, B, C, s, t, u, K);
                       const Rational l = harness_linearity_residual(A, B, C, s, t, u, K);
                       return std::max(q, l).get_d();
                     }});
  }
}

void add_weyl(std::vector<Task>& tasks, const std::string& expr) {
  json params{{"expr", expr.empty() ? "X Y - Y X - 1/2 X^2 - 2 Y" : expr}};
  if (expr.empty()) {
    tasks.push_back({"weyl", params, 0.0, [] {
                       return static_cast<double>(commutator_defect(build_X(), build_Y()).terms().size());
                     }});
    return;
  }
  // Parsed here so that a malformed expression is an input error.
  const WeylOperator op = parse_weyl_expression(expr);
  tasks.push_back({"weyl", params, 0.0, [op] { return static_cast<double>(op.terms().size()); }});
}

void add_normalization(std::vector<Task>& tasks, const json& grid) {
  for (const json& e : section(grid, "normalization")) {
    const ProcessParams pp = process_from(e);
    const double t = num(e, "t");
    tasks.push_back({"normalization", e, 1e-6, [=] {
                       const MixedMeasure m = marginal_law(pp, t);
                       if (m.kind() != MeasureKind::Mixed) return std::abs(m.atom_mass() - 1.0);
                       return std::abs(continuous_mass(m) + m.atom_mass() - 1.0);
                     }});
    if (e.value("check_atoms", false)) {
      tasks.push_back({"christoffel-atoms", e, 1e-8, [=] {
                         const auto closed = marginal_atoms_closed_form(pp, t);
                         if (!closed || closed->empty()) throw DomainError("no closed-form atoms at this point");
                         std::vector<double> loc;
                         for (const Atom& a : *closed) loc.push_back(a.location);
                         const std::vector<double> masses = atom_masses_christoffel(marginal_family(pp, t), loc);
                         double worst = 0.0;
                         for (std::size_t i = 0; i < loc.size(); ++i) {
                           worst = std::max(worst, relative(masses[i], (*closed)[i].mass));
                         }
                         return worst;
                       }});
    }
  }
}

void add_determinacy(std::vector<Task>& tasks, const json& grid) {
  for (const json& e : section(grid, "determinacy")) {
    const CdhParams p = family_from(e);
    const int n_max = int_or(e, "n_max", 10000);
    const int n_lo = int_or(e, "fit_from", 100);
    tasks.push_back({"determinacy", e, 0.1, [=] {
                       const DeterminacySums d = determinacy_partial_sums(p, n_max);
                       return std::abs(fit_growth_exponent(d.p_terms, n_lo, n_max) - (2.0 * p.alpha() - 1.0));
                     }});
  }
}

VerificationReport execute(const Task& task, bool deterministic) {
  VerificationReport r;
  r.check = task.check;
  r.params = task.params;
  r.tolerance = task.tolerance;
  const auto start = std::chrono::steady_clock::now();
  try {
    r.residual = task.run();
    if (!std::isfinite(r.residual)) {
      r.error = "non-finite residual";
      r.residual = std::numeric_limits<double>::max();
    }
  } catch (const std::exception& ex) {
    r.error = ex.what();
    r.residual = std::numeric_limits<double>::max();
  }
  r.pass = r.error.empty() && r.residual <= r.tolerance;
  const auto elapsed = std::chrono::steady_clock::now() - start;
  r.runtime_ms = deterministic ? 0 : std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"orthogonality", "martingale",  "chapman",      "marginal-evolution",
                                              "entrance-limit", "commutator", "qvar-matrix",  "weyl",
                                              "normalization", "determinacy"};
  return names;
}

json load_grid(const std::string& name_or_path) {
  std::string text;
  if (name_or_path.empty() || name_or_path == "default") {
    text = detail::kDefaultGridJson;
  } else {
    std::ifstream in(name_or_path);
    if (!in) throw ArgumentError("cannot read grid file '" + name_or_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    json g = json::parse(text);
    if (!g.is_object()) throw ArgumentError("grid must be a JSON object");
    return g;
  } catch (const json::parse_error& e) {
    throw ArgumentError(std::string("grid does not parse: ") + e.what());
  }
}

std::vector<VerificationReport> run_suite(const std::string& suite, const json& grid, const VerifyOptions& options) {
  const auto& names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    throw ArgumentError("unknown suite '" + suite + "'");
  }
  if (suite != "weyl" && (!grid.is_object() || grid.empty())) throw ArgumentError("grid is empty");

  std::vector<Task> tasks;
  const auto want = [&suite](const char* name) { return suite == "all" || suite == name; };
  // In "all" mode, sections absent from the grid are skipped.
  const auto present = [&](const char* key) { return suite != "all" || (grid.contains(key) && !grid.at(key).empty()); };
  if (want("orthogonality") && present("orthogonality")) add_orthogonality(tasks, grid);
  if (want("martingale") && present("martingale")) add_martingale(tasks, grid);
  if (want("chapman") && present("chapman")) add_chapman(tasks, grid);
  if (want("marginal-evolution") && present("marginal_evolution")) add_marginal_evolution(tasks, grid);
  if (want("entrance-limit") && present("entrance_limit")) add_entrance_limit(tasks, grid);
  if (want("commutator") && present("commutator")) add_commutator(tasks, grid, options.seed);
  if (want("qvar-matrix") && present("qvar_matrix")) add_qvar(tasks, grid, options.seed);
  if (want("weyl")) add_weyl(tasks, options.weyl_expr);
  if (want("normalization") && present("normalization")) add_normalization(tasks, grid);
  if (want("determinacy") && present("determinacy")) add_determinacy(tasks, grid);
  if (tasks.empty()) throw ArgumentError("grid has no entries for suite '" + suite + "'");

  std::vector<VerificationReport> reports(tasks.size());
  if (options.mode == Execution::Serial) {
    for (std::size_t i = 0; i < tasks.size(); ++i) reports[i] = execute(tasks[i], options.deterministic);
  } else {
    const long n = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_cap())
    for (long i = 0; i < n; ++i) reports[i] = execute(tasks[i], options.deterministic);
  }
  return reports;
}

json report_to_json(const VerificationReport& r) {
  json j{{"check", r.check},         {"params", r.params}, {"residual", r.residual},
         {"tolerance", r.tolerance}, {"pass", r.pass},     {"runtime_ms", r.runtime_ms}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

json reports_to_json(const std::vector<VerificationReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  return arr;
}

bool all_pass(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const VerificationReport& r) { return r.pass; });
}

}  // namespace cdh
