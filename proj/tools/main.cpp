// cdh: command-line front end.
//   poly     evaluate p_n on a grid of x
//   measure  marginal / kernel / entrance law as JSON (+ density CSV)
//   sample   trajectory ensembles as CSV
//   verify   identity checks as a JSON report array
// Exit codes: 0 success, 1 a verification failed, 2 bad input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdh/errors.hpp"
#include "cdh/markov.hpp"
#include "cdh/measures.hpp"
#include "cdh/polynomials.hpp"
#include "cdh/verification.hpp"

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// "lo:hi:count" -> count evenly spaced points (count >= 1).
std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw InputError("range must be lo:hi:count, got '" + text + "'");
  double lo = 0, hi = 0;
  long count = 0;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    count = std::stol(parts[2]);
  } catch (const std::exception&) {
    throw InputError("range must be lo:hi:count, got '" + text + "'");
  }
  if (count < 1) throw InputError("range count must be >= 1");
  std::vector<double> xs;
  for (long i = 0; i < count; ++i) xs.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return xs;
}

struct ProcessFlags {
  std::optional<double> A, B, C, pair_re, pair_im;

  void attach(CLI::App* app) {
    app->add_option("--A", A, "parameter A (real case)");
    app->add_option("--B", B, "parameter B (real case)");
    app->add_option("--C", C, "parameter C")->required();
    app->add_option("--pair-re", pair_re, "Re A = Re B (conjugate case)");
    app->add_option("--pair-im", pair_im, "Im B = -Im A (conjugate case)");
  }

  cdh::ProcessParams get() const {
    if (pair_re || pair_im) {
      if (!pair_re || !pair_im) throw InputError("--pair-re and --pair-im must be given together");
      if (A || B) throw InputError("--A/--B cannot be combined with --pair-re/--pair-im");
      return cdh::ProcessParams::conjugate(*pair_re, *pair_im, *C);
    }
    if (!A || !B) throw InputError("give --A and --B, or --pair-re and --pair-im");
    return cdh::ProcessParams::real(*A, *B, *C);
  }
};

std::ostream* open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return &std::cout;
  file.open(path);
  if (!file) throw InputError("cannot write '" + path + "'");
  return &file;
}

void write_density(std::ostream& out, const cdh::MixedMeasure& m, const std::vector<double>& xs) {
  out << "x,density\n";
  for (double x : xs) out << fmt17(x) << "," << fmt17(x > 0.0 ? cdh::density_eval(m, x) : 0.0) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous dual Hahn polynomials, measures and Markov processes"};
  app.require_subcommand(1);

  // poly
  auto* poly = app.add_subcommand("poly", "evaluate p_n(x | alpha, beta, gamma)");
  double alpha = 0;
  std::optional<double> beta, gamma, p_re, p_im;
  int degree = 0;
  std::vector<double> xs;
  std::string x_range;
  poly->add_option("--alpha", alpha)->required();
  poly->add_option("--beta", beta);
  poly->add_option("--gamma", gamma);
  poly->add_option("--pair-re", p_re, "beta = re - i im, gamma = re + i im");
  poly->add_option("--pair-im", p_im);
  poly->add_option("--n", degree)->required();
  poly->add_option("--x", xs, "evaluation points")->delimiter(',');
  poly->add_option("--x-range", x_range, "lo:hi:count");

  // measure
  auto* measure = app.add_subcommand("measure", "orthogonality measures as JSON");
  measure->require_subcommand(1);
  std::string density_grid, density_out;
  const auto density_flags = [&](CLI::App* sub) {
    sub->add_option("--density-grid", density_grid, "lo:hi:count; adds an x,density CSV table");
    sub->add_option("--density-out", density_out, "CSV destination (default: stdout after the JSON)");
  };
  auto* marginal = measure->add_subcommand("marginal", "law of T_t");
  ProcessFlags mflags;
  double m_t = 0;
  mflags.attach(marginal);
  marginal->add_option("--t", m_t)->required();
  density_flags(marginal);
  auto* kernel = measure->add_subcommand("kernel", "transition probability p_{s,t}(x, .)");
  double k_C = 0, k_s = 0, k_t = 0, k_x = 0;
  kernel->add_option("--C", k_C)->required();
  kernel->add_option("--s", k_s)->required();
  kernel->add_option("--t", k_t)->required();
  kernel->add_option("--x", k_x)->required();
  density_flags(kernel);
  auto* entrance = measure->add_subcommand("entrance", "sigma-finite entrance law");
  double e_A = 0, e_C = 0, e_t = 0;
  entrance->add_option("--A", e_A)->required();
  entrance->add_option("--C", e_C)->required();
  entrance->add_option("--t", e_t)->required();
  density_flags(entrance);

  // sample
  auto* sample = app.add_subcommand("sample", "simulate trajectories (CSV replicate,time,state)");
  ProcessFlags sflags;
  sflags.attach(sample);
  std::vector<std::string> time_tokens;
  std::size_t replicates = 1;
  std::uint64_t seed = 1;
  bool standard_form = false, serial = false;
  std::string sample_out;
  sample->add_option("--times", time_tokens, "increasing times; 'tau' is the start time")->required()->delimiter(',');
  sample->add_option("--replicates", replicates)->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed);
  sample->add_flag("--standard-form", standard_form, "map to X on the clock 2(t - tau)");
  sample->add_flag("--serial", serial, "single-threaded reference path");
  sample->add_option("--out", sample_out, "CSV destination (default: stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "run identity checks");
  std::string suite = "all", grid = "default", expr, verify_out;
  std::uint64_t verify_seed = cdh::VerifyOptions{}.seed;
  bool deterministic = false, verify_serial = false;
  verify->add_option("--suite", suite, "suite name or 'all'");
  verify->add_option("--grid", grid, "'default' or a JSON grid file");
  verify->add_option("--seed", verify_seed, "seed for the random rational suites");
  verify->add_option("--expr", expr, "operator expression for the weyl suite");
  verify->add_flag("--deterministic", deterministic, "report runtime_ms as 0");
  verify->add_flag("--serial", verify_serial, "evaluate grid points one at a time");
  verify->add_option("--out", verify_out, "JSON destination (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*poly) {
      cdh::CdhParams p = cdh::CdhParams::real(0, 0, 0);
      if (p_re || p_im) {
        if (!p_re || !p_im || beta || gamma) throw InputError("give --beta/--gamma or --pair-re/--pair-im");
        p = cdh::CdhParams::conjugate(alpha, *p_re, *p_im);
      } else {
        if (!beta || !gamma) throw InputError("give --beta and --gamma, or --pair-re and --pair-im");
        p = cdh::CdhParams::real(alpha, *beta, *gamma);
      }
      if (!x_range.empty()) {
        const auto r = parse_range(x_range);
        xs.insert(xs.end(), r.begin(), r.end());
      }
      if (xs.empty()) throw InputError("give --x or --x-range");
      std::cout << "x,value\n";
      for (double x : xs) std::cout << fmt17(x) << "," << fmt17(cdh::eval_poly(p, degree, x)) << "\n";
      return 0;
    }

    if (*measure) {
      std::optional<cdh::MixedMeasure> m;
      if (*marginal) m = cdh::marginal_law(mflags.get(), m_t);
      if (*kernel) m = cdh::transition_kernel(k_C, k_s, k_t, k_x);
      if (*entrance) m = cdh::entrance_law(e_A, e_C, e_t);
      std::vector<double> grid_x;
      if (!density_grid.empty()) {
        grid_x = parse_range(density_grid);
        if (!m->continuous()) throw InputError("--density-grid: this measure has no density");
      }
      std::cout << cdh::measure_to_json(*m).dump(2) << "\n";
      if (!grid_x.empty()) {
        std::ofstream file;
        std::ostream* out = open_out(density_out, file);
        write_density(*out, *m, grid_x);
      }
      return 0;
    }

    if (*sample) {
      const cdh::ProcessParams pp = sflags.get();
      std::vector<double> times;
      for (const std::string& tok : time_tokens) {
        if (tok == "tau") {
          times.push_back(pp.tau());
          continue;
        }
        try {
          std::size_t used = 0;
          times.push_back(std::stod(tok, &used));
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw InputError("--times: '" + tok + "' is not a number or 'tau'");
        }
      }
      auto ensemble = cdh::sample_ensemble(pp, times, replicates, seed,
                                           serial ? cdh::Execution::Serial : cdh::Execution::Parallel);
      if (standard_form) {
        for (auto& tr : ensemble) tr = cdh::standard_form_transform(pp, tr);
      }
      std::ofstream file;
      std::ostream* out = open_out(sample_out, file);
      cdh::write_trajectory_csv(*out, ensemble);
      return 0;
    }

    if (*verify) {
      cdh::VerifyOptions opts;
      opts.seed = verify_seed;
      opts.deterministic = deterministic;
      opts.mode = verify_serial ? cdh::Execution::Serial : cdh::Execution::Parallel;
      opts.weyl_expr = expr;
      const nlohmann::json g = suite == "weyl" ? nlohmann::json::object() : cdh::load_grid(grid);
      const auto reports = cdh::run_suite(suite, g, opts);
      std::ofstream file;
      std::ostream* out = open_out(verify_out, file);
      *out << cdh::reports_to_json(reports).dump(2) << "\n";
      const bool ok = cdh::all_pass(reports);
      if (!ok) {
        std::size_t failed = 0;
        for (const auto& r : reports) failed += r.pass ? 0 : 1;
        std::cerr << "cdh verify: " << failed << " of " << reports.size() << " checks failed\n";
      }
      return ok ? 0 : 1;
    }
  } catch (const InputError& e) {
    std::cerr << "cdh: " << e.what() << "\n";
    return 2;
  } catch (const cdh::ArgumentError& e) {
    std::cerr << "cdh: invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const cdh::DomainError& e) {
    std::cerr << "cdh: outside the parameter domain: " << e.what() << "\n";
    return 2;
  } catch (const cdh::PoleError& e) {
    std::cerr << "cdh: pole of the Gamma function: " << e.what() << "\n";
    return 2;
  } catch (const cdh::NotNormalized& e) {
    std::cerr << "cdh: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "cdh: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
