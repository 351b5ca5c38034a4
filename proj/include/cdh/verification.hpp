#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdh/markov.hpp"

namespace cdh {

struct VerificationReport {
  std::string check;
  nlohmann::json params;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  long long runtime_ms = 0;
  /// Set when the check raised instead of producing a residual.
  std::string error;
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  Execution mode = Execution::Parallel;
  /// Report runtime_ms = 0 so that output is byte-reproducible.
  bool deterministic = false;
  /// Operator expression for the weyl suite; empty means the commutator
  /// identity X Y - Y X - X^2/2 - 2 Y.
  std::string weyl_expr;
};

/// orthogonality, martingale, chapman, marginal-evolution, entrance-limit,
/// commutator, qvar-matrix, weyl, normalization, determinacy.
const std::vector<std::string>& suite_names();

/// "default" (or empty) gives the built-in grid; anything else is a path.
/// ArgumentError when the file cannot be read or parsed.
nlohmann::json load_grid(const std::string& name_or_path);

/// Reports ordered by (suite, grid index). `suite` is one of suite_names()
/// or "all". ArgumentError for an unknown suite, an empty grid or a
/// malformed weyl expression.
std::vector<VerificationReport> run_suite(const std::string& suite, const nlohmann::json& grid,
                                          const VerifyOptions& options = {});

nlohmann::json report_to_json(const VerificationReport& r);
nlohmann::json reports_to_json(const std::vector<VerificationReport>& reports);

bool all_pass(const std::vector<VerificationReport>& reports);

}  // namespace cdh
