#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fraclie/reduce.hpp"

namespace fraclie {

struct PipelineConfig {
  std::string input_name;
  std::string input_text;
  SolverConfig solver;
  std::vector<std::string> h_templates;       // parsed against the system
  std::optional<std::string> generator_text;  // --verify-generator
  bool reduce = false;
  bool oracle_check = false;
  unsigned seed = 0;
};

struct CheckResult {
  std::string name;
  bool ok = true;
  std::vector<std::string> detail;
};

struct ReductionResult {
  std::string generator;
  std::string kind;  // "translation" or "scaling"
  std::vector<std::string> lines;
};

struct StageTiming {
  std::string stage;
  double seconds = 0;
};

struct Report {
  std::string input_name;
  PDESystem sys;
  DeterminingSystem det;
  std::vector<Expr> reduced_det;
  SolutionBasis basis;
  std::vector<ReductionResult> reductions;
  std::vector<CheckResult> checks;
  std::vector<StageTiming> timing;  // not part of any emitted form
};

// Substitutes `let` bindings of a generator file: parameter values and
// closed forms for declared functions.
PDESystem apply_bindings(const PDESystem& sys, const std::vector<std::pair<std::string, Expr>>& bindings);

Report run_pipeline(const PipelineConfig& cfg);

enum class Format { text, json, latex };
std::string emit(const Report& r, Format f);

}  // namespace fraclie
