#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fraclie/report.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fraclie::Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie point symmetries of time-fractional PDE systems"};
  app.require_subcommand(1);
  CLI::App* analyze = app.add_subcommand("analyze", "derive, solve and verify the determining system");

  std::string file, gen_file, branch = "both", emit = "text";
  int degree = 3;
  std::vector<std::string> templates;
  bool reduce = false, oracle = false, timing = false;
  analyze->add_option("file", file, "system file")->required()->check(CLI::ExistingFile);
  analyze->add_option("--poly-degree", degree, "polynomial degree of the xi, g, f ansatz")->check(CLI::Range(0, 12));
  analyze->add_option("--h-template", templates, "template for the u-free part of eta (repeatable)");
  analyze->add_option("--branch", branch, "chi2 branches to solve")->check(CLI::IsMember({"both", "zero", "nonzero"}));
  analyze->add_option("--verify-generator", gen_file, "generator file to verify")->check(CLI::ExistingFile);
  analyze->add_flag("--reduce", reduce, "reductions by the basis generators");
  analyze->add_option("--emit", emit, "output format")->check(CLI::IsMember({"text", "json", "latex"}));
  analyze->add_flag("--oracle-check", oracle, "compare the power rule with the numeric oracle");
  analyze->add_flag("--timing", timing, "print stage timings to stderr");

  CLI11_PARSE(app, argc, argv);

  try {
    fraclie::PipelineConfig cfg;
    cfg.input_name = file.substr(file.find_last_of('/') + 1);
    cfg.input_text = read_file(file);
    cfg.solver.poly_degree = degree;
    cfg.h_templates = templates;
    cfg.solver.branches = branch == "zero"      ? fraclie::SolverConfig::Branches::zero
                          : branch == "nonzero" ? fraclie::SolverConfig::Branches::nonzero
                                                : fraclie::SolverConfig::Branches::both;
    if (!gen_file.empty()) cfg.generator_text = read_file(gen_file);
    cfg.reduce = reduce;
    cfg.oracle_check = oracle;
    if (const char* s = std::getenv("FRACLIE_SEED")) cfg.seed = unsigned(std::strtoul(s, nullptr, 10));

    fraclie::Report r = fraclie::run_pipeline(cfg);
    fraclie::Format f = emit == "json" ? fraclie::Format::json : emit == "latex" ? fraclie::Format::latex : fraclie::Format::text;
    std::cout << fraclie::emit(r, f);
    if (timing)
      for (const auto& s : r.timing) std::cerr << s.stage << ": " << s.seconds << " s\n";
    for (const auto& c : r.checks)
      if (!c.ok) return 1;
    return r.basis.dimension() > 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
