// Command-line driver: build the guarded value-flow graph, run demand
// queries (thin slices, double-free checks), dump the oracle's ground
// truth, or diff the analysis against it.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gvf/diag.hpp"
#include "gvf/difftool.hpp"
#include "gvf/intra.hpp"
#include "gvf/oracle.hpp"
#include "gvf/pipeline.hpp"
#include "gvf/query.hpp"

namespace {

std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct CommonArgs {
  int unroll = 2;
  int recursionDepth = 2;
  unsigned jobs = 1;
  bool pathInsensitive = false;
  std::string solver = "full";
  bool stats = false;
};

void addCommon(CLI::App *cmd, CommonArgs &args) {
  cmd->add_option("--unroll", args.unroll, "loop unroll bound")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--recursion-depth", args.recursionDepth,
                  "recursion unroll depth")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", args.jobs, "parallel function analyses")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--path-insensitive", args.pathInsensitive,
                "degrade every guard to true at construction");
  cmd->add_flag("--stats", args.stats, "print construction counters");
}

gvf::PipelineOptions pipelineOptions(const CommonArgs &args) {
  gvf::PipelineOptions opts;
  opts.unrollK = args.unroll;
  opts.recursionDepth = args.recursionDepth;
  opts.jobs = args.jobs;
  opts.analysis.pathInsensitive = args.pathInsensitive;
  return opts;
}

gvf::SolverMode solverMode(const std::string &s) {
  return s == "semi" ? gvf::SolverMode::Semi : gvf::SolverMode::Full;
}

void printWarnings(const gvf::ProgramAnalysis &pa) {
  for (const auto &w : pa.warnings)
    std::cerr << "warning: " << w << "\n";
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"guarded value-flow analysis for the mini SSA language"};
  app.require_subcommand(1);

  CommonArgs buildArgs, sliceArgs, checkArgs, diffArgs;
  std::string buildFile, sliceFile, checkFile, oracleFile;
  std::vector<std::string> diffFiles;
  std::string format = "dot";
  bool dumpState = false;
  std::string seedSpec;
  int atomLimit = 20;
  int oracleUnroll = 2, oracleDepth = 2;

  auto *build = app.add_subcommand("build", "construct and export the graph");
  addCommon(build, buildArgs);
  build->add_option("--format", format, "dot|json")
      ->check(CLI::IsMember({"dot", "json"}));
  build->add_flag("--dump-state", dumpState,
                  "print per-function env/store JSON instead of the graph");
  build->add_option("file", buildFile, "input program")->required();

  auto *slice = app.add_subcommand("slice", "thin slice for a seed");
  addCommon(slice, sliceArgs);
  slice->add_option("--solver", sliceArgs.solver, "semi|full")
      ->check(CLI::IsMember({"semi", "full"}));
  slice->add_option("--seed", seedSpec, "value or value@lN")->required();
  slice->add_option("file", sliceFile, "input program")->required();

  auto *check = app.add_subcommand("check", "double-free detection");
  addCommon(check, checkArgs);
  check->add_option("--solver", checkArgs.solver, "semi|full")
      ->check(CLI::IsMember({"semi", "full"}));
  check->add_option("file", checkFile, "input program")->required();

  auto *oracle = app.add_subcommand("oracle", "brute-force ground truth");
  oracle->add_option("--atom-limit", atomLimit, "assignment enumeration cap")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--unroll", oracleUnroll, "loop unroll bound");
  oracle->add_option("--recursion-depth", oracleDepth,
                     "recursion unroll depth");
  oracle->add_option("file", oracleFile, "input program")->required();

  auto *diff =
      app.add_subcommand("diff", "exit nonzero if analysis and oracle disagree");
  addCommon(diff, diffArgs);
  diff->add_option("files", diffFiles, "input programs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) {
      auto pa = gvf::analyzeText(readFile(buildFile), pipelineOptions(buildArgs));
      printWarnings(*pa);
      if (dumpState) {
        for (const auto &f : pa->program.functions) {
          const auto &fr = pa->perFunction.at(f.id);
          std::cout << "# " << f.name << "\n"
                    << gvf::dumpStateJson(pa->program, f, pa->objects,
                                          *pa->guards, fr.env, fr.store);
        }
      } else if (format == "json") {
        std::cout << pa->graph.exportJson(pa->program, *pa->guards);
      } else {
        std::cout << pa->graph.exportDot(pa->program, *pa->guards);
      }
      if (buildArgs.stats)
        std::cerr << gvf::statsText(*pa);
      return 0;
    }
    if (slice->parsed()) {
      auto pa = gvf::analyzeText(readFile(sliceFile), pipelineOptions(sliceArgs));
      printWarnings(*pa);
      auto result = gvf::thinSlice(*pa, gvf::resolveSeed(*pa, seedSpec),
                                   solverMode(sliceArgs.solver));
      std::cout << gvf::formatSlice(*pa, result);
      if (sliceArgs.stats)
        std::cerr << gvf::statsText(*pa);
      return 0;
    }
    if (check->parsed()) {
      auto pa = gvf::analyzeText(readFile(checkFile), pipelineOptions(checkArgs));
      printWarnings(*pa);
      auto reports = gvf::checkDoubleFree(*pa, solverMode(checkArgs.solver));
      std::cout << gvf::formatReports(*pa, reports, checkFile);
      if (checkArgs.stats)
        std::cerr << gvf::statsText(*pa);
      return 0;
    }
    if (oracle->parsed()) {
      gvf::Program p =
          gvf::loadProgram(readFile(oracleFile), oracleUnroll, oracleDepth);
      auto result = gvf::enumerateOracle(p, atomLimit);
      std::cout << gvf::oracleJson(p, result);
      return 0;
    }
    if (diff->parsed()) {
      bool anyMismatch = false;
      for (const auto &file : diffFiles) {
        std::string text = readFile(file);
        auto pa = gvf::analyzeText(text, pipelineOptions(diffArgs));
        // the oracle runs the same unrolled program and shares its atoms
        auto oracle = gvf::enumerateOracle(pa->program, 20);
        auto report = gvf::diffAgainstOracle(*pa, oracle);
        if (!report.ok()) {
          anyMismatch = true;
          for (const auto &v : report.violations)
            std::cerr << file << ": " << v << "\n";
        } else {
          std::cout << file << ": ok\n";
        }
      }
      return anyMismatch ? 1 : 0;
    }
  } catch (const gvf::ParseError &e) {
    std::cerr << "parse error at " << e.line << ":" << e.col << ": "
              << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
