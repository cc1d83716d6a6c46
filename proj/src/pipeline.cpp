#include "gvf/pipeline.hpp"

#include <sstream>

#include "gvf/unroll.hpp"

namespace gvf {

Program loadProgram(const std::string &text, int unrollK, int recursionDepth) {
  ast::Module m = parseModule(text);
  UnrollResult u = unrollModule(m, unrollK, recursionDepth);
  Program p = buildProgram(u.module, std::make_shared<GuardStore>());
  p.unrollWarnings = std::move(u.warnings);
  return p;
}

std::unique_ptr<ProgramAnalysis> analyzeText(const std::string &text,
                                             const PipelineOptions &opts) {
  Program p = loadProgram(text, opts.unrollK, opts.recursionDepth);
  return analyzeProgram(std::move(p), opts.analysis, opts.jobs);
}

std::string statsText(const ProgramAnalysis &pa) {
  std::ostringstream os;
  os << "edges: " << pa.stats.edges << "\n";
  os << "pruned-unsat: " << pa.stats.prunedUnsat << "\n";
  os << "constraints: " << pa.stats.constraints << "\n";
  os << "unmerged-emissions: " << pa.stats.unmergedEmissions << "\n";
  os << "summary-aux-vars: " << pa.stats.summaryAuxVars << "\n";
  uint64_t maxWalk = 0;
  for (const auto &[f, fr] : pa.perFunction) {
    (void)f;
    for (const auto &ls : fr.loadStats)
      maxWalk = std::max<uint64_t>(maxWalk, ls.blocksVisited);
  }
  os << "max-load-walk: " << maxWalk << "\n";
  return os.str();
}

} // namespace gvf
