#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "gvf/intra.hpp"
#include "gvf/traverse.hpp"
#include "gvf/vfg.hpp"

namespace gvf {

struct CallGraph {
  std::map<Label, FuncId> calleeByCallSite;
  std::vector<FuncId> bottomUp;             // callees before callers
  std::vector<std::vector<FuncId>> levels;  // bottom-up, parallelizable
};

// Resolves call edges and produces a bottom-up schedule. The graph must be
// acyclic (recursion was unrolled).
CallGraph buildCallGraph(const Program &p);

// Published, immutable callee summaries. Publication happens-before any
// consumer reads (the scheduler publishes a level before starting the next).
class InterContext {
public:
  const FunctionSummaryData *summaryOf(FuncId f) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = summaries_.find(f);
    return it == summaries_.end() ? nullptr : &it->second;
  }
  void publish(FunctionSummaryData sum) {
    std::lock_guard<std::mutex> lock(mu_);
    summaries_.emplace(sum.func, std::move(sum));
  }

private:
  mutable std::mutex mu_;
  std::map<FuncId, FunctionSummaryData> summaries_;
};

// Alg. 3 style summarization of the interface variables (parameters and the
// return value), plus the object-level export used at call sites: for every
// object reachable from an interface variable, its guarded exit contents.
FunctionSummaryData summarize(FunctionAnalysis &fa,
                              const AnalysisOptions &opts);

// Clone a callee summary at a call site: copy-in/copy-out binding edges,
// one auxiliary instance per side-effecting escaped object stored into the
// caller's view of that object, formal layers resolved against the actual
// arguments, and the return points-to shape imported under the call's path
// condition.
void instantiateSummary(FunctionAnalysis &caller, const Statement &call,
                        BlockId block, const InterContext &inter);

std::string summaryJson(const Program &p, const ObjectTable &objects,
                        const GuardStore &gs, const FunctionSummaryData &sum);

// --------------------------------------------------------------------------
// Whole-program analysis
// --------------------------------------------------------------------------

struct FunctionResult {
  DominanceInfo dom;
  PointsToEnv env;
  AbstractStore store{0};
  std::vector<LoadWalkStats> loadStats;
  uint64_t unmergedEmissions = 0;
};

struct AnalysisStats {
  uint64_t edges = 0;
  uint64_t prunedUnsat = 0;
  uint64_t constraints = 0; // semi-decision procedure invocations
  uint64_t unmergedEmissions = 0;
  uint64_t summaryAuxVars = 0;
};

struct ProgramAnalysis {
  Program program;
  std::shared_ptr<GuardStore> guards;
  ObjectTable objects;
  AnalysisOptions opts;
  CallGraph callGraph;
  ValueFlowGraph graph;
  std::map<FuncId, FunctionResult> perFunction;
  std::map<FuncId, FunctionSummaryData> summaries;
  std::vector<FreeSite> freeSites;
  std::vector<std::string> warnings;
  AnalysisStats stats;
};

// Analyze bottom-up with `jobs` worker threads per level; fragments merge
// and summaries publish in deterministic topological order, so output is
// schedule-independent.
std::unique_ptr<ProgramAnalysis> analyzeProgram(Program p,
                                                const AnalysisOptions &opts,
                                                unsigned jobs = 1);

} // namespace gvf
