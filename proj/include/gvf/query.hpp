#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gvf/inter.hpp"
#include "gvf/traverse.hpp"

namespace gvf {

struct SliceResult {
  NodeId seed;
  std::set<Label> producers;
  uint64_t visitedPaths = 0;
};

struct BugReport {
  Label firstFree, secondFree;   // unrolled site labels, firstFree < secondFree
  Label firstOrigin, secondOrigin;
  NodeId sharedSource;
  GuardId condition;
  std::vector<Label> trace; // node labels along both witness paths
};

// Backward traversal over every edge kind; a node is admitted when the
// accumulated guard survives the mode's solver. Producers are the admitted
// nodes' statement labels. Control dependence and base-pointer dependence
// are excluded by construction: graph edges carry value flow only.
SliceResult thinSlice(const ProgramAnalysis &pa, NodeId seed, SolverMode mode);

// Forward traversal from every root definition into free-site operands.
// A pair of sites reached by flows with equal unmatched-exit signatures
// (same callee instance) is reported when flow guards and both sites' path
// conditions are co-satisfiable. Reports deduplicate by original site pair.
std::vector<BugReport> checkDoubleFree(const ProgramAnalysis &pa,
                                       SolverMode mode);

// The generic data-dependence primitive: nodes backward or forward
// reachable from src with a satisfiable accumulated guard, with simplified
// per-node guards (disjoined over admitted paths). The seed is excluded.
std::map<NodeId, GuardId> answerAliasPairs(const ProgramAnalysis &pa,
                                           NodeId src, SolverMode mode);

// Report rendering per the external interface.
std::string formatReports(const ProgramAnalysis &pa,
                          const std::vector<BugReport> &reports,
                          const std::string &file);
std::string formatSlice(const ProgramAnalysis &pa, const SliceResult &slice);

// Resolve "name@lN" or a bare value name (its definition node).
NodeId resolveSeed(const ProgramAnalysis &pa, const std::string &spec);

} // namespace gvf
