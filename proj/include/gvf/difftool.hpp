#pragma once

#include <set>
#include <string>
#include <vector>

#include "gvf/inter.hpp"
#include "gvf/oracle.hpp"
#include "gvf/query.hpp"

namespace gvf {

using ValuePair = std::pair<ValueId, ValueId>;

// Value-level dependence closure the analysis reports: for every program
// value w, the program values whose nodes are backward-reachable from w's
// definition with a satisfiable accumulated guard.
std::set<ValuePair> analysisDependencePairs(const ProgramAnalysis &pa,
                                            SolverMode mode);

std::set<ValuePair> oracleDependencePairs(const OracleResult &oracle,
                                          const Program &p);

std::set<std::pair<Label, Label>>
reportOriginPairs(const std::vector<BugReport> &reports);

// Reachability between two values' nodes following only edges whose guard
// holds under a fixed atom assignment (the per-assignment soundness
// witness).
bool reachableUnderAssignment(const ProgramAnalysis &pa, ValueId src,
                              ValueId dst, const std::vector<bool> &assignment);

struct DiffReport {
  std::vector<std::string> violations;
  bool hadHavoc = false;
  bool ok() const { return violations.empty(); }
};

// The full differential contract for one program: oracle soundness in both
// solver modes, oracle exactness in full mode (skipped when havoc made the
// analysis deliberately unsound), per-assignment path witnesses, double-free
// set agreement, and producer-set containment.
DiffReport diffAgainstOracle(const ProgramAnalysis &pa,
                             const OracleResult &oracle,
                             uint32_t perAssignmentSampleLimit = 64);

} // namespace gvf
