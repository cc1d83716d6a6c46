#pragma once

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "gvf/guard.hpp"
#include "gvf/vfg.hpp"

namespace gvf {

enum class SolverMode : uint8_t { Semi, Full };

struct TraverseConfig {
  bool forward = true;
  SolverMode mode = SolverMode::Semi;
  // Record per-arrival (guard, exit signature, witness path) at target
  // nodes; used by the double-free client to pair flows that leave callee
  // scopes through the same call sites (same concrete instance).
  bool trackArrivals = false;
  const std::set<NodeId> *targets = nullptr;
  uint64_t maxVisits = 1u << 22;
};

struct Arrival {
  GuardId guard;
  std::vector<Label> exitSig; // unmatched scope exits, outermost last
  std::vector<uint32_t> path; // edge indices from the seed
};

struct TraverseResult {
  // admitted nodes -> disjunction of admitted arrival guards, simplified
  std::map<NodeId, GuardId> admitted;
  std::map<NodeId, std::vector<Arrival>> arrivals; // targets only
  uint64_t visits = 0;
  uint64_t distinctGuards = 0;
  uint64_t distinctContexts = 0;
};

// Guard-accumulating DFS over the frozen graph. Edge guards conjoin along
// the path; the semi procedure prunes at every step, the full solver is
// consulted only at node admission when mode is Full. Call structure is
// respected: an edge that enters a callee scope must later be matched by an
// exit through the same call site (and vice versa); unmatched crossings are
// allowed only on an empty matching stack, where they widen to all contexts.
TraverseResult traverse(const ValueFlowGraph &g, GuardStore &gs, NodeId seed,
                        const TraverseConfig &cfg);

} // namespace gvf
