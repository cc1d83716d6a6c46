#pragma once

#include <vector>

#include "gvf/ir.hpp"

namespace gvf {

// Dominance facts and per-block path guards for one loop-free function.
struct DominanceInfo {
  std::vector<BlockId> idom;       // idom[entry] == entry
  std::vector<uint32_t> depth;     // blocks on the idom chain incl. self
  std::vector<std::vector<BlockId>> frontier;
  std::vector<std::vector<BlockId>> iteratedFrontier;
  std::vector<GuardId> blockGuard;
  std::vector<BlockId> rpo;

  bool dominates(BlockId a, BlockId b) const {
    while (true) {
      if (a == b)
        return true;
      if (idom[b] == b)
        return false;
      b = idom[b];
    }
  }
};

// Condition a CFG edge imposes: the branch atom on the then edge, its
// negation on the else edge, true otherwise.
GuardId edgeCondition(const Function &f, GuardStore &gs, BlockId from,
                      BlockId to);

// Immediate dominators by the iterative scheme over reverse postorder,
// frontiers by the two-predecessor scan, block guards as the simplified
// disjunction over incoming (guard ∧ edge condition) products.
// Requires a connected, loop-free CFG; throws SemanticError otherwise.
DominanceInfo analyzeCfg(const Function &f, GuardStore &gs);

// Fill each phi arm's gate: block_guard(pred) ∧ edge-condition(pred -> b),
// simplified.
void gatePhis(Function &f, const DominanceInfo &dom, GuardStore &gs);

} // namespace gvf
