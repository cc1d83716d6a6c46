#include "gvf/cfg.hpp"

#include <algorithm>
#include <cassert>

#include "gvf/diag.hpp"

namespace gvf {

GuardId edgeCondition(const Function &f, GuardStore &gs, BlockId from,
                      BlockId to) {
  const Terminator &t = f.blocks[from].term;
  if (t.kind != TermKind::Branch)
    return GuardStore::kTrue;
  // A branch with identical targets imposes no condition.
  if (t.thenBlock == t.elseBlock)
    return GuardStore::kTrue;
  if (to == t.thenBlock)
    return t.condLit;
  assert(to == t.elseBlock);
  return gs.negate(t.condLit);
}

DominanceInfo analyzeCfg(const Function &f, GuardStore &gs) {
  const size_t n = f.blocks.size();
  DominanceInfo dom;

  // reverse postorder from entry
  std::vector<int> state(n, 0);
  std::vector<BlockId> post;
  std::vector<std::pair<BlockId, size_t>> stack{{0, 0}};
  state[0] = 1;
  while (!stack.empty()) {
    auto &[b, i] = stack.back();
    if (i < f.blocks[b].succs.size()) {
      BlockId s = f.blocks[b].succs[i++];
      if (state[s] == 1)
        throw SemanticError("function '" + f.name +
                            "' has a control-flow cycle; unroll first");
      if (state[s] == 0) {
        state[s] = 1;
        stack.push_back({s, 0});
      }
    } else {
      state[b] = 2;
      post.push_back(b);
      stack.pop_back();
    }
  }
  if (post.size() != n) {
    for (size_t b = 0; b < n; ++b)
      if (state[b] == 0)
        throw SemanticError("unreachable block '" + f.blocks[b].name +
                            "' in function '" + f.name + "'");
  }
  dom.rpo.assign(post.rbegin(), post.rend());
  std::vector<uint32_t> rpoIndex(n);
  for (size_t i = 0; i < n; ++i)
    rpoIndex[dom.rpo[i]] = static_cast<uint32_t>(i);

  // Cooper–Harvey–Kennedy style iteration. One pass suffices on an acyclic
  // graph processed in RPO, but iterate to a fixpoint anyway.
  constexpr BlockId kUndef = ~0u;
  dom.idom.assign(n, kUndef);
  dom.idom[0] = 0;
  auto intersect = [&](BlockId a, BlockId b) {
    while (a != b) {
      while (rpoIndex[a] > rpoIndex[b])
        a = dom.idom[a];
      while (rpoIndex[b] > rpoIndex[a])
        b = dom.idom[b];
    }
    return a;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (BlockId b : dom.rpo) {
      if (b == 0)
        continue;
      BlockId newIdom = kUndef;
      for (BlockId p : f.blocks[b].preds) {
        if (dom.idom[p] == kUndef)
          continue;
        newIdom = newIdom == kUndef ? p : intersect(p, newIdom);
      }
      if (newIdom != dom.idom[b]) {
        dom.idom[b] = newIdom;
        changed = true;
      }
    }
  }

  dom.depth.assign(n, 1);
  for (BlockId b : dom.rpo)
    if (b != 0)
      dom.depth[b] = dom.depth[dom.idom[b]] + 1;

  // dominance frontiers
  dom.frontier.assign(n, {});
  for (BlockId b = 0; b < n; ++b) {
    if (f.blocks[b].preds.size() < 2)
      continue;
    for (BlockId p : f.blocks[b].preds) {
      BlockId runner = p;
      while (runner != dom.idom[b]) {
        auto &fr = dom.frontier[runner];
        if (std::find(fr.begin(), fr.end(), b) == fr.end())
          fr.push_back(b);
        runner = dom.idom[runner];
      }
    }
  }
  for (auto &fr : dom.frontier)
    std::sort(fr.begin(), fr.end());

  // iterated frontiers, per block
  dom.iteratedFrontier.assign(n, {});
  for (BlockId b = 0; b < n; ++b) {
    std::vector<bool> in(n, false);
    std::vector<BlockId> work{b};
    while (!work.empty()) {
      BlockId cur = work.back();
      work.pop_back();
      for (BlockId d : dom.frontier[cur]) {
        if (!in[d]) {
          in[d] = true;
          work.push_back(d);
        }
      }
    }
    for (BlockId d = 0; d < n; ++d)
      if (in[d])
        dom.iteratedFrontier[b].push_back(d);
  }

  // block guards
  dom.blockGuard.assign(n, GuardStore::kTrue);
  for (BlockId b : dom.rpo) {
    if (b == 0)
      continue;
    GuardId acc = GuardStore::kFalse;
    for (BlockId p : f.blocks[b].preds) {
      GuardId g = gs.conj(dom.blockGuard[p], edgeCondition(f, gs, p, b));
      acc = gs.disj(acc, g);
    }
    dom.blockGuard[b] = acc;
  }
  return dom;
}

void gatePhis(Function &f, const DominanceInfo &dom, GuardStore &gs) {
  for (auto &bb : f.blocks) {
    for (auto &st : bb.stmts) {
      if (st.kind != StmtKind::Phi)
        continue;
      for (auto &arm : st.arms)
        arm.gate = gs.conj(dom.blockGuard[arm.pred],
                           edgeCondition(f, gs, arm.pred, bb.id));
    }
  }
}

} // namespace gvf
