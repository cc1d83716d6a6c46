#include "gvf/traverse.hpp"

#include <tuple>

#include "gvf/diag.hpp"

namespace gvf {

namespace {

struct Walker {
  const ValueFlowGraph &g;
  GuardStore &gs;
  const TraverseConfig &cfg;
  TraverseResult result;
  std::set<std::tuple<NodeId, std::vector<Label>, std::vector<Label>, GuardId>>
      memo;
  std::set<GuardId> guardsSeen;
  std::set<std::pair<std::vector<Label>, std::vector<Label>>> contextsSeen;
  std::vector<uint32_t> path;

  bool admit(NodeId n, GuardId guard, const std::vector<Label> &sig) {
    if (cfg.mode == SolverMode::Full &&
        gs.fullSat(guard) == SatVerdict::UNSAT)
      return false;
    auto it = result.admitted.find(n);
    if (it == result.admitted.end())
      result.admitted.emplace(n, guard);
    else
      it->second = gs.disj(it->second, guard);
    if (cfg.trackArrivals && (!cfg.targets || cfg.targets->count(n)))
      result.arrivals[n].push_back({guard, sig, path});
    return true;
  }

  void visit(NodeId n, GuardId guard, std::vector<Label> stack,
             std::vector<Label> sig) {
    if (++result.visits > cfg.maxVisits)
      throw QueryError("traversal visit budget exceeded");
    guardsSeen.insert(guard);
    contextsSeen.insert({stack, sig});
    if (!memo.emplace(n, stack, sig, guard).second)
      return;
    if (!admit(n, guard, sig))
      return;
    const auto &adj = cfg.forward ? g.outEdges(n) : g.inEdges(n);
    for (uint32_t ei : adj) {
      const VFGEdge &e = g.edges()[ei];
      GuardId next = gs.simplify(gs.conj(guard, e.guard));
      if (next == GuardStore::kFalse ||
          gs.semiDecide(next) == SatVerdict::UNSAT)
        continue;
      CrossDir dir = crossDir(e);
      if (!cfg.forward) {
        if (dir == CrossDir::Enter)
          dir = CrossDir::Exit;
        else if (dir == CrossDir::Exit)
          dir = CrossDir::Enter;
      }
      auto nstack = stack;
      auto nsig = sig;
      if (dir == CrossDir::Enter) {
        nstack.push_back(e.callTag);
      } else if (dir == CrossDir::Exit) {
        if (!nstack.empty()) {
          if (nstack.back() != e.callTag)
            continue; // crossing out through a different call site
          nstack.pop_back();
        } else {
          nsig.push_back(e.callTag); // unmatched exit: pins the instance
        }
      }
      path.push_back(ei);
      visit(cfg.forward ? e.dst : e.src, next, std::move(nstack),
            std::move(nsig));
      path.pop_back();
    }
  }

  TraverseResult run(NodeId seed) {
    visit(seed, GuardStore::kTrue, {}, {});
    result.distinctGuards = guardsSeen.size();
    result.distinctContexts = contextsSeen.size();
    return std::move(result);
  }
};

} // namespace

TraverseResult traverse(const ValueFlowGraph &g, GuardStore &gs, NodeId seed,
                        const TraverseConfig &cfg) {
  Walker w{g, gs, cfg, {}, {}, {}, {}, {}};
  return w.run(seed);
}

} // namespace gvf
