#include "gvf/intra.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "gvf/diag.hpp"
#include "gvf/inter.hpp"
#include "json.hpp"

namespace gvf {

FunctionAnalysis::FunctionAnalysis(Program &prog, Function &f,
                                   ObjectTable &objects,
                                   const AnalysisOptions &opts,
                                   const InterContext &inter)
    : store(f.blocks.size()), prog(prog), func(f), objects(objects),
      gs(*prog.guards), opts(opts), inter_(inter) {
  dom = analyzeCfg(f, gs);
  gatePhis(f, dom, gs);
}

GuardId FunctionAnalysis::pathGuard(BlockId b) const {
  return opts.pathInsensitive ? GuardStore::kTrue : dom.blockGuard[b];
}

void FunctionAnalysis::addEdge(ValueId sv, Label sl, ValueId dv, Label dl,
                               EdgeKind kind, GuardId guard, Label callTag) {
  guard = gs.simplify(guard);
  if (guard == GuardStore::kFalse)
    return; // definitely infeasible; counted at merge otherwise
  edges.push_back({sv, sl, dv, dl, kind, guard, callTag});
}

ObjId FunctionAnalysis::formalLayerObject(uint32_t paramIdx, uint32_t depth) {
  return objects.formal(func.id, func.name, paramIdx, depth);
}

ValueId FunctionAnalysis::formalContent(uint32_t paramIdx, uint32_t depth) {
  auto key = std::make_pair(paramIdx, depth);
  auto it = formalContents.find(key);
  if (it != formalContents.end())
    return it->second;
  const std::string &pname = prog.value(func.params[paramIdx]).name;
  Label defLabel = prog.value(func.params[paramIdx]).defLabel;
  ValueId v = prog.addAuxValue(
      func.id, "in_" + pname + "_d" + std::to_string(depth), defLabel);
  formalContents.emplace(key, v);
  return v;
}

void FunctionAnalysis::seedFormalIfNeeded(ObjId o) {
  const MemObject &m = objects.obj(o);
  if (m.origin != ObjOrigin::Formal || m.func != func.id)
    return;
  auto key = std::make_pair(m.paramIdx, m.depth);
  if (formalSeeded[key])
    return;
  formalSeeded[key] = true;
  if (m.depth + 1 > opts.auxDepthBound) {
    warnings.push_back("formal content chain for parameter " +
                       prog.value(func.params[m.paramIdx]).name + " of '" +
                       func.name + "' truncated at depth " +
                       std::to_string(opts.auxDepthBound));
    return;
  }
  ValueId in = formalContent(m.paramIdx, m.depth + 1);
  env.add(gs, in, GuardStore::kTrue, formalLayerObject(m.paramIdx, m.depth + 1));
  Label pl = prog.value(func.params[m.paramIdx]).defLabel;
  // the initial content predates every store; keep it at the oldest slot
  store.insertOldest(0, o, {GuardStore::kTrue, pl, in, false});
}

std::vector<SummaryBinding> FunctionAnalysis::readObject(GuardId beta, ObjId o,
                                                         BlockId b,
                                                         Label loadLabel) {
  seedFormalIfNeeded(o);
  std::vector<SummaryBinding> out;
  GuardId sigma = GuardStore::kTrue;
  uint32_t visited = 0;
  BlockId w = b;
  bool done = false;
  while (!done) {
    ++visited;
    auto it = store.block(w).find(o);
    if (it != store.block(w).end()) {
      const auto &list = it->second;
      for (auto e = list.rbegin(); e != list.rend(); ++e) { // newest first
        GuardId cand = gs.simplify(gs.conj(gs.conj(e->guard, sigma), beta));
        if (gs.semiDecide(cand) != SatVerdict::UNSAT)
          out.push_back({cand, e->label, e->value});
        if (e->strong && !opts.pathInsensitive) {
          done = true;
          break;
        }
        if (!opts.pathInsensitive) {
          sigma = gs.simplify(gs.conj(gs.negate(e->guard), sigma));
          if (sigma == GuardStore::kFalse) {
            done = true;
            break;
          }
        }
      }
    }
    if (w == 0)
      break;
    w = dom.idom[w];
  }
  if (loadLabel)
    loadStats.push_back({loadLabel, o, visited, dom.depth[b]});
  return out;
}

void FunctionAnalysis::transfer(const Statement &st, BlockId b) {
  GuardId psi = pathGuard(b);
  switch (st.kind) {
  case StmtKind::Alloc: {
    ObjId o = objects.allocSite(func.id, st.label,
                                prog.value(st.target).name, st.inLoopReplica);
    env.add(gs, st.target, psi, o);
    break;
  }
  case StmtKind::AddressOf: {
    auto it = cells_.find(st.cellName);
    ObjId o;
    if (it != cells_.end()) {
      o = it->second;
    } else {
      o = objects.cell(func.id, st.cellName, st.label, st.inLoopReplica);
      cells_.emplace(st.cellName, o);
    }
    env.add(gs, st.target, psi, o);
    break;
  }
  case StmtKind::Copy: {
    env.addAll(gs, st.target, piEnv(gs, env.of(st.a), psi));
    addEdge(st.a, prog.value(st.a).defLabel, st.target, st.label,
            EdgeKind::Direct, psi);
    break;
  }
  case StmtKind::Phi: {
    for (const auto &arm : st.arms) {
      GuardId gate = opts.pathInsensitive ? GuardStore::kTrue : arm.gate;
      env.addAll(gs, st.target, piEnv(gs, env.of(arm.value), gate));
      addEdge(arm.value, prog.value(arm.value).defLabel, st.target, st.label,
              EdgeKind::Direct, gate);
    }
    break;
  }
  case StmtKind::Havoc:
    break; // receiver stays unconstrained; no flows recorded
  default:
    assert(false && "handled elsewhere");
  }
}

void FunctionAnalysis::handleStore(const Statement &st, BlockId b) {
  GuardId psi = pathGuard(b);
  auto pts = piEnv(gs, env.of(st.a), psi);
  // Strong update: a definite write to a unique concrete object kills the
  // values it held. Requires a single points-to candidate, a singleton
  // object, and pi valid under psi (semi-decided; UNKNOWN disables).
  bool strong = false;
  if (!opts.pathInsensitive && pts.size() == 1 &&
      objects.obj(pts[0].obj).singleton) {
    GuardId notImplied = gs.conj(psi, gs.negate(pts[0].guard));
    strong = gs.semiDecide(notImplied) == SatVerdict::UNSAT;
  }
  for (const auto &[pi, o] : pts) {
    StoreEntry e{pi, st.label, st.b, strong};
    if (strong)
      store.killAndInsert(b, o, e);
    else
      store.insert(gs, b, o, e);
    // Make the definition visible where its dominance ceases, so any
    // load's dominator walk can observe it. The guard stays pi: it states
    // when the value is in the object, not where it is observed.
    for (BlockId fb : dom.iteratedFrontier[b])
      store.insert(gs, fb, o, {pi, st.label, st.b, false});
  }
  addEdge(st.b, prog.value(st.b).defLabel, st.b, st.label, EdgeKind::Direct,
          psi);
}

void FunctionAnalysis::handleLoad(const Statement &st, BlockId b) {
  GuardId psi = pathGuard(b);
  // group emissions by (store label, value); guards of the same source
  // reached through different objects merge by disjunction
  std::map<std::pair<Label, ValueId>, GuardId> merged;
  std::vector<std::pair<Label, ValueId>> order;
  for (const auto &[beta, o] : piEnv(gs, env.of(st.a), psi)) {
    auto emissions = readObject(beta, o, b, st.label);
    unmergedEmissions += emissions.size();
    for (const auto &e : emissions) {
      env.addAll(gs, st.target, piEnv(gs, env.of(e.value), e.guard));
      auto key = std::make_pair(e.label, e.value);
      auto it = merged.find(key);
      if (it == merged.end()) {
        merged.emplace(key, e.guard);
        order.push_back(key);
      } else {
        it->second = gs.disj(it->second, e.guard);
      }
    }
  }
  for (const auto &key : order)
    addEdge(key.second, key.first, st.target, st.label, EdgeKind::Direct,
            merged.at(key));
}

void FunctionAnalysis::handleCall(const Statement &st, BlockId b) {
  instantiateSummary(*this, st, b, inter_);
}

void FunctionAnalysis::run() {
  // parameters: each points at its own formal placeholder (parameters are
  // assumed not to alias each other)
  for (uint32_t j = 0; j < func.params.size(); ++j)
    env.add(gs, func.params[j], GuardStore::kTrue, formalLayerObject(j, 0));

  for (BlockId b : dom.rpo) {
    for (const auto &st : func.blocks[b].stmts) {
      switch (st.kind) {
      case StmtKind::Store:
        handleStore(st, b);
        break;
      case StmtKind::Load:
        handleLoad(st, b);
        break;
      case StmtKind::Call:
        handleCall(st, b);
        break;
      case StmtKind::Free:
        freeSites.push_back({func.id, st.label, prog.originOf(st.label),
                             st.a, pathGuard(b)});
        break;
      default:
        transfer(st, b);
        break;
      }
    }
    const Terminator &term = func.blocks[b].term;
    if (term.kind == TermKind::Ret && term.retValue) {
      // formal-out node: the returned value at the return site
      addEdge(*term.retValue, prog.value(*term.retValue).defLabel,
              *term.retValue, term.label, EdgeKind::Direct, pathGuard(b));
    }
  }
}

std::string dumpStateJson(const Program &p, const Function &f,
                          const ObjectTable &objects, const GuardStore &gs,
                          const PointsToEnv &env, const AbstractStore &store) {
  nlohmann::json j;
  auto &je = j["env"] = nlohmann::json::object();
  std::vector<ValueId> vals;
  for (const auto &[v, entries] : env.raw()) {
    (void)entries;
    vals.push_back(v);
  }
  std::sort(vals.begin(), vals.end(), [&](ValueId a, ValueId b) {
    return p.value(a).name < p.value(b).name;
  });
  for (ValueId v : vals) {
    nlohmann::json arr = nlohmann::json::array();
    auto entries = env.of(v);
    std::sort(entries.begin(), entries.end(),
              [&](const PtEntry &a, const PtEntry &b) {
                return objects.obj(a.obj).name < objects.obj(b.obj).name;
              });
    for (const auto &e : entries)
      arr.push_back({gs.text(e.guard), objects.obj(e.obj).name});
    if (!arr.empty())
      je[p.value(v).name] = arr;
  }
  auto &js = j["store"] = nlohmann::json::object();
  for (const auto &bb : f.blocks) {
    const BlockStore &bs = store.block(bb.id);
    if (bs.empty())
      continue;
    nlohmann::json jb = nlohmann::json::object();
    std::vector<ObjId> os;
    for (const auto &[o, list] : bs) {
      (void)list;
      os.push_back(o);
    }
    std::sort(os.begin(), os.end(), [&](ObjId a, ObjId b) {
      return objects.obj(a).name < objects.obj(b).name;
    });
    for (ObjId o : os) {
      nlohmann::json arr = nlohmann::json::array();
      const auto &list = bs.at(o);
      for (auto e = list.rbegin(); e != list.rend(); ++e) // newest first
        arr.push_back({gs.text(e->guard), "l" + std::to_string(e->label),
                       p.value(e->value).name, e->strong});
      if (!arr.empty())
        jb[objects.obj(o).name] = arr;
    }
    if (!jb.empty())
      js[bb.name] = jb;
  }
  return j.dump(2) + "\n";
}

} // namespace gvf
