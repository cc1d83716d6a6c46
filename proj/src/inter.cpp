#include "gvf/inter.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <thread>

#include "gvf/diag.hpp"
#include "json.hpp"

namespace gvf {

CallGraph buildCallGraph(const Program &p) {
  CallGraph cg;
  std::vector<std::set<FuncId>> callees(p.functions.size());
  for (const auto &f : p.functions) {
    for (const auto &bb : f.blocks) {
      for (const auto &st : bb.stmts) {
        if (st.kind != StmtKind::Call)
          continue;
        cg.calleeByCallSite[st.label] = st.callee;
        callees[f.id].insert(st.callee);
      }
    }
  }
  // bottom-up topological order; cycle means recursion was not unrolled
  std::vector<int> state(p.functions.size(), 0);
  std::vector<FuncId> order;
  std::vector<std::pair<FuncId, std::vector<FuncId>>> stack;
  for (FuncId root = 0; root < p.functions.size(); ++root) {
    if (state[root])
      continue;
    stack.push_back({root, {callees[root].begin(), callees[root].end()}});
    state[root] = 1;
    while (!stack.empty()) {
      auto &[f, rest] = stack.back();
      if (rest.empty()) {
        state[f] = 2;
        order.push_back(f);
        stack.pop_back();
        continue;
      }
      FuncId c = rest.back();
      rest.pop_back();
      if (state[c] == 1)
        throw SemanticError("call graph has a cycle through '" +
                            p.function(c).name + "'; unroll recursion first");
      if (state[c] == 0) {
        state[c] = 1;
        stack.push_back({c, {callees[c].begin(), callees[c].end()}});
      }
    }
  }
  cg.bottomUp = order;

  std::vector<uint32_t> level(p.functions.size(), 0);
  uint32_t maxLevel = 0;
  for (FuncId f : order) { // callees first
    uint32_t l = 0;
    for (FuncId c : callees[f])
      l = std::max(l, level[c] + 1);
    level[f] = l;
    maxLevel = std::max(maxLevel, l);
  }
  cg.levels.assign(maxLevel + 1, {});
  for (FuncId f : order)
    cg.levels[level[f]].push_back(f);
  return cg;
}

// ---------------------------------------------------------------------------
// Summarization
// ---------------------------------------------------------------------------

namespace {

BlockId exitBlockOf(const Function &f) {
  for (const auto &bb : f.blocks)
    if (bb.term.kind == TermKind::Ret)
      return bb.id;
  throw SemanticError("function '" + f.name + "' has no return block");
}

// Merge duplicate (label, value) emissions by guard disjunction, keeping
// first-seen (newest-first) order.
std::vector<SummaryBinding> dedupBindings(GuardStore &gs,
                                          std::vector<SummaryBinding> in) {
  std::vector<SummaryBinding> out;
  for (const auto &b : in) {
    bool merged = false;
    for (auto &o : out) {
      if (o.label == b.label && o.value == b.value) {
        o.guard = gs.disj(o.guard, b.guard);
        merged = true;
        break;
      }
    }
    if (!merged)
      out.push_back(b);
  }
  return out;
}

} // namespace

FunctionSummaryData summarize(FunctionAnalysis &fa,
                              const AnalysisOptions &opts) {
  FunctionSummaryData sum;
  sum.func = fa.func.id;
  GuardStore &gs = fa.gs;
  BlockId exit = exitBlockOf(fa.func);

  // Exit-state contents of an object, via the dominator walk from the
  // return block. Memoized; shared by the escape closure and the Alg. 3
  // artifact so both see identical contents.
  std::map<ObjId, std::vector<SummaryBinding>> readCache;
  auto readAtExit = [&](ObjId o) -> const std::vector<SummaryBinding> & {
    auto it = readCache.find(o);
    if (it != readCache.end())
      return it->second;
    auto bindings =
        dedupBindings(gs, fa.readObject(GuardStore::kTrue, o, exit));
    return readCache.emplace(o, std::move(bindings)).first->second;
  };

  // escape closure: objects reachable from interface variables
  std::vector<std::pair<ObjId, uint32_t>> queue;
  std::set<ObjId> enqueued;
  auto enqueue = [&](ObjId o, uint32_t dist) {
    if (enqueued.insert(o).second)
      queue.push_back({o, dist});
  };
  for (uint32_t j = 0; j < fa.func.params.size(); ++j)
    enqueue(fa.formalLayerObject(j, 0), 0);
  if (fa.func.retValue)
    for (const auto &e : fa.env.of(*fa.func.retValue))
      enqueue(e.obj, 0);

  for (size_t qi = 0; qi < queue.size(); ++qi) {
    auto [o, dist] = queue[qi];
    ObjectSummary os;
    os.obj = o;
    os.bindings = readAtExit(o);
    const MemObject &m = fa.objects.obj(o);
    if (m.origin == ObjOrigin::Formal && os.bindings.size() == 1) {
      auto key = std::make_pair(m.paramIdx, m.depth + 1);
      auto inIt = fa.formalContents.find(key);
      os.sideEffectFree = inIt != fa.formalContents.end() &&
                          os.bindings[0].value == inIt->second;
    }
    if (m.origin == ObjOrigin::Formal && os.bindings.empty())
      os.sideEffectFree = true; // truncated chain: nothing to export
    sum.escapeOrder.push_back(o);
    for (const auto &b : os.bindings) {
      if (dist + 1 > opts.auxDepthBound) {
        if (!fa.env.of(b.value).empty()) {
          sum.truncated = true;
          fa.warnings.push_back("summary of '" + fa.func.name +
                                "' truncated at depth " +
                                std::to_string(opts.auxDepthBound));
        }
        continue;
      }
      for (const auto &e : fa.env.of(b.value))
        enqueue(e.obj, dist + 1);
    }
    sum.objects.emplace(o, std::move(os));
  }

  // Alg. 3 artifact: per interface variable, a chain of auxiliary
  // variables, each standing for the values stored through one more
  // dereference of the interface variable.
  auto runInterface = [&](const std::string &name,
                          const std::vector<PtEntry> &initial) {
    Alg3Interface iface;
    iface.name = name;
    std::vector<PtEntry> cur = initial;
    uint32_t k = 0;
    while (!cur.empty()) {
      if (k >= opts.auxDepthBound) {
        sum.alg3.truncated = true;
        break;
      }
      ++k;
      Alg3Level level;
      level.aux = fa.prog.addAuxValue(
          fa.func.id, "R" + std::to_string(k) + "_" + name, fa.func.retLabel);
      level.obj =
          fa.objects.auxiliary(fa.func.id, fa.func.name, name, k);
      std::vector<SummaryBinding> gathered;
      for (const auto &[pi, o] : cur) {
        for (const auto &b : readAtExit(o)) {
          GuardId g = gs.conj(b.guard, pi);
          if (g != GuardStore::kFalse &&
              gs.semiDecide(g) != SatVerdict::UNSAT)
            gathered.push_back({g, b.label, b.value});
        }
      }
      level.bindings = dedupBindings(gs, std::move(gathered));
      std::vector<PtEntry> next;
      for (const auto &b : level.bindings)
        next = joinEnv(gs, next, piEnv(gs, fa.env.of(b.value), b.guard));
      level.isPointer = !next.empty();
      iface.chain.push_back(std::move(level));
      cur = std::move(next);
    }
    sum.alg3.interfaces.push_back(std::move(iface));
  };
  for (uint32_t j = 0; j < fa.func.params.size(); ++j)
    runInterface(fa.prog.value(fa.func.params[j]).name,
                 fa.env.of(fa.func.params[j]));
  if (fa.func.retValue)
    runInterface("<ret>", fa.env.of(*fa.func.retValue));

  sum.envAtExit = fa.env;
  sum.formalContents = fa.formalContents;
  std::vector<std::vector<uint32_t>> seeded(fa.func.params.size());
  for (const auto &[key, val] : fa.formalContents) {
    (void)val;
    seeded[key.first].push_back(key.second);
  }
  for (auto &v : seeded)
    std::sort(v.begin(), v.end());
  sum.seededDepths = std::move(seeded);
  return sum;
}

// ---------------------------------------------------------------------------
// Instantiation
// ---------------------------------------------------------------------------

namespace {

struct Instantiation {
  FunctionAnalysis &ca;
  const Statement &call;
  BlockId block;
  const FunctionSummaryData &sum;
  const Function &callee;
  GuardStore &gs;
  GuardId psi;
  Label lc;

  // caller resolution of the callee's formal layers; all reads must happen
  // before this call's own side-effect entries are inserted
  std::map<std::pair<uint32_t, uint32_t>, std::vector<PtEntry>> layerObjs;
  std::map<std::pair<uint32_t, uint32_t>, std::vector<SummaryBinding>>
      layerVals;
  bool layersFrozen = false;

  const std::vector<PtEntry> &objsAt(uint32_t j, uint32_t d) {
    auto key = std::make_pair(j, d);
    auto it = layerObjs.find(key);
    if (it != layerObjs.end())
      return it->second;
    std::vector<PtEntry> objs;
    if (d == 0) {
      objs = piEnv(gs, ca.env.of(call.args[j]), psi);
    } else {
      for (const auto &v : valsAt(j, d))
        objs = joinEnv(gs, objs, piEnv(gs, ca.env.of(v.value), v.guard));
    }
    return layerObjs.emplace(key, std::move(objs)).first->second;
  }

  // values the caller can read from layer d-1: the caller-side meaning of
  // the callee's formal content placeholder at depth d
  const std::vector<SummaryBinding> &valsAt(uint32_t j, uint32_t d) {
    assert(d >= 1);
    auto key = std::make_pair(j, d);
    auto it = layerVals.find(key);
    if (it != layerVals.end())
      return it->second;
    assert(!layersFrozen && "layer read after side effects began");
    std::vector<SummaryBinding> vals;
    for (const auto &[gamma, o] : objsAt(j, d - 1)) {
      auto emissions = ca.readObject(gamma, o, block);
      vals.insert(vals.end(), emissions.begin(), emissions.end());
    }
    vals = dedupBindings(gs, std::move(vals));
    return layerVals.emplace(key, std::move(vals)).first->second;
  }

  // callee-side points-to entries translated into the caller's domain
  std::vector<PtEntry> resolveEnv(ValueId v) {
    std::vector<PtEntry> out;
    for (const auto &[g, o] : sum.envAtExit.of(v)) {
      const MemObject &m = ca.objects.obj(o);
      if (m.origin == ObjOrigin::Formal && m.func == callee.id) {
        for (const auto &[pi, ot] : objsAt(m.paramIdx, m.depth))
          out = joinEnv(gs, out, {{gs.conj(g, pi), ot}});
      } else {
        ObjId clone = ca.objects.instantiated(o, lc);
        out = joinEnv(gs, out, {{gs.conj(g, psi), clone}});
      }
    }
    return out;
  }

  void storeInto(ObjId target, GuardId guard, ValueId r) {
    StoreEntry e{guard, lc, r, false};
    ca.store.insert(gs, block, target, e);
    for (BlockId fb : ca.dom.iteratedFrontier[block])
      ca.store.insert(gs, fb, target, {guard, lc, r, false});
  }

  void run() {
    if (call.args.size() != callee.params.size())
      throw SemanticError("arity mismatch calling '" + callee.name + "'");

    // copy-in edges: actuals bind to formals
    for (uint32_t j = 0; j < call.args.size(); ++j)
      ca.addEdge(call.args[j], ca.prog.value(call.args[j]).defLabel,
                 callee.params[j], ca.prog.value(callee.params[j]).defLabel,
                 EdgeKind::CallBind, psi, lc);

    // Pre-read every formal layer this instantiation can touch, against
    // the caller's pre-call store, before any side-effect entries go in.
    std::set<std::pair<uint32_t, uint32_t>> needed;
    auto noteFormalLayers = [&](ValueId v) {
      for (const auto &e : sum.envAtExit.of(v)) {
        const MemObject &m = ca.objects.obj(e.obj);
        if (m.origin == ObjOrigin::Formal && m.func == callee.id &&
            m.depth >= 1)
          needed.insert({m.paramIdx, m.depth});
      }
    };
    for (uint32_t j = 0; j < call.args.size(); ++j)
      for (uint32_t d : sum.seededDepths[j])
        needed.insert({j, d});
    for (ObjId o : sum.escapeOrder) {
      const ObjectSummary &os = sum.objects.at(o);
      const MemObject &m = ca.objects.obj(o);
      if (os.sideEffectFree)
        continue;
      if (m.origin == ObjOrigin::Formal && m.func == callee.id &&
          m.depth >= 1)
        needed.insert({m.paramIdx, m.depth});
      for (const auto &b : os.bindings)
        noteFormalLayers(b.value);
    }
    if (callee.retValue)
      noteFormalLayers(*callee.retValue);
    for (const auto &[j, d] : needed)
      valsAt(j, d);
    layersFrozen = true;

    // content-in edges: what the caller's memory provides to the callee's
    // formal content placeholders
    for (uint32_t j = 0; j < call.args.size(); ++j) {
      for (uint32_t d : sum.seededDepths[j]) {
        auto inIt = sum.formalContents.find({j, d});
        if (inIt == sum.formalContents.end())
          continue;
        Label paramLabel = ca.prog.value(callee.params[j]).defLabel;
        for (const auto &v : valsAt(j, d))
          ca.addEdge(v.value, v.label, inIt->second, paramLabel,
                     EdgeKind::CallBind, v.guard, lc);
      }
    }

    // side effects: one auxiliary instance per side-effecting escaped
    // object, stored into the caller's view of that object
    for (ObjId o : sum.escapeOrder) {
      const ObjectSummary &os = sum.objects.at(o);
      if (os.sideEffectFree || os.bindings.empty())
        continue;
      const MemObject &m = ca.objects.obj(o);
      ValueId r = ca.prog.addAuxValue(
          ca.func.id, "R." + m.name + "@l" + std::to_string(lc), lc);
      for (const auto &b : os.bindings) {
        GuardId g = gs.simplify(gs.conj(b.guard, psi));
        if (g == GuardStore::kFalse)
          continue;
        ca.addEdge(b.value, b.label, r, lc, EdgeKind::Summary, g, lc);
        ca.env.addAll(gs, r, piEnv(gs, resolveEnv(b.value), g));
      }
      if (m.origin == ObjOrigin::Formal && m.func == callee.id) {
        for (const auto &[pi, target] : objsAt(m.paramIdx, m.depth))
          storeInto(target, pi, r);
      } else {
        storeInto(ca.objects.instantiated(o, lc), psi, r);
      }
    }

    // return value
    if (callee.retValue) {
      ca.env.addAll(gs, call.target,
                    piEnv(gs, resolveEnv(*callee.retValue), psi));
      ca.addEdge(*callee.retValue, callee.retLabel, call.target, lc,
                 EdgeKind::ReturnBind, psi, lc);
    }
  }
};

} // namespace

void instantiateSummary(FunctionAnalysis &caller, const Statement &call,
                        BlockId block, const InterContext &inter) {
  const FunctionSummaryData *sum = inter.summaryOf(call.callee);
  if (!sum)
    throw SemanticError(
        "internal scheduling error: callee analyzed out of order: '" +
        caller.prog.function(call.callee).name + "'");
  Instantiation inst{caller,
                     call,
                     block,
                     *sum,
                     caller.prog.function(call.callee),
                     caller.gs,
                     caller.pathGuard(block),
                     call.label,
                     {},
                     {},
                     false};
  inst.run();
}

std::string summaryJson(const Program &p, const ObjectTable &objects,
                        const GuardStore &gs, const FunctionSummaryData &sum) {
  nlohmann::json j;
  j["function"] = p.function(sum.func).name;
  j["truncated"] = sum.alg3.truncated || sum.truncated;
  auto &ifaces = j["interfaces"] = nlohmann::json::array();
  for (const auto &iface : sum.alg3.interfaces) {
    nlohmann::json ji;
    ji["name"] = iface.name;
    auto &chain = ji["chain"] = nlohmann::json::array();
    for (const auto &level : iface.chain) {
      nlohmann::json jl;
      jl["aux"] = p.value(level.aux).name;
      jl["object"] = objects.obj(level.obj).name;
      jl["env"] = {{"guard", "true"}, {"object", objects.obj(level.obj).name}};
      jl["store"] = nlohmann::json::array(
          {{{"guard", "true"}, {"value", p.value(level.aux).name}}});
      auto &bs = jl["bindings"] = nlohmann::json::array();
      for (const auto &b : level.bindings)
        bs.push_back({gs.text(b.guard), "l" + std::to_string(b.label),
                      p.value(b.value).name});
      chain.push_back(jl);
    }
    ifaces.push_back(ji);
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Scheduler
// ---------------------------------------------------------------------------

namespace {

void mergeFragment(ProgramAnalysis &pa, const std::vector<PendingEdge> &edges) {
  for (const auto &e : edges) {
    NodeId src = pa.graph.nodeOf(e.srcValue, e.srcLabel);
    NodeId dst = pa.graph.nodeOf(e.dstValue, e.dstLabel);
    pa.graph.upsertEdge(*pa.guards, src, dst, e.kind, e.guard, e.callTag);
  }
}

// Eagerly connect formal-in to formal-out: one summary edge per parameter
// that can reach the return value, its guard the simplified disjunction
// over all path products.
void connectFormalSummaryEdges(ProgramAnalysis &pa, FuncId fid) {
  const Function &f = pa.program.function(fid);
  if (!f.retValue)
    return;
  if (!pa.graph.hasNode(*f.retValue, f.retLabel))
    return;
  NodeId out = pa.graph.findNode(*f.retValue, f.retLabel);
  for (ValueId param : f.params) {
    Label pl = pa.program.value(param).defLabel;
    if (!pa.graph.hasNode(param, pl))
      continue;
    NodeId in = pa.graph.findNode(param, pl);
    if (in == out)
      continue;
    TraverseConfig cfg;
    cfg.forward = true;
    cfg.mode = SolverMode::Semi;
    auto res = traverse(pa.graph, *pa.guards, in, cfg);
    auto it = res.admitted.find(out);
    if (it != res.admitted.end())
      pa.graph.upsertEdge(*pa.guards, in, out, EdgeKind::Summary, it->second);
  }
}

} // namespace

std::unique_ptr<ProgramAnalysis> analyzeProgram(Program p,
                                                const AnalysisOptions &opts,
                                                unsigned jobs) {
  auto pa = std::make_unique<ProgramAnalysis>();
  pa->guards = p.guards;
  pa->opts = opts;
  pa->program = std::move(p);
  pa->callGraph = buildCallGraph(pa->program);
  pa->warnings = pa->program.unrollWarnings;
  pa->guards->resetCounters();

  InterContext inter;
  if (jobs < 1)
    jobs = 1;

  for (const auto &level : pa->callGraph.levels) {
    std::vector<std::unique_ptr<FunctionAnalysis>> done(level.size());
    std::vector<FunctionSummaryData> sums(level.size());
    auto work = [&](size_t i) {
      auto fa = std::make_unique<FunctionAnalysis>(
          pa->program, pa->program.function(level[i]), pa->objects, pa->opts,
          inter);
      fa->run();
      sums[i] = summarize(*fa, pa->opts);
      done[i] = std::move(fa);
    };
    if (jobs == 1 || level.size() == 1) {
      for (size_t i = 0; i < level.size(); ++i)
        work(i);
    } else {
      std::vector<std::thread> pool;
      std::atomic<size_t> next{0};
      unsigned n = std::min<size_t>(jobs, level.size());
      for (unsigned t = 0; t < n; ++t)
        pool.emplace_back([&]() {
          for (size_t i = next.fetch_add(1); i < level.size();
               i = next.fetch_add(1))
            work(i);
        });
      for (auto &t : pool)
        t.join();
    }
    // deterministic publication order
    for (size_t i = 0; i < level.size(); ++i) {
      FunctionAnalysis &fa = *done[i];
      mergeFragment(*pa, fa.edges);
      connectFormalSummaryEdges(*pa, level[i]);
      for (const auto &fs : fa.freeSites)
        pa->freeSites.push_back(fs);
      for (const auto &w : fa.warnings)
        pa->warnings.push_back(w);
      pa->stats.unmergedEmissions += fa.unmergedEmissions;
      for (const auto &iface : sums[i].alg3.interfaces)
        pa->stats.summaryAuxVars += iface.chain.size();
      FunctionResult fr;
      fr.dom = std::move(fa.dom);
      fr.env = std::move(fa.env);
      fr.store = std::move(fa.store);
      fr.loadStats = std::move(fa.loadStats);
      fr.unmergedEmissions = fa.unmergedEmissions;
      pa->perFunction.emplace(level[i], std::move(fr));
      pa->summaries.emplace(level[i], sums[i]);
      inter.publish(std::move(sums[i]));
    }
  }
  std::sort(pa->freeSites.begin(), pa->freeSites.end(),
            [](const FreeSite &a, const FreeSite &b) {
              return a.label < b.label;
            });
  // every definition is a graph node, even without edges; the double-free
  // client roots its forward searches at in-degree-zero definitions
  for (const auto &f : pa->program.functions) {
    for (ValueId param : f.params)
      pa->graph.nodeOf(param, pa->program.value(param).defLabel);
    for (const auto &bb : f.blocks)
      for (const auto &st : bb.stmts)
        if (st.target)
          pa->graph.nodeOf(st.target, st.label);
  }
  pa->graph.freeze();
  pa->stats.edges = pa->graph.edgeCount();
  pa->stats.prunedUnsat = pa->graph.prunedUnsatCount();
  pa->stats.constraints = pa->guards->semiDecideCount();
  return pa;
}

} // namespace gvf
