#include "gvf/oracle.hpp"

#include <algorithm>
#include <cassert>

#include "gvf/diag.hpp"
#include "json.hpp"

namespace gvf {

namespace {

struct RtVal {
  uint32_t obj = 0; // concrete object instance; 0 = no object
  std::set<ValueId> ancestors;
  std::set<Label> producers;
};

struct Cell {
  bool hasContent = false;
  RtVal content;
};

struct Interp {
  const Program &prog;
  GuardStore &gs;
  const std::vector<bool> &assignment;
  uint32_t assignIdx;
  OracleResult &result;

  uint32_t nextObj = 1;
  std::map<uint32_t, Cell> heap;
  std::map<uint32_t, std::vector<Label>> freed; // object -> free origins

  void recordDef(ValueId v, RtVal &rv) {
    for (ValueId a : rv.ancestors)
      if (a != v)
        result.dependence[{a, v}].insert(assignIdx);
    rv.ancestors.insert(v);
    auto &prod = result.producers[v];
    prod.insert(rv.producers.begin(), rv.producers.end());
    prod.insert(prog.value(v).defLabel);
  }

  bool evalCond(const std::string &text) {
    auto [rep, sign] = prog.guards->internAtom(text);
    return assignment.at(rep) == sign;
  }

  RtVal freshOpaque(ValueId v, Label label) {
    RtVal rv;
    rv.obj = nextObj++;
    rv.ancestors = {};
    rv.producers = {label};
    (void)v;
    return rv;
  }

  void runFunction(const Function &f, std::vector<RtVal> args, RtVal *retOut,
                   int depth) {
    if (depth > 64)
      throw SemanticError("oracle: call depth exceeded (recursion survived?)");
    std::map<ValueId, RtVal> env;
    std::map<std::string, uint32_t> cells; // per-invocation &name storage
    assert(args.size() == f.params.size());
    for (size_t j = 0; j < f.params.size(); ++j) {
      RtVal rv = std::move(args[j]);
      rv.producers.insert(prog.value(f.params[j]).defLabel);
      recordDef(f.params[j], rv);
      env[f.params[j]] = std::move(rv);
    }
    auto rt = [&](ValueId v) -> RtVal {
      auto it = env.find(v);
      return it == env.end() ? RtVal{} : it->second;
    };

    BlockId b = 0;
    while (true) {
      const BasicBlock &bb = f.blocks[b];
      for (const auto &st : bb.stmts) {
        switch (st.kind) {
        case StmtKind::Alloc: {
          RtVal rv;
          rv.obj = nextObj++;
          rv.producers = {st.label};
          recordDef(st.target, rv);
          env[st.target] = std::move(rv);
          break;
        }
        case StmtKind::AddressOf: {
          auto it = cells.find(st.cellName);
          uint32_t obj;
          if (it != cells.end()) {
            obj = it->second;
          } else {
            obj = nextObj++;
            cells.emplace(st.cellName, obj);
          }
          RtVal rv;
          rv.obj = obj;
          rv.producers = {st.label};
          recordDef(st.target, rv);
          env[st.target] = std::move(rv);
          break;
        }
        case StmtKind::Copy: {
          RtVal rv = rt(st.a);
          rv.producers.insert(st.label);
          recordDef(st.target, rv);
          env[st.target] = std::move(rv);
          break;
        }
        case StmtKind::Phi: {
          // resolved by the incoming edge taken; handled at branch time via
          // lastPred
          break;
        }
        case StmtKind::Load: {
          RtVal ptr = rt(st.a);
          RtVal rv;
          if (ptr.obj) {
            auto hit = heap.find(ptr.obj);
            if (hit != heap.end() && hit->second.hasContent)
              rv = hit->second.content;
          }
          rv.producers.insert(st.label);
          recordDef(st.target, rv);
          env[st.target] = std::move(rv);
          break;
        }
        case StmtKind::Store: {
          RtVal ptr = rt(st.a);
          if (ptr.obj) {
            Cell &cell = heap[ptr.obj];
            cell.hasContent = true;
            cell.content = rt(st.b);
            cell.content.producers.insert(st.label);
          }
          break;
        }
        case StmtKind::Call: {
          std::vector<RtVal> callArgs;
          for (ValueId a : st.args)
            callArgs.push_back(rt(a));
          RtVal ret;
          runFunction(prog.function(st.callee), std::move(callArgs), &ret,
                      depth + 1);
          ret.producers.insert(st.label);
          recordDef(st.target, ret);
          env[st.target] = std::move(ret);
          break;
        }
        case StmtKind::Free: {
          RtVal ptr = rt(st.a);
          if (ptr.obj) {
            auto &sites = freed[ptr.obj];
            Label origin = prog.originOf(st.label);
            for (Label prev : sites)
              result.doubleFrees.insert(
                  {std::min(prev, origin), std::max(prev, origin)});
            sites.push_back(origin);
          }
          break;
        }
        case StmtKind::Havoc: {
          RtVal rv = freshOpaque(st.target, st.label);
          recordDef(st.target, rv);
          env[st.target] = std::move(rv);
          break;
        }
        }
      }
      const Terminator &t = bb.term;
      BlockId next;
      if (t.kind == TermKind::Ret) {
        if (retOut && t.retValue) {
          RtVal rv = rt(*t.retValue);
          *retOut = std::move(rv);
        }
        return;
      }
      if (t.kind == TermKind::Jump) {
        next = t.thenBlock;
      } else {
        next = evalCond(t.condText) ? t.thenBlock : t.elseBlock;
      }
      // phi resolution on the taken edge; all arms read the predecessor
      // state simultaneously
      std::vector<std::pair<ValueId, RtVal>> phiValues;
      for (const auto &st : f.blocks[next].stmts) {
        if (st.kind != StmtKind::Phi)
          continue;
        for (const auto &arm : st.arms) {
          if (arm.pred != b)
            continue;
          RtVal rv = rt(arm.value);
          rv.producers.insert(st.label);
          phiValues.emplace_back(st.target, std::move(rv));
        }
      }
      for (auto &[target, rv] : phiValues) {
        recordDef(target, rv);
        env[target] = std::move(rv);
      }
      b = next;
    }
  }
};

} // namespace

std::vector<bool> OracleResult::assignmentOf(uint32_t idx,
                                             size_t atomTableSize) const {
  std::vector<bool> a(atomTableSize, false);
  for (size_t i = 0; i < repAtoms.size(); ++i)
    a[repAtoms[i]] = (idx >> i) & 1u;
  return a;
}

OracleResult enumerateOracle(const Program &p, uint32_t atomLimit) {
  OracleResult result;
  GuardStore &gs = *p.guards;
  std::set<AtomId> reps;
  for (size_t i = 0; i < gs.atomCount(); ++i)
    reps.insert(gs.atom(static_cast<AtomId>(i)).rep);
  result.repAtoms.assign(reps.begin(), reps.end());
  if (result.repAtoms.size() > atomLimit)
    throw OracleLimitError("oracle refuses: " +
                           std::to_string(result.repAtoms.size()) +
                           " atoms exceed the limit of " +
                           std::to_string(atomLimit));

  uint64_t count = 1ull << result.repAtoms.size();
  for (uint32_t idx = 0; idx < count; ++idx) {
    std::vector<bool> assignment = result.assignmentOf(idx, gs.atomCount());
    // complements receive complementary values by construction
    for (const auto &f : p.functions) {
      Interp interp{p, gs, assignment, idx, result, 1, {}, {}};
      std::vector<RtVal> args;
      for (size_t j = 0; j < f.params.size(); ++j)
        args.push_back(interp.freshOpaque(
            f.params[j], p.value(f.params[j]).defLabel));
      interp.runFunction(f, std::move(args), nullptr, 0);
      ++result.runs;
    }
  }
  return result;
}

std::string oracleJson(const Program &p, const OracleResult &r) {
  nlohmann::json j;
  j["runs"] = r.runs;
  j["atoms"] = r.repAtoms.size();
  auto &dep = j["dependence"] = nlohmann::json::array();
  for (const auto &[pair, assigns] : r.dependence) {
    const Value &src = p.value(pair.first);
    const Value &dst = p.value(pair.second);
    dep.push_back({p.function(src.func).name + ":" + src.name,
                   p.function(dst.func).name + ":" + dst.name,
                   assigns.size()});
  }
  auto &df = j["double_frees"] = nlohmann::json::array();
  for (const auto &[a, b] : r.doubleFrees)
    df.push_back({"l" + std::to_string(a), "l" + std::to_string(b)});
  auto &prod = j["producers"] = nlohmann::json::object();
  for (const auto &[v, labels] : r.producers) {
    const Value &val = p.value(v);
    nlohmann::json arr = nlohmann::json::array();
    for (Label l : labels)
      arr.push_back("l" + std::to_string(l));
    prod[p.function(val.func).name + ":" + val.name] = arr;
  }
  return j.dump(2) + "\n";
}

} // namespace gvf
