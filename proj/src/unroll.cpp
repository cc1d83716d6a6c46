#include "gvf/unroll.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <variant>

#include "gvf/diag.hpp"

namespace gvf {

namespace {

using ast::Item;
using ast::Stmt;
using ast::While;

void collectBodyDefs(const std::vector<Item> &items,
                     std::set<std::string> &out) {
  for (const auto &item : items) {
    if (std::holds_alternative<Stmt>(item)) {
      const auto &s = std::get<Stmt>(item);
      if (!s.target.empty())
        out.insert(s.target);
    } else {
      collectBodyDefs(std::get<While>(item).body, out);
    }
  }
}

struct LoopExpander {
  ast::Function out;
  Label &nextLabel;
  int k;
  int freshCounter = 0;
  ast::Block cur;
  bool curOpen = false;

  LoopExpander(const ast::Function &f, Label &nextLabel, int k)
      : nextLabel(nextLabel), k(k) {
    out.name = f.name;
    out.params = f.params;
  }

  std::string freshName(const std::string &base) {
    return base + "__u" + std::to_string(++freshCounter);
  }

  void openBlock(std::string name) {
    cur = ast::Block{};
    cur.name = std::move(name);
    curOpen = true;
  }

  void closeBlock(ast::Terminator term) {
    cur.term = std::move(term);
    cur.hasTerm = true;
    out.blocks.push_back(std::move(cur));
    curOpen = false;
  }

  // Clone a body item list, renaming body-defined values and assigning
  // fresh labels that remember their origin.
  std::vector<Item> cloneBody(const std::vector<Item> &items,
                              const std::map<std::string, std::string> &ren) {
    std::vector<Item> clone;
    for (const auto &item : items) {
      if (std::holds_alternative<Stmt>(item)) {
        Stmt s = std::get<Stmt>(item);
        s.origin = s.origin ? s.origin : s.label;
        s.label = ++nextLabel;
        s.inLoopReplica = true;
        auto rn = [&](std::string &name) {
          auto it = ren.find(name);
          if (it != ren.end())
            name = it->second;
        };
        if (!s.target.empty())
          rn(s.target);
        if (s.kind != ast::StmtKind::AddressOf)
          rn(s.a);
        rn(s.b);
        for (auto &a : s.args)
          rn(a);
        clone.push_back(std::move(s));
      } else {
        const auto &w = std::get<While>(item);
        While wc;
        wc.cond = w.cond;
        wc.body = cloneBody(w.body, ren);
        clone.push_back(std::move(wc));
      }
    }
    return clone;
  }

  void expandItems(const std::vector<Item> &items) {
    for (const auto &item : items) {
      if (std::holds_alternative<Stmt>(item)) {
        cur.items.push_back(item);
        continue;
      }
      const auto &w = std::get<While>(item);
      std::set<std::string> defs;
      collectBodyDefs(w.body, defs);

      std::string exitName = freshName(cur.name + "__exit");
      std::vector<std::string> replicaNames;
      for (int i = 0; i < k; ++i)
        replicaNames.push_back(freshName(cur.name + "__it"));

      ast::Terminator headBr;
      headBr.kind = ast::TermKind::Branch;
      headBr.cond = w.cond;
      headBr.thenBlock = replicaNames[0];
      headBr.elseBlock = exitName;
      closeBlock(headBr);

      for (int i = 0; i < k; ++i) {
        std::map<std::string, std::string> ren;
        for (const auto &d : defs)
          ren[d] = freshName(d);
        openBlock(replicaNames[i]);
        expandItems(cloneBody(w.body, ren));
        ast::Terminator t;
        if (i + 1 < k) {
          t.kind = ast::TermKind::Branch;
          t.cond = w.cond;
          t.thenBlock = replicaNames[i + 1];
          t.elseBlock = exitName;
        } else {
          t.kind = ast::TermKind::Jump;
          t.thenBlock = exitName;
        }
        closeBlock(t);
      }
      openBlock(exitName);
    }
  }

  ast::Function run(const ast::Function &f) {
    for (const auto &b : f.blocks) {
      openBlock(b.name);
      expandItems(b.items);
      closeBlock(b.term);
    }
    return std::move(out);
  }
};

bool hasWhiles(const ast::Function &f) {
  for (const auto &b : f.blocks)
    for (const auto &item : b.items)
      if (std::holds_alternative<While>(item))
        return true;
  return false;
}

// ---------------------------------------------------------------------------
// Recursion unrolling: clone functions along call-graph cycles up to depth
// d; deeper intra-cycle calls become havoc.
// ---------------------------------------------------------------------------

struct RecursionExpander {
  const ast::Module &in;
  int depth;
  Label &nextLabel;
  std::vector<ast::Function> outFunctions;
  std::vector<std::string> warnings;
  std::map<std::string, size_t> inIndex;
  std::map<std::string, int> sccId;
  std::set<std::string> cyclic; // in a nontrivial SCC or self-recursive
  // instantiation key -> (emitted name, output slot); slots are assigned at
  // registration time so emission order matches discovery order
  std::map<std::pair<std::string, int>, std::pair<std::string, size_t>>
      cloneName;

  RecursionExpander(const ast::Module &m, int d, Label &nextLabel)
      : in(m), depth(d), nextLabel(nextLabel) {
    for (size_t i = 0; i < m.functions.size(); ++i)
      inIndex[m.functions[i].name] = i;
    findSccs();
  }

  static void collectCalls(const std::vector<Item> &items,
                           std::set<std::string> &out) {
    for (const auto &item : items) {
      if (std::holds_alternative<Stmt>(item)) {
        const auto &s = std::get<Stmt>(item);
        if (s.kind == ast::StmtKind::Call)
          out.insert(s.callee);
      } else {
        collectCalls(std::get<While>(item).body, out);
      }
    }
  }

  void findSccs() {
    std::map<std::string, std::set<std::string>> callees, callers;
    for (const auto &f : in.functions) {
      auto &cs = callees[f.name];
      for (const auto &b : f.blocks)
        collectCalls(b.items, cs);
      for (const auto &c : cs)
        callers[c].insert(f.name);
    }
    // Kosaraju
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const auto &f : in.functions) {
      if (seen.count(f.name))
        continue;
      std::vector<std::pair<std::string, bool>> stack{{f.name, false}};
      while (!stack.empty()) {
        auto [cur, done] = stack.back();
        stack.pop_back();
        if (done) {
          order.push_back(cur);
          continue;
        }
        if (!seen.insert(cur).second)
          continue;
        stack.push_back({cur, true});
        for (const auto &c : callees[cur])
          if (inIndex.count(c) && !seen.count(c))
            stack.push_back({c, false});
      }
    }
    int next = 0;
    std::set<std::string> assigned;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (assigned.count(*it))
        continue;
      int id = next++;
      std::vector<std::string> work{*it};
      std::vector<std::string> members;
      while (!work.empty()) {
        std::string cur = work.back();
        work.pop_back();
        if (!assigned.insert(cur).second)
          continue;
        sccId[cur] = id;
        members.push_back(cur);
        for (const auto &c : callers[cur])
          if (!assigned.count(c))
            work.push_back(c);
      }
      if (members.size() > 1) {
        for (const auto &m : members)
          cyclic.insert(m);
      } else if (callees[members[0]].count(members[0])) {
        cyclic.insert(members[0]); // direct self-recursion
      }
    }
  }

  // Emit (once) `name` entered at cycle level `level` (0 for acyclic
  // functions, which stay shared); returns the emitted name.
  std::string instantiate(const std::string &name, int level) {
    if (!cyclic.count(name))
      level = 0;
    auto key = std::make_pair(name, level);
    auto it = cloneName.find(key);
    if (it != cloneName.end())
      return it->second.first;
    std::string newName =
        level <= 1 ? name : name + "__r" + std::to_string(level);
    size_t slot = outFunctions.size();
    outFunctions.push_back({});
    cloneName.emplace(key, std::make_pair(newName, slot));

    ast::Function clone = in.functions[inIndex.at(name)];
    clone.name = newName;
    bool freshLabels = level > 1;
    for (auto &b : clone.blocks)
      rewriteItems(name, newName, b.items, level, freshLabels);
    outFunctions[slot] = std::move(clone);
    return newName;
  }

  void rewriteItems(const std::string &baseName, const std::string &fname,
                    std::vector<Item> &items, int level, bool freshLabels) {
    for (auto &item : items) {
      if (std::holds_alternative<While>(item)) {
        rewriteItems(baseName, fname, std::get<While>(item).body, level,
                     freshLabels);
        continue;
      }
      auto &s = std::get<Stmt>(item);
      if (freshLabels && s.label) {
        s.origin = s.origin ? s.origin : s.label;
        s.label = ++nextLabel;
      }
      if (s.kind != ast::StmtKind::Call)
        continue;
      if (!inIndex.count(s.callee))
        throw SemanticError("unknown call target '" + s.callee + "' in '" +
                            baseName + "'");
      if (!cyclic.count(s.callee)) {
        s.callee = instantiate(s.callee, 0);
        continue;
      }
      bool sameCycle = cyclic.count(baseName) &&
                       sccId.at(baseName) == sccId.at(s.callee);
      int nl = sameCycle ? level + 1 : 1;
      if (nl > depth) {
        warnings.push_back("recursion depth " + std::to_string(depth) +
                           " exceeded at call to '" + s.callee + "' in '" +
                           fname + "'; receiver havocked");
        s.kind = ast::StmtKind::Havoc;
        s.callee.clear();
        s.args.clear();
        continue;
      }
      s.callee = instantiate(s.callee, nl);
    }
  }

  ast::Module run() {
    for (const auto &f : in.functions)
      instantiate(f.name, 1);
    ast::Module out;
    out.functions = std::move(outFunctions);
    out.maxLabel = nextLabel;
    return out;
  }
};

} // namespace

UnrollResult unrollModule(const ast::Module &m, int k, int d) {
  if (k < 1 || d < 1)
    throw SemanticError("unroll bounds must be at least 1");
  Label nextLabel = m.maxLabel;
  ast::Module loopFree;
  loopFree.functions.reserve(m.functions.size());
  for (const auto &f : m.functions) {
    if (hasWhiles(f)) {
      LoopExpander exp(f, nextLabel, k);
      loopFree.functions.push_back(exp.run(f));
    } else {
      loopFree.functions.push_back(f);
    }
  }
  loopFree.maxLabel = nextLabel;

  RecursionExpander rec(loopFree, d, nextLabel);
  UnrollResult result;
  result.module = rec.run();
  result.warnings = std::move(rec.warnings);
  return result;
}

} // namespace gvf
