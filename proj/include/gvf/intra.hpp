#pragma once

#include <map>
#include <string>
#include <vector>

#include "gvf/cfg.hpp"
#include "gvf/domain.hpp"
#include "gvf/guard.hpp"
#include "gvf/ir.hpp"
#include "gvf/vfg.hpp"

namespace gvf {

struct AnalysisOptions {
  bool pathInsensitive = false; // degrade every introduced guard to true
  uint32_t auxDepthBound = 3;   // formal-content / auxiliary chain bound
};

struct FreeSite {
  FuncId func;
  Label label;
  Label origin;
  ValueId operand;
  GuardId pathCond;
};

struct LoadWalkStats {
  Label load;
  ObjId obj;
  uint32_t blocksVisited;
  uint32_t domDepth; // depth of the load's block in the dominator tree
};

// Edge recorded into a per-function fragment; node ids are resolved when
// fragments merge into the global graph.
struct PendingEdge {
  ValueId srcValue;
  Label srcLabel;
  ValueId dstValue;
  Label dstLabel;
  EdgeKind kind;
  GuardId guard;
  Label callTag = 0;
};

// Exit-state contents of one escaped object, newest first.
struct SummaryBinding {
  GuardId guard;
  Label label;
  ValueId value;
};

struct ObjectSummary {
  ObjId obj;
  std::vector<SummaryBinding> bindings;
  bool sideEffectFree = false; // bindings are exactly the formal input seed
};

// The exported, access-path-shaped summary: one auxiliary chain per pointer
// interface variable, contents merged per level.
struct Alg3Level {
  ValueId aux; // R
  ObjId obj;   // the auxiliary object the interface variable now points at
  std::vector<SummaryBinding> bindings;
  bool isPointer = false;
};

struct Alg3Interface {
  std::string name; // parameter name, or "<ret>"
  std::vector<Alg3Level> chain;
};

struct Alg3Summary {
  std::vector<Alg3Interface> interfaces;
  bool truncated = false;
};

struct FunctionSummaryData {
  FuncId func = 0;
  std::vector<ObjId> escapeOrder; // deterministic closure order
  std::map<ObjId, ObjectSummary> objects;
  // per param: content depths the callee actually reads (seeded layers)
  std::vector<std::vector<uint32_t>> seededDepths;
  // (param, depth) -> placeholder for the initial content of that layer
  std::map<std::pair<uint32_t, uint32_t>, ValueId> formalContents;
  PointsToEnv envAtExit;
  Alg3Summary alg3;
  bool truncated = false;
};

class InterContext; // scheduler-owned callee summary lookup (inter.hpp)

// On-the-fly sparse, semi-path-sensitive analysis of one loop-free
// function. Processes blocks in reverse postorder, statements in textual
// order; call statements are resolved against already-published callee
// summaries.
class FunctionAnalysis {
public:
  FunctionAnalysis(Program &prog, Function &f, ObjectTable &objects,
                   const AnalysisOptions &opts, const InterContext &inter);

  void run();

  // --- results ---
  DominanceInfo dom;
  PointsToEnv env;
  AbstractStore store;
  std::vector<PendingEdge> edges;
  std::vector<FreeSite> freeSites;
  std::vector<LoadWalkStats> loadStats;
  uint64_t unmergedEmissions = 0;
  std::vector<std::string> warnings;

  Program &prog;
  Function &func;
  ObjectTable &objects;
  GuardStore &gs;
  const AnalysisOptions &opts;

  // Alg. 2: gather guarded (φ, ℓ', v) values readable from object o at
  // block b under pointer condition beta, maintaining the relevant-update
  // mask sigma and stopping at strong updates.
  std::vector<SummaryBinding> readObject(GuardId beta, ObjId o, BlockId b,
                                         Label loadLabelForStats = 0);

  // Formal content layers: object a parameter reaches at a given depth,
  // seeded with a placeholder "initial content" value on first read.
  ObjId formalLayerObject(uint32_t paramIdx, uint32_t depth);
  void seedFormalIfNeeded(ObjId o);
  ValueId formalContent(uint32_t paramIdx, uint32_t depth); // IN value

  void addEdge(ValueId sv, Label sl, ValueId dv, Label dl, EdgeKind kind,
               GuardId guard, Label callTag = 0);
  GuardId pathGuard(BlockId b) const; // block guard, or true when PI

  // per-(param,depth) content value; exposed for summarization
  std::map<std::pair<uint32_t, uint32_t>, ValueId> formalContents;
  std::map<std::pair<uint32_t, uint32_t>, bool> formalSeeded;

private:
  void transfer(const Statement &st, BlockId b);
  void handleStore(const Statement &st, BlockId b);
  void handleLoad(const Statement &st, BlockId b);
  void handleCall(const Statement &st, BlockId b);

  const InterContext &inter_;
  std::map<std::string, ObjId> cells_;
};

// Serialize env+store as JSON for golden tests:
// {"env": {value: [[guard, object], ...]},
//  "store": {block: {object: [[guard, label, value, strong], ...]}}}
std::string dumpStateJson(const Program &p, const Function &f,
                          const ObjectTable &objects, const GuardStore &gs,
                          const PointsToEnv &env, const AbstractStore &store);

} // namespace gvf
