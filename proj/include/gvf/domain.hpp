#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "gvf/guard.hpp"
#include "gvf/ir.hpp"

namespace gvf {

using ObjId = uint32_t; // 0 = invalid

enum class ObjOrigin : uint8_t {
  AllocSite,    // x = alloc
  Cell,         // &name storage, one per (function, name)
  Formal,       // placeholder for what a parameter reaches at depth d
  Instantiated, // per-call-site clone of a callee object
  Auxiliary,    // summary chain object (interface variable, depth)
};

struct MemObject {
  ObjOrigin origin;
  std::string name; // stable display name, schedule-independent
  bool singleton;
  FuncId func = 0;
  Label allocLabel = 0;   // AllocSite/Cell: creating statement
  uint32_t paramIdx = 0;  // Formal
  uint32_t depth = 0;     // Formal
  ObjId base = 0;         // Instantiated
  Label callLabel = 0;    // Instantiated
};

// Global interned object table; concurrent insert-or-get with stable ids.
class ObjectTable {
public:
  ObjectTable() { objects_.push_back({}); }

  ObjId allocSite(FuncId f, Label l, const std::string &targetName,
                  bool inLoopReplica);
  ObjId cell(FuncId f, const std::string &cellName, Label firstTaken,
             bool inLoopReplica);
  ObjId formal(FuncId f, const std::string &funcName, uint32_t paramIdx,
               uint32_t depth);
  ObjId instantiated(ObjId base, Label callLabel);
  ObjId auxiliary(FuncId f, const std::string &funcName,
                  const std::string &ifaceName, uint32_t depth);

  const MemObject &obj(ObjId o) const { return objects_[o]; }
  void clearSingleton(ObjId o) { objects_[o].singleton = false; }
  size_t size() const { return objects_.size(); }

private:
  ObjId intern(const std::string &key, MemObject m);
  std::deque<MemObject> objects_;
  std::map<std::string, ObjId> byKey_;
  std::mutex mu_;
};

struct PtEntry {
  GuardId guard;
  ObjId obj;
};

// 𝔼: value -> set of (guard, object), at most one entry per object.
class PointsToEnv {
public:
  const std::vector<PtEntry> &of(ValueId v) const;
  // Merge (g, o) into 𝔼(v): same-object guards disjoin then simplify;
  // entries whose guard is false are dropped.
  void add(GuardStore &gs, ValueId v, GuardId g, ObjId o);
  void addAll(GuardStore &gs, ValueId v, const std::vector<PtEntry> &entries);
  bool known(ValueId v) const { return env_.count(v) != 0; }
  const std::unordered_map<ValueId, std::vector<PtEntry>> &raw() const {
    return env_;
  }

private:
  std::unordered_map<ValueId, std::vector<PtEntry>> env_;
  static const std::vector<PtEntry> kEmpty;
};

struct StoreEntry {
  GuardId guard;
  Label label;   // store site
  ValueId value; // stored value
  bool strong = false;
};

// 𝕊 for one block: object -> entries, oldest first in the vector; the
// dominator walk iterates newest first.
using BlockStore = std::unordered_map<ObjId, std::vector<StoreEntry>>;

// Per-function abstract store, one BlockStore per basic block.
class AbstractStore {
public:
  explicit AbstractStore(size_t blockCount) : blocks_(blockCount) {}

  BlockStore &block(BlockId b) { return blocks_[b]; }
  const BlockStore &block(BlockId b) const { return blocks_[b]; }
  size_t blockCount() const { return blocks_.size(); }

  // Append, merging with an existing entry for the same (label, value).
  void insert(GuardStore &gs, BlockId b, ObjId o, StoreEntry e);
  // Strong update: drop all entries for o in block b first.
  void killAndInsert(BlockId b, ObjId o, StoreEntry e);
  // Place an entry at the oldest position (formal content seeds).
  void insertOldest(BlockId b, ObjId o, StoreEntry e);

private:
  std::vector<BlockStore> blocks_;
};

// Π: conjoin each guard with the precondition, simplify, drop false.
std::vector<PtEntry> piEnv(GuardStore &gs, const std::vector<PtEntry> &entries,
                           GuardId pre);
std::vector<StoreEntry> piStore(GuardStore &gs,
                                const std::vector<StoreEntry> &entries,
                                GuardId pre);

// Same-object guards merged by disjunction.
std::vector<PtEntry> joinEnv(GuardStore &gs, const std::vector<PtEntry> &a,
                             const std::vector<PtEntry> &b);

} // namespace gvf
