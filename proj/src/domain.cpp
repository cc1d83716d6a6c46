#include "gvf/domain.hpp"

#include <algorithm>

namespace gvf {

ObjId ObjectTable::intern(const std::string &key, MemObject m) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = byKey_.find(key);
  if (it != byKey_.end())
    return it->second;
  ObjId id = static_cast<ObjId>(objects_.size());
  objects_.push_back(std::move(m));
  byKey_.emplace(key, id);
  return id;
}

ObjId ObjectTable::allocSite(FuncId f, Label l, const std::string &targetName,
                             bool inLoopReplica) {
  MemObject m;
  m.origin = ObjOrigin::AllocSite;
  m.func = f;
  m.allocLabel = l;
  m.name = "alloc_" + targetName + "_l" + std::to_string(l);
  m.singleton = !inLoopReplica;
  return intern("a:" + std::to_string(l), std::move(m));
}

ObjId ObjectTable::cell(FuncId f, const std::string &cellName, Label firstTaken,
                        bool inLoopReplica) {
  MemObject m;
  m.origin = ObjOrigin::Cell;
  m.func = f;
  m.allocLabel = firstTaken;
  m.name = "alloc_" + cellName;
  m.singleton = !inLoopReplica;
  return intern("c:" + std::to_string(f) + ":" + cellName, std::move(m));
}

ObjId ObjectTable::formal(FuncId f, const std::string &funcName,
                          uint32_t paramIdx, uint32_t depth) {
  MemObject m;
  m.origin = ObjOrigin::Formal;
  m.func = f;
  m.paramIdx = paramIdx;
  m.depth = depth;
  m.name = "formal_" + funcName + "_p" + std::to_string(paramIdx) + "_d" +
           std::to_string(depth);
  m.singleton = false;
  return intern("f:" + std::to_string(f) + ":" + std::to_string(paramIdx) +
                    ":" + std::to_string(depth),
                std::move(m));
}

ObjId ObjectTable::auxiliary(FuncId f, const std::string &funcName,
                             const std::string &ifaceName, uint32_t depth) {
  MemObject m;
  m.origin = ObjOrigin::Auxiliary;
  m.func = f;
  m.depth = depth;
  m.name = "aux_" + funcName + "_" + ifaceName + "_d" + std::to_string(depth);
  m.singleton = false;
  return intern("x:" + std::to_string(f) + ":" + ifaceName + ":" +
                    std::to_string(depth),
                std::move(m));
}

ObjId ObjectTable::instantiated(ObjId base, Label callLabel) {
  MemObject m;
  m.origin = ObjOrigin::Instantiated;
  m.base = base;
  m.callLabel = callLabel;
  m.name = objects_[base].name + "@l" + std::to_string(callLabel);
  m.singleton = false;
  return intern("i:" + std::to_string(base) + ":" + std::to_string(callLabel),
                std::move(m));
}

const std::vector<PtEntry> PointsToEnv::kEmpty;

const std::vector<PtEntry> &PointsToEnv::of(ValueId v) const {
  auto it = env_.find(v);
  return it == env_.end() ? kEmpty : it->second;
}

void PointsToEnv::add(GuardStore &gs, ValueId v, GuardId g, ObjId o) {
  if (g == GuardStore::kFalse)
    return;
  auto &entries = env_[v];
  for (auto &e : entries) {
    if (e.obj == o) {
      e.guard = gs.disj(e.guard, g);
      return;
    }
  }
  entries.push_back({g, o});
}

void PointsToEnv::addAll(GuardStore &gs, ValueId v,
                         const std::vector<PtEntry> &entries) {
  for (const auto &e : entries)
    add(gs, v, e.guard, e.obj);
}

void AbstractStore::insert(GuardStore &gs, BlockId b, ObjId o, StoreEntry e) {
  if (e.guard == GuardStore::kFalse)
    return;
  auto &list = blocks_[b][o];
  for (auto &old : list) {
    if (old.label == e.label && old.value == e.value) {
      old.guard = gs.disj(old.guard, e.guard);
      old.strong = old.strong && e.strong;
      return;
    }
  }
  list.push_back(std::move(e));
}

void AbstractStore::killAndInsert(BlockId b, ObjId o, StoreEntry e) {
  auto &list = blocks_[b][o];
  list.clear();
  list.push_back(std::move(e));
}

void AbstractStore::insertOldest(BlockId b, ObjId o, StoreEntry e) {
  auto &list = blocks_[b][o];
  list.insert(list.begin(), std::move(e));
}

std::vector<PtEntry> piEnv(GuardStore &gs, const std::vector<PtEntry> &entries,
                           GuardId pre) {
  std::vector<PtEntry> out;
  out.reserve(entries.size());
  for (const auto &e : entries) {
    GuardId g = gs.conj(e.guard, pre);
    if (g != GuardStore::kFalse)
      out.push_back({g, e.obj});
  }
  return out;
}

std::vector<StoreEntry> piStore(GuardStore &gs,
                                const std::vector<StoreEntry> &entries,
                                GuardId pre) {
  std::vector<StoreEntry> out;
  out.reserve(entries.size());
  for (const auto &e : entries) {
    GuardId g = gs.conj(e.guard, pre);
    if (g != GuardStore::kFalse)
      out.push_back({g, e.label, e.value, e.strong});
  }
  return out;
}

std::vector<PtEntry> joinEnv(GuardStore &gs, const std::vector<PtEntry> &a,
                             const std::vector<PtEntry> &b) {
  std::vector<PtEntry> out = a;
  for (const auto &e : b) {
    bool merged = false;
    for (auto &x : out) {
      if (x.obj == e.obj) {
        x.guard = gs.disj(x.guard, e.guard);
        merged = true;
        break;
      }
    }
    if (!merged)
      out.push_back(e);
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const PtEntry &e) {
                             return e.guard == GuardStore::kFalse;
                           }),
            out.end());
  return out;
}

} // namespace gvf
