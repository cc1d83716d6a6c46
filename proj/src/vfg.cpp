#include "gvf/vfg.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "json.hpp"

namespace gvf {

const char *toString(EdgeKind k) {
  switch (k) {
  case EdgeKind::Direct:
    return "direct";
  case EdgeKind::Summary:
    return "summary";
  case EdgeKind::CallBind:
    return "call";
  case EdgeKind::ReturnBind:
    return "return";
  }
  return "?";
}

CrossDir crossDir(const VFGEdge &e) {
  if (!e.callTag)
    return CrossDir::None;
  switch (e.kind) {
  case EdgeKind::CallBind:
    return CrossDir::Enter;
  case EdgeKind::ReturnBind:
  case EdgeKind::Summary:
    return CrossDir::Exit;
  default:
    return CrossDir::None;
  }
}

const std::vector<uint32_t> ValueFlowGraph::kNoEdges;

NodeId ValueFlowGraph::nodeOf(ValueId v, Label l) {
  auto key = std::make_pair(v, l);
  auto it = nodeIndex_.find(key);
  if (it != nodeIndex_.end())
    return it->second;
  NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back({v, l});
  out_.emplace_back();
  in_.emplace_back();
  nodeIndex_.emplace(key, id);
  return id;
}

bool ValueFlowGraph::hasNode(ValueId v, Label l) const {
  return nodeIndex_.count({v, l}) != 0;
}

NodeId ValueFlowGraph::findNode(ValueId v, Label l) const {
  auto it = nodeIndex_.find({v, l});
  assert(it != nodeIndex_.end());
  return it->second;
}

void ValueFlowGraph::upsertEdge(GuardStore &gs, NodeId src, NodeId dst,
                                EdgeKind kind, GuardId guard, Label callTag) {
  assert(!frozen_);
  guard = gs.simplify(guard);
  if (guard == GuardStore::kFalse ||
      gs.semiDecide(guard) == SatVerdict::UNSAT) {
    ++prunedUnsat_;
    return;
  }
  auto key = std::make_tuple(src, dst, kind, callTag);
  auto it = edgeIndex_.find(key);
  if (it != edgeIndex_.end()) {
    VFGEdge &e = edges_[it->second];
    e.guard = gs.disj(e.guard, guard);
    return;
  }
  uint32_t idx = static_cast<uint32_t>(edges_.size());
  edges_.push_back({src, dst, kind, guard, callTag});
  edgeIndex_.emplace(key, idx);
  out_[src].push_back(idx);
  in_[dst].push_back(idx);
}

const std::vector<uint32_t> &ValueFlowGraph::outEdges(NodeId n) const {
  return n < out_.size() ? out_[n] : kNoEdges;
}

const std::vector<uint32_t> &ValueFlowGraph::inEdges(NodeId n) const {
  return n < in_.size() ? in_[n] : kNoEdges;
}

namespace {

std::string nodeText(const Program &p, const VFGNode &n) {
  return p.value(n.value).name + "@l" + std::to_string(n.label);
}

struct NodeSortKey {
  std::string func;
  Label label;
  std::string name;
  bool operator<(const NodeSortKey &o) const {
    if (func != o.func)
      return func < o.func;
    if (label != o.label)
      return label < o.label;
    return name < o.name;
  }
};

NodeSortKey sortKey(const Program &p, const VFGNode &n) {
  const Value &v = p.value(n.value);
  return {p.function(v.func).name, n.label, v.name};
}

} // namespace

std::vector<uint32_t> ValueFlowGraph::sortedEdgeOrder(const Program &p) const {
  std::vector<uint32_t> order(edges_.size());
  for (uint32_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    const VFGEdge &ea = edges_[a], &eb = edges_[b];
    auto ka = std::make_tuple(sortKey(p, nodes_[ea.src]),
                              sortKey(p, nodes_[ea.dst]),
                              static_cast<int>(ea.kind), ea.callTag);
    auto kb = std::make_tuple(sortKey(p, nodes_[eb.src]),
                              sortKey(p, nodes_[eb.dst]),
                              static_cast<int>(eb.kind), eb.callTag);
    return ka < kb;
  });
  return order;
}

std::string ValueFlowGraph::exportDot(const Program &p,
                                      const GuardStore &gs) const {
  std::vector<uint32_t> nodeOrder(nodes_.size());
  for (uint32_t i = 0; i < nodeOrder.size(); ++i)
    nodeOrder[i] = i;
  std::stable_sort(nodeOrder.begin(), nodeOrder.end(),
                   [&](uint32_t a, uint32_t b) {
                     return sortKey(p, nodes_[a]) < sortKey(p, nodes_[b]);
                   });
  std::ostringstream os;
  os << "digraph vfg {\n";
  for (uint32_t n : nodeOrder)
    os << "  \"" << nodeText(p, nodes_[n]) << "\";\n";
  for (uint32_t i : sortedEdgeOrder(p)) {
    const VFGEdge &e = edges_[i];
    os << "  \"" << nodeText(p, nodes_[e.src]) << "\" -> \""
       << nodeText(p, nodes_[e.dst]) << "\" [label=\"" << toString(e.kind)
       << " " << gs.text(e.guard) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string ValueFlowGraph::exportJson(const Program &p,
                                       const GuardStore &gs) const {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  std::vector<uint32_t> nodeOrder(nodes_.size());
  for (uint32_t i = 0; i < nodeOrder.size(); ++i)
    nodeOrder[i] = i;
  std::stable_sort(nodeOrder.begin(), nodeOrder.end(),
                   [&](uint32_t a, uint32_t b) {
                     return sortKey(p, nodes_[a]) < sortKey(p, nodes_[b]);
                   });
  for (uint32_t n : nodeOrder)
    j["nodes"].push_back(nodeText(p, nodes_[n]));
  j["edges"] = nlohmann::json::array();
  for (uint32_t i : sortedEdgeOrder(p)) {
    const VFGEdge &e = edges_[i];
    nlohmann::json je;
    je["src"] = nodeText(p, nodes_[e.src]);
    je["dst"] = nodeText(p, nodes_[e.dst]);
    je["kind"] = toString(e.kind);
    je["guard"] = gs.text(e.guard);
    if (e.callTag)
      je["call"] = "l" + std::to_string(e.callTag);
    j["edges"].push_back(je);
  }
  return j.dump(2) + "\n";
}

} // namespace gvf
