#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gvf/domain.hpp"
#include "gvf/guard.hpp"
#include "gvf/ir.hpp"

namespace gvf {

using NodeId = uint32_t;

enum class EdgeKind : uint8_t { Direct, Summary, CallBind, ReturnBind };

const char *toString(EdgeKind k);

struct VFGNode {
  ValueId value;
  Label label;
};

struct VFGEdge {
  NodeId src, dst;
  EdgeKind kind;
  GuardId guard;
  // Call-site label for edges that cross a function boundary; 0 for edges
  // that stay at one level. Traversals match enter/exit tags per call site.
  Label callTag = 0;
};

// Whether an edge enters or leaves the callee's scope, seen in the forward
// direction. CallBind edges (actuals to formals, caller memory to formal
// contents) enter; ReturnBind and call-tagged Summary edges (callee nodes to
// cloned auxiliaries) leave.
enum class CrossDir : uint8_t { None, Enter, Exit };
CrossDir crossDir(const VFGEdge &e);

class ValueFlowGraph {
public:
  NodeId nodeOf(ValueId v, Label l); // insert-or-get
  bool hasNode(ValueId v, Label l) const;
  NodeId findNode(ValueId v, Label l) const;
  const VFGNode &node(NodeId n) const { return nodes_[n]; }
  size_t nodeCount() const { return nodes_.size(); }

  // Insert or merge: an existing (src, dst, kind, callTag) edge's guard
  // becomes simplify(old ∨ new). Guards that are UNSAT by the semi
  // procedure are rejected and counted.
  void upsertEdge(GuardStore &gs, NodeId src, NodeId dst, EdgeKind kind,
                  GuardId guard, Label callTag = 0);

  const std::vector<VFGEdge> &edges() const { return edges_; }
  const std::vector<uint32_t> &outEdges(NodeId n) const;
  const std::vector<uint32_t> &inEdges(NodeId n) const;

  uint64_t prunedUnsatCount() const { return prunedUnsat_; }
  size_t edgeCount() const { return edges_.size(); }

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  std::string exportDot(const Program &p, const GuardStore &gs) const;
  std::string exportJson(const Program &p, const GuardStore &gs) const;

private:
  std::vector<uint32_t> sortedEdgeOrder(const Program &p) const;
  std::vector<VFGNode> nodes_;
  std::map<std::pair<ValueId, Label>, NodeId> nodeIndex_;
  std::vector<VFGEdge> edges_;
  std::map<std::tuple<NodeId, NodeId, EdgeKind, Label>, uint32_t> edgeIndex_;
  std::vector<std::vector<uint32_t>> out_, in_;
  uint64_t prunedUnsat_ = 0;
  bool frozen_ = false;
  static const std::vector<uint32_t> kNoEdges;
};

} // namespace gvf
