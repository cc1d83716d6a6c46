#pragma once

#include <string>
#include <vector>

#include "gvf/ir.hpp"

namespace gvf {

struct UnrollResult {
  ast::Module module;
  std::vector<std::string> warnings; // one per havoc'd deep-recursion call
};

// Bounded loop and recursion unrolling.
//
// Every `while (c) { S }` is rewritten into k guarded replicas of S, each
// replica's entry guarded by a fresh test of c's atom, followed by the loop
// exit. Values defined in the body are renamed per replica. Replicated
// statements are flagged so their allocation sites lose singleton status.
//
// Recursive call chains are expanded to depth d by cloning functions along
// call-graph cycles; calls that would exceed the depth become havoc
// statements (receiver bound to a fresh unconstrained value, no side
// effects) and produce a warning.
//
// Idempotent on loop-free, recursion-free modules.
UnrollResult unrollModule(const ast::Module &m, int k, int d);

} // namespace gvf
