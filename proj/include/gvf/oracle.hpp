#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gvf/ir.hpp"

namespace gvf {

// Ground truth by exhaustive enumeration: every assignment of the branch
// atoms, every function run as a root (parameters bound to fresh opaque
// cells, mirroring the analysis's non-aliasing assumption), a concrete
// interpreter tracking value provenance through an explicit store.
struct OracleResult {
  // (src value, dst value) -> assignments under which dst's concrete value
  // derived from src's definition
  std::map<std::pair<ValueId, ValueId>, std::set<uint32_t>> dependence;
  // unordered pairs of free-site origin labels that hit the same object
  std::set<std::pair<Label, Label>> doubleFrees;
  // per value: statement labels that produced its concrete values
  std::map<ValueId, std::set<Label>> producers;
  std::vector<AtomId> repAtoms; // enumerated representative atoms, ascending
  uint64_t runs = 0;

  std::vector<bool> assignmentOf(uint32_t idx, size_t atomTableSize) const;
};

// Throws OracleLimitError if the program has more representative atoms than
// atomLimit (default 20).
OracleResult enumerateOracle(const Program &p, uint32_t atomLimit = 20);

std::string oracleJson(const Program &p, const OracleResult &r);

} // namespace gvf
