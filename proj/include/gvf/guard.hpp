#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace gvf {

using AtomId = uint32_t;
using GuardId = uint32_t;

enum class SatVerdict : uint8_t { SAT, UNSAT, UNKNOWN };

const char *toString(SatVerdict v);

// A branch condition abstracted to an opaque Boolean atom. Interning is
// keyed on the normalized source text. A comparison whose operator is the
// exact syntactic complement (> / <=, < / >=, == / !=) over byte-identical
// operands is linked to its partner and shares the partner's literal with
// negative sign.
struct Atom {
  std::string text;              // normalized source text
  AtomId rep;                    // representative atom for literals
  bool repSign;                  // sign of this atom relative to rep
  std::optional<AtomId> complement; // syntactic complement, if interned
};

enum class GuardKind : uint8_t { True, False, Lit, And, Or };

struct GuardNode {
  GuardKind kind;
  AtomId atom = 0;    // Lit only (always a representative id)
  bool positive = true;
  std::vector<GuardId> children; // And/Or only
};

struct SolverLimits {
  uint32_t maxAtoms = 256;
  uint64_t maxDecisions = 1u << 22;
  size_t cnfBudget = 4096; // clause budget for distribution; Tseitin beyond
};

// Shared intern tables for atoms and hash-consed guard formulas.
//
// Guards are kept in negation normal form: negation exists only on
// literals, so the canonical text form (`true`, `false`, `p3`, `!p3`,
// `(& ...)`, `(| ...)`) covers every representable formula. Structural
// equality is id equality. Insert-or-get is safe to call concurrently;
// ids are stable once handed out.
class GuardStore {
public:
  GuardStore();

  // --- atoms ---
  std::pair<AtomId, bool> internAtom(const std::string &normalizedText);
  const Atom &atom(AtomId id) const { return atoms_[id]; }
  size_t atomCount() const { return atoms_.size(); }

  // --- construction (raw; no rewriting beyond arity normalization) ---
  GuardId top() const { return kTrue; }
  GuardId bottom() const { return kFalse; }
  GuardId lit(AtomId atom, bool positive);
  GuardId conjRaw(std::span<const GuardId> gs);
  GuardId disjRaw(std::span<const GuardId> gs);
  GuardId negate(GuardId g);

  // Simplified combinators used throughout the analysis.
  GuardId conj(GuardId a, GuardId b);
  GuardId disj(GuardId a, GuardId b);

  // --- operations ---
  GuardId simplify(GuardId g);
  SatVerdict semiDecide(GuardId g) const;
  SatVerdict fullSat(GuardId g) const; // throws SolverOverflow past limits
  bool equivalent(GuardId a, GuardId b) const;
  bool implies(GuardId a, GuardId b) const;
  bool isValid(GuardId g) const;

  const GuardNode &node(GuardId g) const { return nodes_[g]; }
  std::string text(GuardId g) const;

  // Evaluate under a total assignment of representative atoms.
  bool eval(GuardId g, const std::vector<bool> &assignment) const;
  // Representative atoms occurring in g, ascending.
  std::vector<AtomId> atomsOf(GuardId g) const;

  // Deterministic structural order, independent of interning ids of guards
  // (atom ids are parse-ordered and stable). Used to sort And/Or children
  // so printed output does not depend on construction schedule.
  int structuralCompare(GuardId a, GuardId b) const;

  SolverLimits limits;

  uint64_t semiDecideCount() const { return semiCalls_.load(); }
  void resetCounters() { semiCalls_ = 0; }

  static constexpr GuardId kTrue = 0;
  static constexpr GuardId kFalse = 1;

private:
  GuardId intern(GuardNode n);
  GuardId mkAndSorted(std::vector<GuardId> cs);
  GuardId mkOrSorted(std::vector<GuardId> cs);
  GuardId simplifyAnd(std::vector<GuardId> cs);
  GuardId simplifyOr(std::vector<GuardId> cs);

  std::deque<Atom> atoms_;
  std::unordered_map<std::string, AtomId> atomByText_;
  std::deque<GuardNode> nodes_;
  struct NodeKey {
    GuardKind kind;
    AtomId atom;
    bool positive;
    std::vector<GuardId> children;
    bool operator==(const NodeKey &o) const = default;
  };
  struct NodeKeyHash {
    size_t operator()(const NodeKey &k) const;
  };
  std::unordered_map<NodeKey, GuardId, NodeKeyHash> consed_;
  mutable std::unordered_map<GuardId, GuardId> simplifyMemo_;
  mutable std::unordered_map<GuardId, GuardId> negateMemo_;
  mutable std::recursive_mutex mu_;
  mutable std::atomic<uint64_t> semiCalls_{0};
};

} // namespace gvf
