#include "gvf/guard.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

#include "gvf/diag.hpp"

namespace gvf {

const char *toString(SatVerdict v) {
  switch (v) {
  case SatVerdict::SAT:
    return "SAT";
  case SatVerdict::UNSAT:
    return "UNSAT";
  default:
    return "UNKNOWN";
  }
}

size_t GuardStore::NodeKeyHash::operator()(const NodeKey &k) const {
  size_t h = static_cast<size_t>(k.kind) * 1099511628211ull;
  h ^= k.atom + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  h ^= (k.positive ? 0x517cc1b727220a95ull : 0x2545f4914f6cdd1dull);
  for (GuardId c : k.children)
    h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

GuardStore::GuardStore() {
  nodes_.push_back({GuardKind::True, 0, true, {}});
  nodes_.push_back({GuardKind::False, 0, true, {}});
}

GuardId GuardStore::intern(GuardNode n) {
  NodeKey key{n.kind, n.atom, n.positive, n.children};
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = consed_.find(key);
  if (it != consed_.end())
    return it->second;
  GuardId id = static_cast<GuardId>(nodes_.size());
  nodes_.push_back(std::move(n));
  consed_.emplace(std::move(key), id);
  return id;
}

std::pair<AtomId, bool> GuardStore::internAtom(const std::string &text) {
  assert(!text.empty());
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = atomByText_.find(text);
  if (it != atomByText_.end()) {
    const Atom &a = atoms_[it->second];
    return {a.rep, a.repSign};
  }
  // Complement pairing is syntactic only: flip the operator, keep the
  // operand bytes. "x>2" pairs with "x<=2"; "x>2" and "x>1" stay
  // independent atoms.
  static const std::pair<const char *, const char *> kPairs[] = {
      {"==", "!="}, {"<=", ">"}, {">=", "<"}};
  std::string compl_;
  for (auto [a, b] : kPairs) {
    for (int dir = 0; dir < 2; ++dir) {
      const std::string op = dir == 0 ? a : b;
      const std::string other = dir == 0 ? b : a;
      auto pos = text.find(op);
      if (pos == std::string::npos)
        continue;
      // Guard against matching "<" inside "<=" etc: the operator in the
      // normalized text is the longest match at its position.
      if ((op == "<" || op == ">") && pos + 1 < text.size() &&
          (text[pos + 1] == '='))
        continue;
      compl_ = text.substr(0, pos) + other + text.substr(pos + op.size());
      break;
    }
    if (!compl_.empty())
      break;
  }
  AtomId id = static_cast<AtomId>(atoms_.size());
  Atom atom{text, id, true, std::nullopt};
  if (!compl_.empty()) {
    auto pit = atomByText_.find(compl_);
    if (pit != atomByText_.end()) {
      Atom &partner = atoms_[pit->second];
      atom.rep = partner.rep;
      atom.repSign = !partner.repSign;
      atom.complement = pit->second;
      partner.complement = id;
    }
  }
  atoms_.push_back(atom);
  atomByText_.emplace(text, id);
  return {atoms_[id].rep, atoms_[id].repSign};
}

GuardId GuardStore::lit(AtomId atom, bool positive) {
  return intern({GuardKind::Lit, atom, positive, {}});
}

GuardId GuardStore::conjRaw(std::span<const GuardId> gs) {
  if (gs.empty())
    return kTrue;
  if (gs.size() == 1)
    return gs[0];
  return intern({GuardKind::And, 0, true, {gs.begin(), gs.end()}});
}

GuardId GuardStore::disjRaw(std::span<const GuardId> gs) {
  if (gs.empty())
    return kFalse;
  if (gs.size() == 1)
    return gs[0];
  return intern({GuardKind::Or, 0, true, {gs.begin(), gs.end()}});
}

GuardId GuardStore::negate(GuardId g) {
  {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto it = negateMemo_.find(g);
    if (it != negateMemo_.end())
      return it->second;
  }
  const GuardNode n = node(g);
  GuardId result;
  switch (n.kind) {
  case GuardKind::True:
    result = kFalse;
    break;
  case GuardKind::False:
    result = kTrue;
    break;
  case GuardKind::Lit:
    result = lit(n.atom, !n.positive);
    break;
  case GuardKind::And:
  case GuardKind::Or: {
    std::vector<GuardId> cs;
    cs.reserve(n.children.size());
    for (GuardId c : n.children)
      cs.push_back(negate(c));
    result = n.kind == GuardKind::And ? disjRaw(cs) : conjRaw(cs);
    break;
  }
  }
  std::lock_guard<std::recursive_mutex> lock(mu_);
  negateMemo_[g] = result;
  negateMemo_[result] = g;
  return result;
}

GuardId GuardStore::conj(GuardId a, GuardId b) {
  GuardId gs[2] = {a, b};
  return simplify(conjRaw(gs));
}

GuardId GuardStore::disj(GuardId a, GuardId b) {
  GuardId gs[2] = {a, b};
  return simplify(disjRaw(gs));
}

int GuardStore::structuralCompare(GuardId a, GuardId b) const {
  if (a == b)
    return 0;
  const GuardNode &na = node(a), &nb = node(b);
  if (na.kind != nb.kind)
    return na.kind < nb.kind ? -1 : 1;
  if (na.kind == GuardKind::Lit) {
    if (na.atom != nb.atom)
      return na.atom < nb.atom ? -1 : 1;
    if (na.positive != nb.positive)
      return na.positive ? -1 : 1;
    return 0;
  }
  size_t n = std::min(na.children.size(), nb.children.size());
  for (size_t i = 0; i < n; ++i)
    if (int c = structuralCompare(na.children[i], nb.children[i]))
      return c;
  if (na.children.size() != nb.children.size())
    return na.children.size() < nb.children.size() ? -1 : 1;
  return 0;
}

GuardId GuardStore::mkAndSorted(std::vector<GuardId> cs) {
  if (cs.empty())
    return kTrue;
  if (cs.size() == 1)
    return cs[0];
  return intern({GuardKind::And, 0, true, std::move(cs)});
}

GuardId GuardStore::mkOrSorted(std::vector<GuardId> cs) {
  if (cs.empty())
    return kFalse;
  if (cs.size() == 1)
    return cs[0];
  return intern({GuardKind::Or, 0, true, std::move(cs)});
}

namespace {
// Conjunct view of a guard: And children, or the guard itself.
void conjunctsOf(const GuardStore &gs, GuardId g, std::vector<GuardId> &out) {
  const GuardNode &n = gs.node(g);
  if (n.kind == GuardKind::And) {
    for (GuardId c : n.children)
      out.push_back(c);
  } else {
    out.push_back(g);
  }
}
} // namespace

GuardId GuardStore::simplifyAnd(std::vector<GuardId> in) {
  // flatten, fold identities, dedup, collapse complement pairs
  std::vector<GuardId> cs;
  for (GuardId c : in) {
    if (c == kFalse)
      return kFalse;
    if (c == kTrue)
      continue;
    const GuardNode &n = node(c);
    if (n.kind == GuardKind::And) {
      for (GuardId cc : n.children)
        cs.push_back(cc);
    } else {
      cs.push_back(c);
    }
  }
  std::sort(cs.begin(), cs.end(), [this](GuardId a, GuardId b) {
    return structuralCompare(a, b) < 0;
  });
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  std::set<GuardId> present(cs.begin(), cs.end());
  for (GuardId c : cs)
    if (present.count(negate(c)))
      return kFalse;
  // absorption: a ∧ (a ∨ b) → a
  std::vector<GuardId> kept;
  for (GuardId c : cs) {
    const GuardNode &n = node(c);
    bool absorbed = false;
    if (n.kind == GuardKind::Or) {
      for (GuardId d : n.children)
        if (present.count(d)) {
          absorbed = true;
          break;
        }
    }
    if (!absorbed)
      kept.push_back(c);
  }
  return mkAndSorted(std::move(kept));
}

GuardId GuardStore::simplifyOr(std::vector<GuardId> in) {
  std::vector<GuardId> cs;
  for (GuardId c : in) {
    if (c == kTrue)
      return kTrue;
    if (c == kFalse)
      continue;
    const GuardNode &n = node(c);
    if (n.kind == GuardKind::Or) {
      for (GuardId cc : n.children)
        cs.push_back(cc);
    } else {
      cs.push_back(c);
    }
  }
  std::sort(cs.begin(), cs.end(), [this](GuardId a, GuardId b) {
    return structuralCompare(a, b) < 0;
  });
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  std::set<GuardId> present(cs.begin(), cs.end());
  for (GuardId c : cs)
    if (present.count(negate(c)))
      return kTrue;
  // absorption: a ∨ (a ∧ b) → a
  std::vector<GuardId> kept;
  for (GuardId c : cs) {
    const GuardNode &n = node(c);
    bool absorbed = false;
    if (n.kind == GuardKind::And) {
      for (GuardId d : n.children)
        if (present.count(d)) {
          absorbed = true;
          break;
        }
    }
    if (!absorbed)
      kept.push_back(c);
  }
  cs = std::move(kept);
  if (cs.size() >= 2) {
    // common-factor merge: (ψ∧π) ∨ (¬ψ∧π) → π. Intersect every child's
    // conjunct set; factor out what survives.
    std::vector<GuardId> common;
    conjunctsOf(*this, cs[0], common);
    std::sort(common.begin(), common.end());
    for (size_t i = 1; i < cs.size() && !common.empty(); ++i) {
      std::vector<GuardId> here;
      conjunctsOf(*this, cs[i], here);
      std::sort(here.begin(), here.end());
      std::vector<GuardId> inter;
      std::set_intersection(common.begin(), common.end(), here.begin(),
                            here.end(), std::back_inserter(inter));
      common = std::move(inter);
    }
    if (!common.empty()) {
      std::set<GuardId> commonSet(common.begin(), common.end());
      std::vector<GuardId> residuals;
      bool anyEmpty = false;
      for (GuardId c : cs) {
        std::vector<GuardId> here;
        conjunctsOf(*this, c, here);
        std::vector<GuardId> rest;
        for (GuardId h : here)
          if (!commonSet.count(h))
            rest.push_back(h);
        if (rest.empty()) {
          anyEmpty = true;
          break;
        }
        residuals.push_back(simplifyAnd(std::move(rest)));
      }
      std::vector<GuardId> factor(common.begin(), common.end());
      if (anyEmpty)
        return simplifyAnd(std::move(factor));
      GuardId rest = simplifyOr(std::move(residuals));
      factor.push_back(rest);
      return simplifyAnd(std::move(factor));
    }
  }
  return mkOrSorted(std::move(cs));
}

GuardId GuardStore::simplify(GuardId g) {
  {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto it = simplifyMemo_.find(g);
    if (it != simplifyMemo_.end())
      return it->second;
  }
  const GuardNode n = node(g);
  GuardId result = g;
  switch (n.kind) {
  case GuardKind::True:
  case GuardKind::False:
  case GuardKind::Lit:
    break;
  case GuardKind::And:
  case GuardKind::Or: {
    std::vector<GuardId> cs;
    cs.reserve(n.children.size());
    for (GuardId c : n.children)
      cs.push_back(simplify(c));
    result = n.kind == GuardKind::And ? simplifyAnd(std::move(cs))
                                      : simplifyOr(std::move(cs));
    break;
  }
  }
  std::lock_guard<std::recursive_mutex> lock(mu_);
  simplifyMemo_[g] = result;
  simplifyMemo_[result] = result;
  return result;
}

// ---------------------------------------------------------------------------
// semi decision procedure: unit propagation over the top-level conjuncts.
// Sound on SAT/UNSAT answers, linear-ish, returns UNKNOWN otherwise.
// ---------------------------------------------------------------------------

namespace {

enum class PartialEval : uint8_t { True, False, Residual };

PartialEval evalPartial(const GuardStore &gs, GuardId g,
                        const std::map<AtomId, bool> &units) {
  const GuardNode &n = gs.node(g);
  switch (n.kind) {
  case GuardKind::True:
    return PartialEval::True;
  case GuardKind::False:
    return PartialEval::False;
  case GuardKind::Lit: {
    auto it = units.find(n.atom);
    if (it == units.end())
      return PartialEval::Residual;
    return it->second == n.positive ? PartialEval::True : PartialEval::False;
  }
  case GuardKind::And: {
    bool residual = false;
    for (GuardId c : n.children) {
      PartialEval e = evalPartial(gs, c, units);
      if (e == PartialEval::False)
        return PartialEval::False;
      if (e == PartialEval::Residual)
        residual = true;
    }
    return residual ? PartialEval::Residual : PartialEval::True;
  }
  case GuardKind::Or: {
    bool residual = false;
    for (GuardId c : n.children) {
      PartialEval e = evalPartial(gs, c, units);
      if (e == PartialEval::True)
        return PartialEval::True;
      if (e == PartialEval::Residual)
        residual = true;
    }
    return residual ? PartialEval::Residual : PartialEval::False;
  }
  }
  return PartialEval::Residual;
}

// If g reduces to a single undecided literal under the current units,
// return it.
std::optional<std::pair<AtomId, bool>>
residualUnit(const GuardStore &gs, GuardId g,
             const std::map<AtomId, bool> &units) {
  const GuardNode &n = gs.node(g);
  if (n.kind == GuardKind::Lit) {
    if (units.count(n.atom))
      return std::nullopt;
    return std::make_pair(n.atom, n.positive);
  }
  if (n.kind == GuardKind::Or) {
    std::optional<std::pair<AtomId, bool>> found;
    for (GuardId c : n.children) {
      PartialEval e = evalPartial(gs, c, units);
      if (e == PartialEval::True)
        return std::nullopt;
      if (e == PartialEval::False)
        continue;
      if (found)
        return std::nullopt; // more than one live branch
      found = residualUnit(gs, c, units);
      if (!found)
        return std::nullopt; // live but not a bare literal
    }
    return found;
  }
  if (n.kind == GuardKind::And) {
    // An And is a unit source only if all but one child is already true
    // and the live one is a literal.
    std::optional<std::pair<AtomId, bool>> found;
    for (GuardId c : n.children) {
      PartialEval e = evalPartial(gs, c, units);
      if (e == PartialEval::False)
        return std::nullopt;
      if (e == PartialEval::True)
        continue;
      if (found)
        return std::nullopt;
      found = residualUnit(gs, c, units);
      if (!found)
        return std::nullopt;
    }
    return found;
  }
  return std::nullopt;
}

} // namespace

SatVerdict GuardStore::semiDecide(GuardId g) const {
  ++semiCalls_;
  if (g == kTrue)
    return SatVerdict::SAT;
  if (g == kFalse)
    return SatVerdict::UNSAT;
  std::vector<GuardId> conjuncts;
  conjunctsOf(*this, g, conjuncts);
  std::map<AtomId, bool> units;
  bool changed = true;
  while (changed) {
    changed = false;
    for (GuardId c : conjuncts) {
      PartialEval e = evalPartial(*this, c, units);
      if (e == PartialEval::False)
        return SatVerdict::UNSAT;
      if (e == PartialEval::True)
        continue;
      if (auto u = residualUnit(*this, c, units)) {
        auto it = units.find(u->first);
        if (it != units.end()) {
          if (it->second != u->second)
            return SatVerdict::UNSAT;
        } else {
          units.emplace(u->first, u->second);
          changed = true;
        }
      }
    }
  }
  for (GuardId c : conjuncts)
    if (evalPartial(*this, c, units) != PartialEval::True)
      return SatVerdict::UNKNOWN;
  return SatVerdict::SAT;
}

// ---------------------------------------------------------------------------
// complete solver: NNF -> CNF (distribution under a budget, Tseitin as the
// fallback) -> DPLL with unit propagation.
// ---------------------------------------------------------------------------

namespace {

using Literal = int32_t; // var+1 signed; var 0 -> +1/-1
using Clause = std::vector<Literal>;

struct CnfBuilder {
  const GuardStore &gs;
  std::unordered_map<AtomId, int> varOf;
  int nextVar = 0;
  std::vector<Clause> clauses;
  size_t budget;

  explicit CnfBuilder(const GuardStore &gs, size_t budget)
      : gs(gs), budget(budget) {}

  int varFor(AtomId a) {
    auto it = varOf.find(a);
    if (it != varOf.end())
      return it->second;
    int v = nextVar++;
    varOf.emplace(a, v);
    return v;
  }

  Literal litOf(AtomId a, bool pos) {
    int v = varFor(a);
    return pos ? v + 1 : -(v + 1);
  }

  // Distribution-based CNF of a subformula. Empty optional on budget blow.
  std::optional<std::vector<Clause>> distribute(GuardId g) {
    const GuardNode &n = gs.node(g);
    switch (n.kind) {
    case GuardKind::True:
      return std::vector<Clause>{};
    case GuardKind::False:
      return std::vector<Clause>{Clause{}};
    case GuardKind::Lit:
      return std::vector<Clause>{Clause{litOf(n.atom, n.positive)}};
    case GuardKind::And: {
      std::vector<Clause> all;
      for (GuardId c : n.children) {
        auto sub = distribute(c);
        if (!sub)
          return std::nullopt;
        for (auto &cl : *sub)
          all.push_back(std::move(cl));
        if (all.size() > budget)
          return std::nullopt;
      }
      return all;
    }
    case GuardKind::Or: {
      std::vector<Clause> acc{Clause{}};
      for (GuardId c : n.children) {
        auto sub = distribute(c);
        if (!sub)
          return std::nullopt;
        std::vector<Clause> next;
        for (const auto &a : acc)
          for (const auto &b : *sub) {
            Clause merged = a;
            merged.insert(merged.end(), b.begin(), b.end());
            next.push_back(std::move(merged));
            if (next.size() > budget)
              return std::nullopt;
          }
        acc = std::move(next);
      }
      return acc;
    }
    }
    return std::nullopt;
  }

  // Tseitin encoding; returns the literal naming g.
  Literal tseitin(GuardId g) {
    const GuardNode &n = gs.node(g);
    switch (n.kind) {
    case GuardKind::True: {
      int v = nextVar++;
      clauses.push_back({v + 1});
      return v + 1;
    }
    case GuardKind::False: {
      int v = nextVar++;
      clauses.push_back({-(v + 1)});
      return v + 1;
    }
    case GuardKind::Lit:
      return litOf(n.atom, n.positive);
    case GuardKind::And: {
      std::vector<Literal> subs;
      for (GuardId c : n.children)
        subs.push_back(tseitin(c));
      int v = nextVar++;
      Literal me = v + 1;
      Clause big{me};
      for (Literal s : subs) {
        clauses.push_back({-me, s});
        big.push_back(-s);
      }
      clauses.push_back(std::move(big));
      return me;
    }
    case GuardKind::Or: {
      std::vector<Literal> subs;
      for (GuardId c : n.children)
        subs.push_back(tseitin(c));
      int v = nextVar++;
      Literal me = v + 1;
      Clause big{-me};
      for (Literal s : subs) {
        clauses.push_back({me, -s});
        big.push_back(s);
      }
      clauses.push_back(std::move(big));
      return me;
    }
    }
    return 0;
  }
};

enum class Tri : int8_t { Unset = -1, False = 0, True = 1 };

bool dpll(std::vector<Clause> &clauses, std::vector<Tri> &assign,
          uint64_t &decisionsLeft) {
  // unit propagation to fixpoint
  std::vector<std::pair<int, Tri>> trail;
  auto setVar = [&](int var, Tri val) { assign[var] = val; trail.push_back({var, val}); };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Clause &cl : clauses) {
      int unassigned = 0;
      Literal unit = 0;
      bool satisfied = false;
      for (Literal l : cl) {
        int var = std::abs(l) - 1;
        Tri v = assign[var];
        if (v == Tri::Unset) {
          ++unassigned;
          unit = l;
        } else if ((v == Tri::True) == (l > 0)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied)
        continue;
      if (unassigned == 0) { // conflict
        for (auto &[var, _] : trail)
          assign[var] = Tri::Unset;
        return false;
      }
      if (unassigned == 1) {
        setVar(std::abs(unit) - 1, unit > 0 ? Tri::True : Tri::False);
        changed = true;
      }
    }
  }
  int branchVar = -1;
  for (size_t i = 0; i < assign.size(); ++i)
    if (assign[i] == Tri::Unset) {
      branchVar = static_cast<int>(i);
      break;
    }
  if (branchVar < 0)
    return true; // all assigned, no conflict: satisfying assignment
  if (decisionsLeft-- == 0)
    throw SolverOverflow("full_sat decision budget exceeded");
  for (Tri v : {Tri::True, Tri::False}) {
    assign[branchVar] = v;
    if (dpll(clauses, assign, decisionsLeft))
      return true;
    assign[branchVar] = Tri::Unset;
  }
  for (auto &[var, _] : trail)
    assign[var] = Tri::Unset;
  return false;
}

} // namespace

SatVerdict GuardStore::fullSat(GuardId g) const {
  if (g == kTrue)
    return SatVerdict::SAT;
  if (g == kFalse)
    return SatVerdict::UNSAT;
  auto atoms = atomsOf(g);
  if (atoms.size() > limits.maxAtoms)
    throw SolverOverflow("full_sat atom limit exceeded: " +
                         std::to_string(atoms.size()));
  CnfBuilder builder(*this, limits.cnfBudget);
  auto direct = builder.distribute(g);
  std::vector<Clause> clauses;
  if (direct) {
    clauses = std::move(*direct);
  } else {
    Literal root = builder.tseitin(g);
    builder.clauses.push_back({root});
    clauses = std::move(builder.clauses);
  }
  std::vector<Tri> assign(builder.nextVar, Tri::Unset);
  uint64_t budget = limits.maxDecisions;
  return dpll(clauses, assign, budget) ? SatVerdict::SAT : SatVerdict::UNSAT;
}

bool GuardStore::equivalent(GuardId a, GuardId b) const {
  if (a == b)
    return true;
  GuardStore &self = const_cast<GuardStore &>(*this);
  GuardId na = self.negate(a), nb = self.negate(b);
  GuardId l[2] = {a, nb}, r[2] = {na, b};
  GuardId diff[2] = {self.conjRaw(l), self.conjRaw(r)};
  return fullSat(self.disjRaw(diff)) == SatVerdict::UNSAT;
}

bool GuardStore::implies(GuardId a, GuardId b) const {
  GuardStore &self = const_cast<GuardStore &>(*this);
  GuardId l[2] = {a, self.negate(b)};
  return fullSat(self.conjRaw(l)) == SatVerdict::UNSAT;
}

bool GuardStore::isValid(GuardId g) const {
  GuardStore &self = const_cast<GuardStore &>(*this);
  return fullSat(self.negate(g)) == SatVerdict::UNSAT;
}

bool GuardStore::eval(GuardId g, const std::vector<bool> &assignment) const {
  const GuardNode &n = node(g);
  switch (n.kind) {
  case GuardKind::True:
    return true;
  case GuardKind::False:
    return false;
  case GuardKind::Lit:
    return assignment.at(n.atom) == n.positive;
  case GuardKind::And:
    for (GuardId c : n.children)
      if (!eval(c, assignment))
        return false;
    return true;
  case GuardKind::Or:
    for (GuardId c : n.children)
      if (eval(c, assignment))
        return true;
    return false;
  }
  return false;
}

std::vector<AtomId> GuardStore::atomsOf(GuardId g) const {
  std::set<AtomId> acc;
  std::vector<GuardId> stack{g};
  std::set<GuardId> seen;
  while (!stack.empty()) {
    GuardId cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second)
      continue;
    const GuardNode &n = node(cur);
    if (n.kind == GuardKind::Lit)
      acc.insert(n.atom);
    for (GuardId c : n.children)
      stack.push_back(c);
  }
  return {acc.begin(), acc.end()};
}

std::string GuardStore::text(GuardId g) const {
  const GuardNode &n = node(g);
  switch (n.kind) {
  case GuardKind::True:
    return "true";
  case GuardKind::False:
    return "false";
  case GuardKind::Lit:
    return (n.positive ? "p" : "!p") + std::to_string(n.atom);
  case GuardKind::And:
  case GuardKind::Or: {
    std::string s = n.kind == GuardKind::And ? "(&" : "(|";
    for (GuardId c : n.children) {
      s += ' ';
      s += text(c);
    }
    s += ')';
    return s;
  }
  }
  return "?";
}

} // namespace gvf
