#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gvf/guard.hpp"

namespace gvf {

using Label = uint32_t; // 0 = invalid; statements are labeled l1..
using ValueId = uint32_t;
using FuncId = uint32_t;
using BlockId = uint32_t;

// --------------------------------------------------------------------------
// Surface AST. The parser produces this; loop/recursion unrolling rewrites
// it; program building lowers it to the analyzed form.
// --------------------------------------------------------------------------
namespace ast {

enum class StmtKind : uint8_t {
  Alloc,     // x = alloc
  AddressOf, // x = &cell
  Copy,      // x = y
  Phi,       // x = phi [bb: v] ...
  Load,      // x = load y
  Store,     // store x, v
  Call,      // r = call f(a, b)
  Free,      // free x
  Havoc,     // x = havoc   (produced by recursion unrolling)
};

struct PhiArm {
  std::string pred;
  std::string value;
};

struct Stmt;
struct While;
using Item = std::variant<Stmt, While>;

struct Stmt {
  StmtKind kind;
  Label label = 0;  // assigned in file order at parse time
  Label origin = 0; // original statement for unroll replicas
  bool inLoopReplica = false;
  std::string target;           // defined value (empty for Store/Free)
  std::string a, b;             // operands (Store: a=pointer, b=value)
  std::vector<PhiArm> arms;     // Phi
  std::string callee;           // Call
  std::vector<std::string> args;
};

struct While {
  std::string cond; // normalized condition text
  std::vector<Item> body;
};

enum class TermKind : uint8_t { Branch, Jump, Ret };

struct Terminator {
  TermKind kind = TermKind::Ret;
  std::string cond;     // Branch: normalized text
  std::string thenBlock, elseBlock;
  std::optional<std::string> retValue;
};

struct Block {
  std::string name;
  std::vector<Item> items;
  Terminator term;
  bool hasTerm = false;
};

struct Function {
  std::string name;
  std::vector<std::string> params;
  std::vector<Block> blocks;
};

struct Module {
  std::vector<Function> functions;
  Label maxLabel = 0;
};

} // namespace ast

// Parse the textual form. Statement labels l1.. are assigned in file order
// to non-terminator statements. Throws ParseError / SemanticError.
ast::Module parseModule(const std::string &text);

std::string printModule(const ast::Module &m);

// --------------------------------------------------------------------------
// Lowered program.
// --------------------------------------------------------------------------

struct Value {
  std::string name;
  FuncId func = 0;
  Label defLabel = 0;
  bool isParam = false;
  bool isAux = false; // analysis-introduced (R instances, formal contents)
};

enum class StmtKind : uint8_t {
  Alloc,
  AddressOf,
  Copy,
  Phi,
  Load,
  Store,
  Call,
  Free,
  Havoc,
};

struct PhiArm {
  BlockId pred = 0;
  ValueId value = 0;
  GuardId gate = GuardStore::kTrue; // filled by gatePhis
};

struct Statement {
  StmtKind kind;
  Label label = 0;
  Label origin = 0;
  bool inLoopReplica = false;
  ValueId target = 0;          // defined value (Store/Free: unused)
  ValueId a = 0, b = 0;        // operands
  std::string cellName;        // AddressOf: storage cell being taken
  std::vector<PhiArm> arms;    // Phi
  FuncId callee = 0;           // Call
  std::vector<ValueId> args;   // Call
};

enum class TermKind : uint8_t { Branch, Jump, Ret };

struct Terminator {
  TermKind kind = TermKind::Ret;
  Label label = 0; // synthetic
  GuardId condLit = GuardStore::kTrue; // Branch: literal of the branch atom
  std::string condText;
  BlockId thenBlock = 0, elseBlock = 0;
  std::optional<ValueId> retValue;
};

struct BasicBlock {
  std::string name;
  BlockId id = 0;
  std::vector<Statement> stmts;
  Terminator term;
  std::vector<BlockId> preds, succs;
};

struct Function {
  std::string name;
  FuncId id = 0;
  std::vector<ValueId> params;
  std::vector<BasicBlock> blocks; // entry is blocks[0]
  std::optional<ValueId> retValue;
  Label retLabel = 0; // label of the ret terminator (formal-out position)
};

enum class LabelKind : uint8_t { None, Stmt, Param, Term };

struct LabelInfo {
  LabelKind kind = LabelKind::None;
  FuncId func = 0;
  Label origin = 0;
};

// A validated program plus the shared guard store. Atom interning happens
// at build time (branch conditions), so atom ids are parse-deterministic.
struct Program {
  std::vector<Function> functions;
  std::map<std::string, FuncId> functionByName;
  std::deque<Value> values; // index 0 reserved; deque: stable refs under growth
  std::deque<LabelInfo> labels; // index 0 reserved
  std::shared_ptr<GuardStore> guards;
  std::vector<std::string> unrollWarnings;

  const Value &value(ValueId v) const { return values[v]; }
  Function &function(FuncId f) { return functions[f]; }
  const Function &function(FuncId f) const { return functions[f]; }

  ValueId findValue(FuncId f, const std::string &name) const;

  // Registers a program value; throws SemanticError on redefinition.
  ValueId defineValue(FuncId f, const std::string &name, Label def,
                      bool isParam);
  // Registers an analysis-introduced value (thread-safe).
  ValueId addAuxValue(FuncId f, const std::string &name, Label def);
  // Registers a synthetic label (thread-safe).
  Label addLabel(LabelKind kind, FuncId f, Label origin = 0);

  std::string labelText(Label l) const { return "l" + std::to_string(l); }
  Label originOf(Label l) const {
    Label o = labels[l].origin;
    return o ? o : l;
  }

  bool isLoopFree() const; // no While items survive (always true post-build)

private:
  std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
  std::map<std::pair<FuncId, std::string>, ValueId> valueByName_;
};

// Lower and validate an AST. SSA single-definition, unique labels, block
// structure, acyclic explicit control flow, known call targets, exactly one
// return per function. Throws SemanticError on violations.
Program buildProgram(const ast::Module &m, std::shared_ptr<GuardStore> guards);

// parse + build with a fresh guard store
Program parseProgram(const std::string &text);

std::string printProgram(const Program &p);

// Normalize a condition's text (strip whitespace). Used by parser and tests.
std::string normalizeCond(const std::string &s);

} // namespace gvf
