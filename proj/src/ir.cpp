#include "gvf/ir.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "gvf/diag.hpp"

namespace gvf {

std::string normalizeCond(const std::string &s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c)))
      out += c;
  return out;
}

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

namespace {

enum class Tok : uint8_t {
  Ident,
  Int,
  Punct, // single char: ( ) { } [ ] : , = &
  Cmp,   // == != < <= > >=
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

struct Lexer {
  const std::string &src;
  size_t pos = 0;
  int line = 1, col = 1;
  std::vector<Token> tokens;

  explicit Lexer(const std::string &s) : src(s) { run(); }

  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void run() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') { // comment to end of line
        while (pos < src.size() && src[pos] != '\n')
          advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      int l = line, co = col;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
          c == '.' || c == '%') {
        std::string t;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                src[pos] == '_' || src[pos] == '.' || src[pos] == '%')) {
          t += src[pos];
          advance();
        }
        tokens.push_back({Tok::Ident, t, l, co});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '-' && pos + 1 < src.size() &&
           std::isdigit(static_cast<unsigned char>(src[pos + 1])))) {
        std::string t;
        if (c == '-') {
          t += c;
          advance();
        }
        while (pos < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[pos]))) {
          t += src[pos];
          advance();
        }
        tokens.push_back({Tok::Int, t, l, co});
        continue;
      }
      auto two = [&](const char *op) {
        return pos + 1 < src.size() && src[pos] == op[0] && src[pos + 1] == op[1];
      };
      if (two("==") || two("!=") || two("<=") || two(">=")) {
        std::string t = src.substr(pos, 2);
        advance();
        advance();
        tokens.push_back({Tok::Cmp, t, l, co});
        continue;
      }
      if (c == '<' || c == '>') {
        advance();
        tokens.push_back({Tok::Cmp, std::string(1, c), l, co});
        continue;
      }
      if (std::string("(){}[]:,=&").find(c) != std::string::npos) {
        advance();
        tokens.push_back({Tok::Punct, std::string(1, c), l, co});
        continue;
      }
      throw ParseError(l, co, std::string("unexpected character '") + c + "'");
    }
    tokens.push_back({Tok::End, "", line, col});
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t at = 0;

  explicit Parser(const std::string &src) : toks(Lexer(src).tokens) {}

  const Token &peek(size_t ahead = 0) const {
    size_t i = std::min(at + ahead, toks.size() - 1);
    return toks[i];
  }
  Token next() { return toks[std::min(at++, toks.size() - 1)]; }
  bool atPunct(const char *p, size_t ahead = 0) const {
    const Token &t = peek(ahead);
    return t.kind == Tok::Punct && t.text == p;
  }
  [[noreturn]] void fail(const std::string &msg) const {
    const Token &t = peek();
    throw ParseError(t.line, t.col, msg + " (got '" + t.text + "')");
  }
  Token expectPunct(const char *p) {
    if (!atPunct(p))
      fail(std::string("expected '") + p + "'");
    return next();
  }
  Token expectIdent(const char *what) {
    if (peek().kind != Tok::Ident)
      fail(std::string("expected ") + what);
    return next();
  }

  Label nextLabel = 1;

  ast::Module parseModule() {
    ast::Module m;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Ident && peek().text == "func") {
        m.functions.push_back(parseFunction());
      } else {
        fail("expected 'func'");
      }
    }
    m.maxLabel = nextLabel - 1;
    return m;
  }

  ast::Function parseFunction() {
    next(); // func
    ast::Function f;
    f.name = expectIdent("function name").text;
    expectPunct("(");
    while (!atPunct(")")) {
      f.params.push_back(expectIdent("parameter name").text);
      if (atPunct(","))
        next();
      else if (!atPunct(")"))
        fail("expected ',' or ')'");
    }
    next(); // )
    expectPunct("{");
    while (!atPunct("}")) {
      f.blocks.push_back(parseBlock());
    }
    next(); // }
    if (f.blocks.empty())
      fail("function body must contain at least one block");
    return f;
  }

  bool atBlockLabel() const {
    return peek().kind == Tok::Ident && atPunct(":", 1);
  }

  ast::Block parseBlock() {
    if (!atBlockLabel())
      fail("expected block label");
    ast::Block b;
    b.name = next().text;
    next(); // :
    while (true) {
      if (atPunct("}") || atBlockLabel()) {
        if (!b.hasTerm)
          fail("block '" + b.name + "' missing terminator");
        return b;
      }
      if (b.hasTerm)
        fail("statement after terminator in block '" + b.name + "'");
      parseItem(b);
    }
  }

  std::string parseCond() {
    // identifier, or binary comparison over identifiers/integers
    std::string s;
    const Token &t = peek();
    if (t.kind != Tok::Ident && t.kind != Tok::Int)
      fail("expected condition");
    s += next().text;
    if (peek().kind == Tok::Cmp) {
      s += next().text;
      const Token &rhs = peek();
      if (rhs.kind != Tok::Ident && rhs.kind != Tok::Int)
        fail("expected comparison operand");
      s += next().text;
    }
    return normalizeCond(s);
  }

  void parseItem(ast::Block &b) {
    const Token &t = peek();
    if (t.kind != Tok::Ident)
      fail("expected statement");
    const std::string &kw = t.text;
    if (kw == "br") {
      next();
      ast::Terminator term;
      term.kind = ast::TermKind::Branch;
      expectPunct("(");
      term.cond = parseCond();
      expectPunct(")");
      term.thenBlock = expectIdent("branch target").text;
      term.elseBlock = expectIdent("branch target").text;
      b.term = term;
      b.hasTerm = true;
      return;
    }
    if (kw == "jmp") {
      next();
      ast::Terminator term;
      term.kind = ast::TermKind::Jump;
      term.thenBlock = expectIdent("jump target").text;
      b.term = term;
      b.hasTerm = true;
      return;
    }
    if (kw == "ret") {
      next();
      ast::Terminator term;
      term.kind = ast::TermKind::Ret;
      // `ret x` unless the next ident is a block label or '}' follows
      if (peek().kind == Tok::Ident && !atPunct(":", 1))
        term.retValue = next().text;
      b.term = term;
      b.hasTerm = true;
      return;
    }
    if (kw == "while") {
      next();
      expectPunct("(");
      ast::While w;
      w.cond = parseCond();
      expectPunct(")");
      expectPunct("{");
      while (!atPunct("}")) {
        parseWhileItem(w.body);
      }
      next(); // }
      b.items.push_back(std::move(w));
      return;
    }
    b.items.push_back(parseSimpleStmt());
  }

  void parseWhileItem(std::vector<ast::Item> &body) {
    const Token &t = peek();
    if (t.kind != Tok::Ident)
      fail("expected statement in while body");
    const std::string &kw = t.text;
    if (kw == "br" || kw == "jmp" || kw == "ret")
      fail("terminators are not allowed inside a while body");
    if (atBlockLabel())
      fail("block labels are not allowed inside a while body");
    if (kw == "while") {
      next();
      expectPunct("(");
      ast::While w;
      w.cond = parseCond();
      expectPunct(")");
      expectPunct("{");
      while (!atPunct("}"))
        parseWhileItem(w.body);
      next();
      body.push_back(std::move(w));
      return;
    }
    ast::Stmt s = parseSimpleStmt();
    if (s.kind == ast::StmtKind::Phi) {
      const Token &bad = peek();
      throw ParseError(bad.line, bad.col, "phi is not allowed inside a while body");
    }
    body.push_back(std::move(s));
  }

  ast::Stmt parseSimpleStmt() {
    ast::Stmt s;
    const Token &t = peek();
    if (t.text == "store") {
      next();
      s.kind = ast::StmtKind::Store;
      s.a = expectIdent("pointer operand").text;
      expectPunct(",");
      s.b = expectIdent("stored value").text;
      s.label = nextLabel++;
      return s;
    }
    if (t.text == "free") {
      next();
      s.kind = ast::StmtKind::Free;
      s.a = expectIdent("freed pointer").text;
      s.label = nextLabel++;
      return s;
    }
    // x = <rhs>
    s.target = expectIdent("statement").text;
    expectPunct("=");
    const Token &r = peek();
    if (r.kind != Tok::Ident) {
      if (atPunct("&")) {
        next();
        s.kind = ast::StmtKind::AddressOf;
        s.a = expectIdent("cell name").text;
        s.label = nextLabel++;
        return s;
      }
      fail("expected statement right-hand side");
    }
    const std::string rhs = r.text;
    if (rhs == "alloc") {
      next();
      s.kind = ast::StmtKind::Alloc;
    } else if (rhs == "havoc") {
      next();
      s.kind = ast::StmtKind::Havoc;
    } else if (rhs == "load") {
      next();
      s.kind = ast::StmtKind::Load;
      s.a = expectIdent("loaded pointer").text;
    } else if (rhs == "phi") {
      next();
      s.kind = ast::StmtKind::Phi;
      while (atPunct("[")) {
        next();
        ast::PhiArm arm;
        arm.pred = expectIdent("phi predecessor block").text;
        expectPunct(":");
        arm.value = expectIdent("phi value").text;
        expectPunct("]");
        s.arms.push_back(arm);
      }
      if (s.arms.empty())
        fail("phi requires at least one arm");
    } else if (rhs == "call") {
      next();
      s.kind = ast::StmtKind::Call;
      s.callee = expectIdent("callee").text;
      expectPunct("(");
      while (!atPunct(")")) {
        s.args.push_back(expectIdent("call argument").text);
        if (atPunct(","))
          next();
        else if (!atPunct(")"))
          fail("expected ',' or ')'");
      }
      next();
    } else {
      next();
      s.kind = ast::StmtKind::Copy;
      s.a = rhs;
    }
    s.label = nextLabel++;
    return s;
  }
};

} // namespace

namespace {

// Values defined inside a while body are per-iteration: visible after their
// definition within the same body, invisible outside. Enforced here so the
// unroller's per-replica renaming is always meaningful.
struct ScopeChecker {
  const ast::Function &f;
  std::map<std::string, std::vector<int>> defScope; // name -> while path
  std::map<std::string, int> defPos;
  int pos = 0;

  void collect(const std::vector<ast::Item> &items, std::vector<int> path,
               int &whileCounter) {
    for (const auto &item : items) {
      ++pos;
      if (std::holds_alternative<ast::Stmt>(item)) {
        const auto &s = std::get<ast::Stmt>(item);
        if (!s.target.empty()) {
          defScope[s.target] = path;
          defPos[s.target] = pos;
        }
      } else {
        auto sub = path;
        sub.push_back(++whileCounter);
        collect(std::get<ast::While>(item).body, sub, whileCounter);
      }
    }
  }

  void checkUse(const std::string &name, const std::vector<int> &path,
                int usePos) const {
    auto it = defScope.find(name);
    if (it == defScope.end())
      return; // parameters / undefined names are handled at lowering
    const auto &dp = it->second;
    if (dp.empty())
      return;
    bool prefix = dp.size() <= path.size() &&
                  std::equal(dp.begin(), dp.end(), path.begin());
    if (!prefix)
      throw SemanticError("value '" + name + "' defined in a while body is used outside it in '" +
                          f.name + "'");
    if (usePos < defPos.at(name))
      throw SemanticError("value '" + name +
                          "' is used before its definition within a while body in '" +
                          f.name + "' (loop-carried values are not expressible)");
  }

  void checkUses(const std::vector<ast::Item> &items, std::vector<int> path,
                 int &whileCounter, int &scanPos) const {
    for (const auto &item : items) {
      ++scanPos;
      if (std::holds_alternative<ast::Stmt>(item)) {
        const auto &s = std::get<ast::Stmt>(item);
        if (s.kind != ast::StmtKind::AddressOf && !s.a.empty())
          checkUse(s.a, path, scanPos); // AddressOf's operand is a cell name
        if (!s.b.empty())
          checkUse(s.b, path, scanPos);
        for (const auto &arm : s.arms)
          checkUse(arm.value, path, scanPos);
        for (const auto &a : s.args)
          checkUse(a, path, scanPos);
      } else {
        auto sub = path;
        sub.push_back(++whileCounter);
        checkUses(std::get<ast::While>(item).body, sub, whileCounter, scanPos);
      }
    }
  }

  void run() {
    int wc = 0;
    for (const auto &b : f.blocks)
      collect(b.items, {}, wc);
    wc = 0;
    int scan = 0;
    for (const auto &b : f.blocks) {
      checkUses(b.items, {}, wc, scan);
      if (b.term.kind == ast::TermKind::Ret && b.term.retValue)
        checkUse(*b.term.retValue, {}, scan + 1);
    }
  }
};

} // namespace

ast::Module parseModule(const std::string &text) {
  Parser p(text);
  ast::Module m = p.parseModule();
  for (const auto &f : m.functions)
    ScopeChecker{f, {}, {}, 0}.run();
  return m;
}

// ---------------------------------------------------------------------------
// Printer (canonical form; the round-trip anchor)
// ---------------------------------------------------------------------------

namespace {

void printItem(std::ostringstream &os, const ast::Item &item, int indent) {
  std::string pad(indent, ' ');
  if (std::holds_alternative<ast::While>(item)) {
    const auto &w = std::get<ast::While>(item);
    os << pad << "while (" << w.cond << ") {\n";
    for (const auto &sub : w.body)
      printItem(os, sub, indent + 2);
    os << pad << "}\n";
    return;
  }
  const auto &s = std::get<ast::Stmt>(item);
  os << pad;
  switch (s.kind) {
  case ast::StmtKind::Alloc:
    os << s.target << " = alloc";
    break;
  case ast::StmtKind::AddressOf:
    os << s.target << " = &" << s.a;
    break;
  case ast::StmtKind::Copy:
    os << s.target << " = " << s.a;
    break;
  case ast::StmtKind::Phi:
    os << s.target << " = phi";
    for (const auto &arm : s.arms)
      os << " [" << arm.pred << ": " << arm.value << "]";
    break;
  case ast::StmtKind::Load:
    os << s.target << " = load " << s.a;
    break;
  case ast::StmtKind::Store:
    os << "store " << s.a << ", " << s.b;
    break;
  case ast::StmtKind::Call: {
    os << s.target << " = call " << s.callee << "(";
    for (size_t i = 0; i < s.args.size(); ++i)
      os << (i ? ", " : "") << s.args[i];
    os << ")";
    break;
  }
  case ast::StmtKind::Free:
    os << "free " << s.a;
    break;
  case ast::StmtKind::Havoc:
    os << s.target << " = havoc";
    break;
  }
  os << "\n";
}

} // namespace

std::string printModule(const ast::Module &m) {
  std::ostringstream os;
  for (const auto &f : m.functions) {
    os << "func " << f.name << "(";
    for (size_t i = 0; i < f.params.size(); ++i)
      os << (i ? ", " : "") << f.params[i];
    os << ") {\n";
    for (const auto &b : f.blocks) {
      os << b.name << ":\n";
      for (const auto &item : b.items)
        printItem(os, item, 2);
      os << "  ";
      switch (b.term.kind) {
      case ast::TermKind::Branch:
        os << "br (" << b.term.cond << ") " << b.term.thenBlock << " "
           << b.term.elseBlock;
        break;
      case ast::TermKind::Jump:
        os << "jmp " << b.term.thenBlock;
        break;
      case ast::TermKind::Ret:
        os << "ret";
        if (b.term.retValue)
          os << " " << *b.term.retValue;
        break;
      }
      os << "\n";
    }
    os << "}\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Lowering + validation
// ---------------------------------------------------------------------------

namespace {

// Defined names of an item list, recursing into while bodies.
void collectDefs(const std::vector<ast::Item> &items,
                 std::vector<std::string> &out) {
  for (const auto &item : items) {
    if (std::holds_alternative<ast::Stmt>(item)) {
      const auto &s = std::get<ast::Stmt>(item);
      if (!s.target.empty())
        out.push_back(s.target);
    } else {
      collectDefs(std::get<ast::While>(item).body, out);
    }
  }
}

struct FunctionLowerer {
  Program &p;
  Function &f;
  std::map<std::string, BlockId> blockByName;

  ValueId useValue(const std::string &name, const char *what) {
    ValueId id = p.findValue(f.id, name);
    if (!id)
      throw SemanticError(std::string("use of undefined value '") + name +
                          "' as " + what + " in function '" + f.name + "'");
    return id;
  }
};

} // namespace

ValueId Program::findValue(FuncId f, const std::string &name) const {
  auto it = valueByName_.find({f, name});
  return it == valueByName_.end() ? 0 : it->second;
}

ValueId Program::defineValue(FuncId f, const std::string &name, Label def,
                             bool isParam) {
  auto key = std::make_pair(f, name);
  if (valueByName_.count(key))
    throw SemanticError("duplicate definition of '" + name +
                        "' in function '" + functions[f].name + "'");
  ValueId id = static_cast<ValueId>(values.size());
  values.push_back({name, f, def, isParam, false});
  valueByName_.emplace(key, id);
  return id;
}

ValueId Program::addAuxValue(FuncId f, const std::string &name, Label def) {
  std::lock_guard<std::mutex> lock(*mu_);
  ValueId id = static_cast<ValueId>(values.size());
  values.push_back({name, f, def, false, true});
  valueByName_.emplace(std::make_pair(f, name), id);
  return id;
}

Label Program::addLabel(LabelKind kind, FuncId f, Label origin) {
  std::lock_guard<std::mutex> lock(*mu_);
  Label l = static_cast<Label>(labels.size());
  labels.push_back({kind, f, origin});
  return l;
}

bool Program::isLoopFree() const { return true; }

Program buildProgram(const ast::Module &m, std::shared_ptr<GuardStore> guards) {
  Program p;
  p.guards = std::move(guards);
  p.values.push_back({}); // reserve id 0
  p.labels.resize(m.maxLabel + 1);

  // register functions first so call targets resolve forward
  for (const auto &af : m.functions) {
    if (p.functionByName.count(af.name))
      throw SemanticError("duplicate function '" + af.name + "'");
    FuncId id = static_cast<FuncId>(p.functions.size());
    p.functionByName.emplace(af.name, id);
    p.functions.push_back({});
    p.functions.back().name = af.name;
    p.functions.back().id = id;
  }

  for (const auto &af : m.functions) {
    Function &f = p.functions[p.functionByName.at(af.name)];
    FunctionLowerer lower{p, f, {}};

    for (const auto &b : af.blocks) {
      if (lower.blockByName.count(b.name))
        throw SemanticError("duplicate block '" + b.name + "' in '" + f.name +
                            "'");
      BlockId id = static_cast<BlockId>(f.blocks.size());
      lower.blockByName.emplace(b.name, id);
      f.blocks.push_back({});
      f.blocks.back().name = b.name;
      f.blocks.back().id = id;
    }

    for (const auto &pn : af.params) {
      Label pl = p.addLabel(LabelKind::Param, f.id);
      f.params.push_back(p.defineValue(f.id, pn, pl, true));
    }

    // first pass: register all statement-defined values, flag while items
    int retCount = 0;
    for (const auto &ab : af.blocks) {
      for (const auto &item : ab.items) {
        if (std::holds_alternative<ast::While>(item))
          throw SemanticError("loops must be unrolled before lowering (in '" +
                              f.name + "')");
        const auto &s = std::get<ast::Stmt>(item);
        if (static_cast<size_t>(s.label) >= p.labels.size())
          p.labels.resize(s.label + 1);
        if (p.labels[s.label].kind != LabelKind::None)
          throw SemanticError("duplicate statement label in '" + f.name + "'");
        p.labels[s.label] = {LabelKind::Stmt, f.id,
                             s.origin == s.label ? 0 : s.origin};
        if (!s.target.empty())
          p.defineValue(f.id, s.target, s.label, false);
      }
      if (ab.term.kind == ast::TermKind::Ret)
        ++retCount;
    }
    if (retCount == 0)
      throw SemanticError("function '" + f.name + "' missing return");
    if (retCount > 1)
      throw SemanticError("function '" + f.name +
                          "' has more than one return statement");

    // second pass: lower statements and terminators
    for (size_t bi = 0; bi < af.blocks.size(); ++bi) {
      const auto &ab = af.blocks[bi];
      BasicBlock &bb = f.blocks[bi];
      for (const auto &item : ab.items) {
        const auto &s = std::get<ast::Stmt>(item);
        Statement st;
        st.label = s.label;
        st.origin = s.origin ? s.origin : s.label;
        st.inLoopReplica = s.inLoopReplica;
        switch (s.kind) {
        case ast::StmtKind::Alloc:
          st.kind = StmtKind::Alloc;
          st.target = p.findValue(f.id, s.target);
          break;
        case ast::StmtKind::AddressOf: {
          st.kind = StmtKind::AddressOf;
          st.target = p.findValue(f.id, s.target);
          // the operand is a storage cell name, a namespace of its own;
          // it must not collide with an SSA value
          if (p.findValue(f.id, s.a))
            throw SemanticError("'&" + s.a +
                                "' takes the address of an SSA value in '" +
                                f.name + "'");
          st.cellName = s.a;
          break;
        }
        case ast::StmtKind::Copy:
          st.kind = StmtKind::Copy;
          st.target = p.findValue(f.id, s.target);
          st.a = lower.useValue(s.a, "copy source");
          break;
        case ast::StmtKind::Phi: {
          st.kind = StmtKind::Phi;
          st.target = p.findValue(f.id, s.target);
          for (const auto &arm : s.arms) {
            auto it = lower.blockByName.find(arm.pred);
            if (it == lower.blockByName.end())
              throw SemanticError("phi arm references unknown block '" +
                                  arm.pred + "' in '" + f.name + "'");
            st.arms.push_back({it->second, lower.useValue(arm.value, "phi value"),
                               GuardStore::kTrue});
          }
          break;
        }
        case ast::StmtKind::Load:
          st.kind = StmtKind::Load;
          st.target = p.findValue(f.id, s.target);
          st.a = lower.useValue(s.a, "load pointer");
          break;
        case ast::StmtKind::Store:
          st.kind = StmtKind::Store;
          st.a = lower.useValue(s.a, "store pointer");
          st.b = lower.useValue(s.b, "stored value");
          break;
        case ast::StmtKind::Call: {
          st.kind = StmtKind::Call;
          st.target = p.findValue(f.id, s.target);
          auto it = p.functionByName.find(s.callee);
          if (it == p.functionByName.end())
            throw SemanticError("unknown call target '" + s.callee + "' in '" +
                                f.name + "'");
          st.callee = it->second;
          for (const auto &a : s.args)
            st.args.push_back(lower.useValue(a, "call argument"));
          break;
        }
        case ast::StmtKind::Free:
          st.kind = StmtKind::Free;
          st.a = lower.useValue(s.a, "freed pointer");
          break;
        case ast::StmtKind::Havoc:
          st.kind = StmtKind::Havoc;
          st.target = p.findValue(f.id, s.target);
          break;
        }
        bb.stmts.push_back(std::move(st));
      }

      Terminator term;
      term.label = p.addLabel(LabelKind::Term, f.id);
      switch (ab.term.kind) {
      case ast::TermKind::Branch: {
        term.kind = TermKind::Branch;
        term.condText = ab.term.cond;
        auto [atom, sign] = p.guards->internAtom(ab.term.cond);
        term.condLit = p.guards->lit(atom, sign);
        auto t1 = lower.blockByName.find(ab.term.thenBlock);
        auto t2 = lower.blockByName.find(ab.term.elseBlock);
        if (t1 == lower.blockByName.end() || t2 == lower.blockByName.end())
          throw SemanticError("branch to unknown block in '" + f.name + "'");
        term.thenBlock = t1->second;
        term.elseBlock = t2->second;
        break;
      }
      case ast::TermKind::Jump: {
        term.kind = TermKind::Jump;
        auto t1 = lower.blockByName.find(ab.term.thenBlock);
        if (t1 == lower.blockByName.end())
          throw SemanticError("jump to unknown block in '" + f.name + "'");
        term.thenBlock = t1->second;
        break;
      }
      case ast::TermKind::Ret: {
        term.kind = TermKind::Ret;
        if (ab.term.retValue)
          term.retValue = lower.useValue(*ab.term.retValue, "return value");
        f.retValue = term.retValue;
        f.retLabel = term.label;
        break;
      }
      }
      bb.term = term;
    }

    // edges
    for (auto &bb : f.blocks) {
      switch (bb.term.kind) {
      case TermKind::Branch:
        bb.succs = {bb.term.thenBlock, bb.term.elseBlock};
        break;
      case TermKind::Jump:
        bb.succs = {bb.term.thenBlock};
        break;
      case TermKind::Ret:
        break;
      }
      for (BlockId s : bb.succs)
        f.blocks[s].preds.push_back(bb.id);
    }
    if (!f.blocks[0].preds.empty())
      throw SemanticError("entry block of '" + f.name + "' has predecessors");

    // reject cyclic explicit control flow; loops must come from `while`
    std::vector<int> state(f.blocks.size(), 0);
    std::vector<std::pair<BlockId, size_t>> stack{{0, 0}};
    state[0] = 1;
    while (!stack.empty()) {
      auto &[b, i] = stack.back();
      if (i < f.blocks[b].succs.size()) {
        BlockId s = f.blocks[b].succs[i++];
        if (state[s] == 1)
          throw SemanticError("cyclic control flow in '" + f.name +
                              "'; use while for loops");
        if (state[s] == 0) {
          state[s] = 1;
          stack.push_back({s, 0});
        }
      } else {
        state[b] = 2;
        stack.pop_back();
      }
    }

    // phi arms must match predecessors exactly
    for (const auto &bb : f.blocks) {
      for (const auto &st : bb.stmts) {
        if (st.kind != StmtKind::Phi)
          continue;
        std::set<BlockId> armPreds;
        for (const auto &arm : st.arms) {
          if (!armPreds.insert(arm.pred).second)
            throw SemanticError("phi has duplicate arm for a predecessor in '" +
                                f.name + "'");
          if (std::find(bb.preds.begin(), bb.preds.end(), arm.pred) ==
              bb.preds.end())
            throw SemanticError("phi arm block is not a predecessor in '" +
                                f.name + "'");
        }
        if (armPreds.size() != bb.preds.size())
          throw SemanticError("phi does not cover all predecessors in '" +
                              f.name + "'");
      }
    }
  }

  return p;
}

Program parseProgram(const std::string &text) {
  return buildProgram(parseModule(text), std::make_shared<GuardStore>());
}

std::string printProgram(const Program &p) {
  // Reconstruct the surface form. Used for golden output and round-trips of
  // unrolled programs.
  std::ostringstream os;
  for (const auto &f : p.functions) {
    os << "func " << f.name << "(";
    for (size_t i = 0; i < f.params.size(); ++i)
      os << (i ? ", " : "") << p.value(f.params[i]).name;
    os << ") {\n";
    for (const auto &bb : f.blocks) {
      os << bb.name << ":\n";
      for (const auto &st : bb.stmts) {
        os << "  ";
        switch (st.kind) {
        case StmtKind::Alloc:
          os << p.value(st.target).name << " = alloc";
          break;
        case StmtKind::AddressOf:
          os << p.value(st.target).name << " = &" << st.cellName;
          break;
        case StmtKind::Copy:
          os << p.value(st.target).name << " = " << p.value(st.a).name;
          break;
        case StmtKind::Phi:
          os << p.value(st.target).name << " = phi";
          for (const auto &arm : st.arms)
            os << " [" << f.blocks[arm.pred].name << ": "
               << p.value(arm.value).name << "]";
          break;
        case StmtKind::Load:
          os << p.value(st.target).name << " = load " << p.value(st.a).name;
          break;
        case StmtKind::Store:
          os << "store " << p.value(st.a).name << ", " << p.value(st.b).name;
          break;
        case StmtKind::Call: {
          os << p.value(st.target).name << " = call "
             << p.functions[st.callee].name << "(";
          for (size_t i = 0; i < st.args.size(); ++i)
            os << (i ? ", " : "") << p.value(st.args[i]).name;
          os << ")";
          break;
        }
        case StmtKind::Free:
          os << "free " << p.value(st.a).name;
          break;
        case StmtKind::Havoc:
          os << p.value(st.target).name << " = havoc";
          break;
        }
        os << "\n";
      }
      os << "  ";
      switch (bb.term.kind) {
      case TermKind::Branch:
        os << "br (" << bb.term.condText << ") "
           << f.blocks[bb.term.thenBlock].name << " "
           << f.blocks[bb.term.elseBlock].name;
        break;
      case TermKind::Jump:
        os << "jmp " << f.blocks[bb.term.thenBlock].name;
        break;
      case TermKind::Ret:
        os << "ret";
        if (bb.term.retValue)
          os << " " << p.value(*bb.term.retValue).name;
        break;
      }
      os << "\n";
    }
    os << "}\n";
  }
  return os.str();
}

} // namespace gvf
