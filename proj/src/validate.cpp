#include <map>
#include <set>

#include "tmev/errors.hpp"
#include "tmev/parser.hpp"

namespace tmev::lang {

namespace {

// Expression categories after the int256/uint256 collapse: arithmetic
// values, truth values and addresses.  int/uint/bool interoperate in
// the usual truthy fashion; addresses only key mappings.
enum class Cat { Num, Boolish, Addr };

struct FnScope {
  const ContractIR* contract;
  const FunctionIR* fn;
  std::map<std::string, VarKind> locals;  // params + declared locals

  const VarKind* lookup(const std::string& n) const {
    auto it = locals.find(n);
    if (it != locals.end()) return &it->second;
    if (const StateVar* sv = contract->find_state_var(n)) return &sv->kind;
    return nullptr;
  }
};

[[noreturn]] void err(SrcLoc loc, const std::string& msg) {
  throw ValidationError(loc.line, loc.col, msg);
}

Cat cat_of_kind(VarKind k, SrcLoc loc, const std::string& name) {
  switch (k) {
    case VarKind::Int:
    case VarKind::Uint: return Cat::Num;
    case VarKind::Bool: return Cat::Boolish;
    case VarKind::Address: return Cat::Addr;
    case VarKind::MapAddressUint:
      err(loc, "mapping '" + name + "' used without an index");
  }
  err(loc, "unreachable");
}

Cat check_expr(const Expr& e, const FnScope& sc);

void check_key(const Expr& key, const FnScope& sc) {
  Cat c = check_expr(key, sc);
  if (c != Cat::Addr)
    err(key.loc, "mapping key must be an address expression");
}

Cat check_expr(const Expr& e, const FnScope& sc) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return Cat::Num;
    case Expr::Kind::BoolLit: return Cat::Boolish;
    case Expr::Kind::MsgSender: return Cat::Addr;
    case Expr::Kind::Ident: {
      const VarKind* k = sc.lookup(e.name);
      if (!k) err(e.loc, "undeclared identifier '" + e.name + "'");
      return cat_of_kind(*k, e.loc, e.name);
    }
    case Expr::Kind::Index: {
      const VarKind* k = sc.lookup(e.name);
      if (!k) err(e.loc, "undeclared identifier '" + e.name + "'");
      if (*k != VarKind::MapAddressUint)
        err(e.loc, "'" + e.name + "' is not a mapping");
      check_key(*e.lhs, sc);
      return Cat::Num;
    }
    case Expr::Kind::Unary: {
      Cat c = check_expr(*e.lhs, sc);
      if (c == Cat::Addr) err(e.loc, "address operand in '" + e.op + "'");
      if (e.op == "!") return Cat::Boolish;
      if (c != Cat::Num) err(e.loc, "negation needs a numeric operand");
      return Cat::Num;
    }
    case Expr::Kind::Binary: {
      Cat l = check_expr(*e.lhs, sc);
      Cat r = check_expr(*e.rhs, sc);
      if (l == Cat::Addr || r == Cat::Addr)
        err(e.loc, "address operand in '" + e.op + "'");
      if (e.op == "&&" || e.op == "||") return Cat::Boolish;
      if (e.op == "==" || e.op == "!=") return Cat::Boolish;
      if (e.op == "<" || e.op == "<=" || e.op == ">" || e.op == ">=") {
        if (l != Cat::Num || r != Cat::Num)
          err(e.loc, "comparison needs numeric operands");
        return Cat::Boolish;
      }
      if (l != Cat::Num || r != Cat::Num)
        err(e.loc, "'" + e.op + "' needs numeric operands");
      return Cat::Num;
    }
  }
  err(e.loc, "unreachable");
}

void check_cond(const Expr& e, const FnScope& sc) {
  Cat c = check_expr(e, sc);
  if (c == Cat::Addr) err(e.loc, "address value used as a condition");
}

void check_store(SrcLoc loc, VarKind target, Cat value, const std::string& name) {
  switch (target) {
    case VarKind::Int:
    case VarKind::Uint:
      if (value == Cat::Addr)
        err(loc, "cannot store an address in '" + name + "'");
      return;
    case VarKind::Bool:
      if (value != Cat::Boolish)
        err(loc, "'" + name + "' takes a boolean value");
      return;
    case VarKind::Address:
      err(loc, "address parameter '" + name + "' is read-only");
    case VarKind::MapAddressUint:
      return;  // handled by caller via key path
  }
}

void check_body(const std::vector<Stmt>& body, FnScope& sc);

void check_stmt(const Stmt& s, FnScope& sc) {
  switch (s.kind) {
    case Stmt::Kind::LocalDecl: {
      Cat v = check_expr(*s.expr, sc);
      if (sc.locals.count(s.name) || sc.contract->find_state_var(s.name))
        err(s.loc, "redeclaration of '" + s.name + "'");
      check_store(s.loc, s.decl_kind, v, s.name);
      sc.locals.emplace(s.name, s.decl_kind);
      return;
    }
    case Stmt::Kind::Assign:
    case Stmt::Kind::CompoundAssign: {
      const VarKind* k = sc.lookup(s.lhs.name);
      if (!k) err(s.lhs.loc, "undeclared identifier '" + s.lhs.name + "'");
      Cat v = check_expr(*s.expr, sc);
      if (s.lhs.is_mapping_access()) {
        if (*k != VarKind::MapAddressUint)
          err(s.lhs.loc, "'" + s.lhs.name + "' is not a mapping");
        check_key(*s.lhs.key, sc);
        if (v == Cat::Addr)
          err(s.loc, "cannot store an address in '" + s.lhs.name + "'");
      } else {
        if (*k == VarKind::MapAddressUint)
          err(s.lhs.loc, "mapping '" + s.lhs.name + "' needs an index");
        if (s.kind == Stmt::Kind::CompoundAssign) {
          if (*k == VarKind::Bool)
            err(s.loc, "compound assignment on a bool");
          if (v != Cat::Num)
            err(s.loc, "'" + s.op + "' needs a numeric right-hand side");
        } else {
          check_store(s.loc, *k, v, s.lhs.name);
        }
      }
      return;
    }
    case Stmt::Kind::If: {
      check_cond(*s.expr, sc);
      check_body(s.then_body, sc);
      check_body(s.else_body, sc);
      return;
    }
    case Stmt::Kind::While: {
      check_cond(*s.expr, sc);
      check_body(s.then_body, sc);
      return;
    }
    case Stmt::Kind::Return: {
      if (!sc.fn->returns)
        err(s.loc, "return in function '" + sc.fn->name +
                       "' which declares no return type");
      Cat v = check_expr(*s.expr, sc);
      check_store(s.loc, *sc.fn->returns, v, sc.fn->name + "()");
      return;
    }
  }
}

void check_body(const std::vector<Stmt>& body, FnScope& sc) {
  // locals are block-scoped to keep resolution lexical
  std::map<std::string, VarKind> saved = sc.locals;
  for (const auto& s : body) check_stmt(s, sc);
  sc.locals = std::move(saved);
}

bool all_paths_return(const std::vector<Stmt>& body) {
  for (const auto& s : body) {
    if (s.kind == Stmt::Kind::Return) return true;
    if (s.kind == Stmt::Kind::If && !s.else_body.empty() &&
        all_paths_return(s.then_body) && all_paths_return(s.else_body))
      return true;
  }
  return false;
}

void check_function(const ContractIR& c, const FunctionIR& f) {
  FnScope sc{&c, &f, {}};
  std::set<std::string> names;
  for (const auto& p : f.params) {
    if (!names.insert(p.name).second)
      err(p.loc, "duplicate parameter '" + p.name + "'");
    if (c.find_state_var(p.name))
      err(p.loc, "parameter '" + p.name + "' shadows a state variable");
    sc.locals.emplace(p.name, p.kind);
  }
  check_body(f.body, sc);
  if (f.returns && !all_paths_return(f.body))
    err(f.loc, "function '" + f.name + "' does not return on every path");
}

void check_contract(const ContractIR& c) {
  std::set<std::string> names;
  for (const auto& v : c.state_vars) {
    if (!names.insert(v.name).second)
      err(v.loc, "duplicate state variable '" + v.name + "'");
    if (v.has_init) {
      if (v.kind == VarKind::MapAddressUint)
        err(v.loc, "mapping '" + v.name + "' cannot have an initializer");
      if (v.kind == VarKind::Uint && v.init_int < 0)
        err(v.loc, "negative initializer for uint '" + v.name + "'");
    }
  }
  std::set<std::string> fns;
  for (const auto& f : c.functions) {
    if (!fns.insert(f.name).second)
      err(f.loc, "duplicate function '" + f.name + "'");
    if (names.count(f.name))
      err(f.loc, "function '" + f.name + "' shadows a state variable");
    check_function(c, f);
  }
}

}  // namespace

void validate(const SourceUnit& unit) {
  std::set<std::string> names;
  for (const auto& c : unit.contracts) {
    if (!names.insert(c.name).second)
      err(c.loc, "duplicate contract '" + c.name + "'");
    check_contract(c);
  }
}

}  // namespace tmev::lang
