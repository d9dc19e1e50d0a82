#include "tmev/ast.hpp"

namespace tmev::lang {

const char* kind_name(VarKind k) {
  switch (k) {
    case VarKind::Int: return "int";
    case VarKind::Uint: return "uint";
    case VarKind::Bool: return "bool";
    case VarKind::Address: return "address";
    case VarKind::MapAddressUint: return "mapping(address => uint)";
  }
  return "?";
}

ExprPtr make_int(Int v) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::IntLit;
  e->int_value = std::move(v);
  return e;
}

ExprPtr make_bool(bool v) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::BoolLit;
  e->bool_value = v;
  return e;
}

ExprPtr make_ident(std::string name) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::Ident;
  e->name = std::move(name);
  return e;
}

ExprPtr make_msg_sender() {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::MsgSender;
  return e;
}

ExprPtr make_index(std::string base, ExprPtr key) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::Index;
  e->name = std::move(base);
  e->lhs = std::move(key);
  return e;
}

ExprPtr make_unary(std::string op, ExprPtr inner) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::Unary;
  e->op = std::move(op);
  e->lhs = std::move(inner);
  return e;
}

ExprPtr make_binary(std::string op, ExprPtr l, ExprPtr r) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::Binary;
  e->op = std::move(op);
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

ExprPtr Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->loc = loc;
  e->int_value = int_value;
  e->bool_value = bool_value;
  e->name = name;
  e->op = op;
  if (lhs) e->lhs = lhs->clone();
  if (rhs) e->rhs = rhs->clone();
  return e;
}

bool Expr::equals(const Expr& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::IntLit: return int_value == o.int_value;
    case Kind::BoolLit: return bool_value == o.bool_value;
    case Kind::Ident: return name == o.name;
    case Kind::MsgSender: return true;
    case Kind::Index: return name == o.name && lhs->equals(*o.lhs);
    case Kind::Unary: return op == o.op && lhs->equals(*o.lhs);
    case Kind::Binary:
      return op == o.op && lhs->equals(*o.lhs) && rhs->equals(*o.rhs);
  }
  return false;
}

LValue LValue::clone() const {
  LValue v;
  v.name = name;
  v.loc = loc;
  if (key) v.key = key->clone();
  return v;
}

bool LValue::equals(const LValue& o) const {
  if (name != o.name) return false;
  if ((key == nullptr) != (o.key == nullptr)) return false;
  return key == nullptr || key->equals(*o.key);
}

Stmt Stmt::clone() const {
  Stmt s;
  s.kind = kind;
  s.loc = loc;
  s.decl_kind = decl_kind;
  s.name = name;
  s.lhs = lhs.clone();
  s.op = op;
  if (expr) s.expr = expr->clone();
  s.then_body.reserve(then_body.size());
  for (const auto& t : then_body) s.then_body.push_back(t.clone());
  s.else_body.reserve(else_body.size());
  for (const auto& t : else_body) s.else_body.push_back(t.clone());
  return s;
}

namespace {
bool bodies_equal(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!a[i].equals(b[i])) return false;
  return true;
}
}  // namespace

bool Stmt::equals(const Stmt& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::LocalDecl:
      return decl_kind == o.decl_kind && name == o.name &&
             expr->equals(*o.expr);
    case Kind::Assign:
      return lhs.equals(o.lhs) && expr->equals(*o.expr);
    case Kind::CompoundAssign:
      return lhs.equals(o.lhs) && op == o.op && expr->equals(*o.expr);
    case Kind::If:
      return expr->equals(*o.expr) && bodies_equal(then_body, o.then_body) &&
             bodies_equal(else_body, o.else_body);
    case Kind::While:
      return expr->equals(*o.expr) && bodies_equal(then_body, o.then_body);
    case Kind::Return:
      return expr->equals(*o.expr);
  }
  return false;
}

bool FunctionIR::equals(const FunctionIR& o) const {
  if (name != o.name || returns != o.returns || owner_only != o.owner_only)
    return false;
  if (params.size() != o.params.size()) return false;
  for (size_t i = 0; i < params.size(); ++i)
    if (params[i].name != o.params[i].name ||
        params[i].kind != o.params[i].kind)
      return false;
  return bodies_equal(body, o.body);
}

bool StateVar::equals(const StateVar& o) const {
  return name == o.name && kind == o.kind && has_init == o.has_init &&
         (!has_init ||
          (kind == VarKind::Bool ? init_bool == o.init_bool
                                 : init_int == o.init_int));
}

const FunctionIR* ContractIR::find_function(const std::string& n) const {
  for (const auto& f : functions)
    if (f.name == n) return &f;
  return nullptr;
}

const StateVar* ContractIR::find_state_var(const std::string& n) const {
  for (const auto& v : state_vars)
    if (v.name == n) return &v;
  return nullptr;
}

bool ContractIR::equals(const ContractIR& o) const {
  if (name != o.name || state_vars.size() != o.state_vars.size() ||
      functions.size() != o.functions.size())
    return false;
  for (size_t i = 0; i < state_vars.size(); ++i)
    if (!state_vars[i].equals(o.state_vars[i])) return false;
  for (size_t i = 0; i < functions.size(); ++i)
    if (!functions[i].equals(o.functions[i])) return false;
  return true;
}

bool SourceUnit::equals(const SourceUnit& o) const {
  if (contracts.size() != o.contracts.size()) return false;
  for (size_t i = 0; i < contracts.size(); ++i)
    if (!contracts[i].equals(o.contracts[i])) return false;
  return true;
}

}  // namespace tmev::lang
