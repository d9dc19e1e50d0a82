#include "tmev/pretty.hpp"

#include <sstream>

namespace tmev::lang {

namespace {

int precedence(const Expr& e) {
  if (e.kind == Expr::Kind::Unary) return 7;
  if (e.kind != Expr::Kind::Binary) return 8;
  const std::string& op = e.op;
  if (op == "*" || op == "/") return 6;
  if (op == "+" || op == "-") return 5;
  if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
  if (op == "==" || op == "!=") return 3;
  if (op == "&&") return 2;
  return 1;  // ||
}

void emit_expr(std::ostream& os, const Expr& e, int parent_prec) {
  int prec = precedence(e);
  bool paren = prec < parent_prec;
  if (paren) os << "(";
  switch (e.kind) {
    case Expr::Kind::IntLit: os << e.int_value.str(); break;
    case Expr::Kind::BoolLit: os << (e.bool_value ? "true" : "false"); break;
    case Expr::Kind::Ident: os << e.name; break;
    case Expr::Kind::MsgSender: os << "msg.sender"; break;
    case Expr::Kind::Index:
      os << e.name << "[";
      emit_expr(os, *e.lhs, 0);
      os << "]";
      break;
    case Expr::Kind::Unary:
      os << e.op;
      emit_expr(os, *e.lhs, prec + 1);
      break;
    case Expr::Kind::Binary:
      emit_expr(os, *e.lhs, prec);
      os << " " << e.op << " ";
      // left-associative: parenthesize equal-precedence right children
      emit_expr(os, *e.rhs, prec + 1);
      break;
  }
  if (paren) os << ")";
}

void emit_lvalue(std::ostream& os, const LValue& v) {
  os << v.name;
  if (v.key) {
    os << "[";
    emit_expr(os, *v.key, 0);
    os << "]";
  }
}

void emit_body(std::ostream& os, const std::vector<Stmt>& body, int indent);

void emit_stmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(indent * 2, ' ');
  os << pad;
  switch (s.kind) {
    case Stmt::Kind::LocalDecl:
      os << kind_name(s.decl_kind) << " " << s.name << " = ";
      emit_expr(os, *s.expr, 0);
      os << ";\n";
      break;
    case Stmt::Kind::Assign:
      emit_lvalue(os, s.lhs);
      os << " = ";
      emit_expr(os, *s.expr, 0);
      os << ";\n";
      break;
    case Stmt::Kind::CompoundAssign:
      emit_lvalue(os, s.lhs);
      os << " " << s.op << " ";
      emit_expr(os, *s.expr, 0);
      os << ";\n";
      break;
    case Stmt::Kind::If:
      os << "if (";
      emit_expr(os, *s.expr, 0);
      os << ") {\n";
      emit_body(os, s.then_body, indent + 1);
      os << pad << "}";
      if (!s.else_body.empty()) {
        os << " else {\n";
        emit_body(os, s.else_body, indent + 1);
        os << pad << "}";
      }
      os << "\n";
      break;
    case Stmt::Kind::While:
      os << "while (";
      emit_expr(os, *s.expr, 0);
      os << ") {\n";
      emit_body(os, s.then_body, indent + 1);
      os << pad << "}\n";
      break;
    case Stmt::Kind::Return:
      os << "return ";
      emit_expr(os, *s.expr, 0);
      os << ";\n";
      break;
  }
}

void emit_body(std::ostream& os, const std::vector<Stmt>& body, int indent) {
  for (const auto& s : body) emit_stmt(os, s, indent);
}

void emit_contract(std::ostream& os, const ContractIR& c) {
  os << "contract " << c.name << " {\n";
  for (const auto& v : c.state_vars) {
    os << "  " << kind_name(v.kind) << " " << v.name;
    if (v.has_init) {
      os << " = ";
      if (v.kind == VarKind::Bool)
        os << (v.init_bool ? "true" : "false");
      else
        os << v.init_int.str();
    }
    os << ";\n";
  }
  for (const auto& f : c.functions) {
    os << "  " << f.name << "(";
    for (size_t i = 0; i < f.params.size(); ++i) {
      if (i) os << ", ";
      os << kind_name(f.params[i].kind) << " " << f.params[i].name;
    }
    os << ")";
    if (f.returns) os << " returns (" << kind_name(*f.returns) << ")";
    os << " {\n";
    emit_body(os, f.body, 2);
    os << "  }\n";
  }
  os << "}\n";
}

}  // namespace

std::string pretty_expr(const Expr& e) {
  std::ostringstream os;
  emit_expr(os, e, 0);
  return os.str();
}

std::string pretty_print(const ContractIR& contract) {
  std::ostringstream os;
  emit_contract(os, contract);
  return os.str();
}

std::string pretty_print(const SourceUnit& unit) {
  std::ostringstream os;
  for (size_t i = 0; i < unit.contracts.size(); ++i) {
    if (i) os << "\n";
    emit_contract(os, unit.contracts[i]);
  }
  return os.str();
}

}  // namespace tmev::lang
