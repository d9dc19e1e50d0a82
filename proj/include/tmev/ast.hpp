#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tmev/ints.hpp"

namespace tmev::lang {

struct SrcLoc {
  int line = 0;
  int col = 0;
};

enum class VarKind { Int, Uint, Bool, Address, MapAddressUint };

const char* kind_name(VarKind k);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind { IntLit, BoolLit, Ident, MsgSender, Index, Unary, Binary };
  Kind kind;
  SrcLoc loc;

  Int int_value;       // IntLit
  bool bool_value = false;  // BoolLit
  std::string name;    // Ident, Index base
  std::string op;      // Unary: "!" "-"; Binary: "||" "&&" "==" "!=" "<" "<=" ">" ">=" "+" "-" "*" "/"
  ExprPtr lhs;         // Unary operand, Index key, Binary lhs
  ExprPtr rhs;         // Binary rhs

  ExprPtr clone() const;
  bool equals(const Expr& o) const;
};

ExprPtr make_int(Int v);
ExprPtr make_bool(bool v);
ExprPtr make_ident(std::string name);
ExprPtr make_msg_sender();
ExprPtr make_index(std::string base, ExprPtr key);
ExprPtr make_unary(std::string op, ExprPtr e);
ExprPtr make_binary(std::string op, ExprPtr l, ExprPtr r);

struct LValue {
  std::string name;
  ExprPtr key;  // null unless mapping access
  SrcLoc loc;
  bool is_mapping_access() const { return key != nullptr; }
  LValue clone() const;
  bool equals(const LValue& o) const;
};

struct Stmt {
  enum class Kind { LocalDecl, Assign, CompoundAssign, If, While, Return };
  Kind kind;
  SrcLoc loc;

  VarKind decl_kind = VarKind::Int;  // LocalDecl
  std::string name;                  // LocalDecl
  LValue lhs;                        // Assign / CompoundAssign
  std::string op;                    // CompoundAssign: "+=" "-=" "*=" "/="
  ExprPtr expr;                      // init / rhs / cond / return value
  std::vector<Stmt> then_body;       // If then, While body
  std::vector<Stmt> else_body;       // If else

  Stmt clone() const;
  bool equals(const Stmt& o) const;
};

struct Param {
  std::string name;
  VarKind kind;
  SrcLoc loc;
};

struct FunctionIR {
  std::string name;
  std::vector<Param> params;
  std::optional<VarKind> returns;
  std::vector<Stmt> body;
  bool owner_only = false;  // side annotation, unused by the analyses
  SrcLoc loc;
  bool equals(const FunctionIR& o) const;
};

struct StateVar {
  std::string name;
  VarKind kind;
  bool has_init = false;
  Int init_int;          // valid when has_init and kind is Int/Uint
  bool init_bool = false;  // valid when has_init and kind is Bool
  SrcLoc loc;
  bool equals(const StateVar& o) const;
};

struct ContractIR {
  std::string name;
  std::vector<StateVar> state_vars;
  std::vector<FunctionIR> functions;
  SrcLoc loc;

  const FunctionIR* find_function(const std::string& n) const;
  const StateVar* find_state_var(const std::string& n) const;
  bool equals(const ContractIR& o) const;
};

struct SourceUnit {
  std::string source_name;
  std::vector<ContractIR> contracts;
  bool equals(const SourceUnit& o) const;
};

}  // namespace tmev::lang
