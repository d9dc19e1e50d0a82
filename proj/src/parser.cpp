#include "tmev/parser.hpp"

#include "tmev/errors.hpp"
#include "tmev/lexer.hpp"

namespace tmev::lang {

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SourceUnit unit(const std::string& source_name) {
    SourceUnit u;
    u.source_name = source_name;
    while (!at(Tok::End)) u.contracts.push_back(contract());
    if (u.contracts.empty())
      throw SyntaxError(peek().line, peek().col, "expected 'contract'");
    return u;
  }

  ExprPtr lone_expr() {
    auto e = expr();
    expect(Tok::End, "end of input");
    return e;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& peek(int off = 0) const {
    size_t i = pos_ + off;
    if (i >= toks_.size()) i = toks_.size() - 1;
    return toks_[i];
  }
  bool at(Tok t) const { return peek().type == t; }
  const Token& get() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  const Token& expect(Tok t, const char* what) {
    if (!at(t))
      throw SyntaxError(peek().line, peek().col,
                        std::string("expected ") + what + ", got '" +
                            (peek().type == Tok::End ? "<end>" : peek().lexeme) +
                            "'");
    return get();
  }
  [[noreturn]] void fail(const char* msg) {
    throw SyntaxError(peek().line, peek().col, msg);
  }
  static SrcLoc loc_of(const Token& t) { return {t.line, t.col}; }

  bool at_scalar_type() const {
    return at(Tok::KwInt) || at(Tok::KwUint) || at(Tok::KwBool);
  }
  bool at_type() const { return at_scalar_type() || at(Tok::KwMapping); }

  VarKind scalar_type() {
    if (at(Tok::KwInt)) { get(); return VarKind::Int; }
    if (at(Tok::KwUint)) { get(); return VarKind::Uint; }
    if (at(Tok::KwBool)) { get(); return VarKind::Bool; }
    fail("expected type");
  }

  ContractIR contract() {
    const Token& kw = expect(Tok::KwContract, "'contract'");
    ContractIR c;
    c.loc = loc_of(kw);
    c.name = expect(Tok::Ident, "contract name").lexeme;
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) fail("unterminated contract body");
      if (at_type()) {
        c.state_vars.push_back(state_var());
      } else if (at(Tok::Ident)) {
        c.functions.push_back(function());
      } else {
        fail("expected state variable or function");
      }
    }
    expect(Tok::RBrace, "'}'");
    return c;
  }

  StateVar state_var() {
    StateVar v;
    v.loc = loc_of(peek());
    if (at(Tok::KwMapping)) {
      get();
      expect(Tok::LParen, "'('");
      expect(Tok::KwAddress, "'address'");
      expect(Tok::Arrow, "'=>'");
      expect(Tok::KwUint, "'uint'");
      expect(Tok::RParen, "')'");
      v.kind = VarKind::MapAddressUint;
    } else {
      v.kind = scalar_type();
    }
    v.name = expect(Tok::Ident, "variable name").lexeme;
    if (at(Tok::Assign)) {
      get();
      v.has_init = true;
      if (at(Tok::KwTrue) || at(Tok::KwFalse)) {
        v.init_bool = at(Tok::KwTrue);
        get();
      } else {
        bool neg = false;
        if (at(Tok::Minus)) { get(); neg = true; }
        const Token& lit = expect(Tok::IntLit, "literal initializer");
        v.init_int = neg ? -lit.value : lit.value;
      }
    }
    expect(Tok::Semi, "';'");
    return v;
  }

  FunctionIR function() {
    FunctionIR f;
    const Token& nm = expect(Tok::Ident, "function name");
    f.name = nm.lexeme;
    f.loc = loc_of(nm);
    expect(Tok::LParen, "'('");
    if (!at(Tok::RParen)) {
      for (;;) {
        Param p;
        p.loc = loc_of(peek());
        if (at(Tok::KwAddress)) { get(); p.kind = VarKind::Address; }
        else p.kind = scalar_type();
        p.name = expect(Tok::Ident, "parameter name").lexeme;
        f.params.push_back(std::move(p));
        if (!at(Tok::Comma)) break;
        get();
      }
    }
    expect(Tok::RParen, "')'");
    if (at(Tok::KwReturns)) {
      get();
      expect(Tok::LParen, "'('");
      f.returns = scalar_type();
      expect(Tok::RParen, "')'");
    }
    f.body = block();
    return f;
  }

  std::vector<Stmt> block() {
    expect(Tok::LBrace, "'{'");
    std::vector<Stmt> body;
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) fail("unterminated block");
      body.push_back(stmt());
    }
    expect(Tok::RBrace, "'}'");
    return body;
  }

  // if/while accept a block or a single statement body
  std::vector<Stmt> body_or_stmt() {
    if (at(Tok::LBrace)) return block();
    std::vector<Stmt> one;
    one.push_back(stmt());
    return one;
  }

  Stmt stmt() {
    SrcLoc l = loc_of(peek());
    if (at_scalar_type()) {
      Stmt s;
      s.kind = Stmt::Kind::LocalDecl;
      s.loc = l;
      s.decl_kind = scalar_type();
      s.name = expect(Tok::Ident, "variable name").lexeme;
      expect(Tok::Assign, "'=' (locals require an initializer)");
      s.expr = expr();
      expect(Tok::Semi, "';'");
      return s;
    }
    if (at(Tok::KwIf)) {
      get();
      Stmt s;
      s.kind = Stmt::Kind::If;
      s.loc = l;
      expect(Tok::LParen, "'('");
      s.expr = expr();
      expect(Tok::RParen, "')'");
      s.then_body = body_or_stmt();
      if (at(Tok::KwElse)) {
        get();
        s.else_body = body_or_stmt();
      }
      return s;
    }
    if (at(Tok::KwWhile)) {
      get();
      Stmt s;
      s.kind = Stmt::Kind::While;
      s.loc = l;
      expect(Tok::LParen, "'('");
      s.expr = expr();
      expect(Tok::RParen, "')'");
      s.then_body = body_or_stmt();
      return s;
    }
    if (at(Tok::KwReturn)) {
      get();
      Stmt s;
      s.kind = Stmt::Kind::Return;
      s.loc = l;
      s.expr = expr();
      expect(Tok::Semi, "';'");
      return s;
    }
    // assignment or compound assignment
    Stmt s;
    s.loc = l;
    s.lhs = lvalue();
    if (at(Tok::Assign)) {
      get();
      s.kind = Stmt::Kind::Assign;
    } else if (at(Tok::PlusAssign) || at(Tok::MinusAssign) ||
               at(Tok::StarAssign) || at(Tok::SlashAssign)) {
      s.kind = Stmt::Kind::CompoundAssign;
      s.op = get().lexeme;
    } else {
      fail("expected assignment operator");
    }
    s.expr = expr();
    expect(Tok::Semi, "';'");
    return s;
  }

  LValue lvalue() {
    LValue v;
    const Token& nm = expect(Tok::Ident, "lvalue");
    v.name = nm.lexeme;
    v.loc = loc_of(nm);
    if (at(Tok::LBracket)) {
      get();
      v.key = expr();
      expect(Tok::RBracket, "']'");
    }
    return v;
  }

  ExprPtr expr() { return or_expr(); }

  ExprPtr or_expr() {
    auto e = and_expr();
    while (at(Tok::OrOr)) {
      SrcLoc l = loc_of(get());
      auto r = and_expr();
      e = make_binary("||", std::move(e), std::move(r));
      e->loc = l;
    }
    return e;
  }

  ExprPtr and_expr() {
    auto e = eq_expr();
    while (at(Tok::AndAnd)) {
      SrcLoc l = loc_of(get());
      auto r = eq_expr();
      e = make_binary("&&", std::move(e), std::move(r));
      e->loc = l;
    }
    return e;
  }

  ExprPtr eq_expr() {
    auto e = rel_expr();
    while (at(Tok::Eq) || at(Tok::Ne)) {
      std::string op = peek().lexeme;
      SrcLoc l = loc_of(get());
      auto r = rel_expr();
      e = make_binary(op, std::move(e), std::move(r));
      e->loc = l;
    }
    return e;
  }

  ExprPtr rel_expr() {
    auto e = add_expr();
    while (at(Tok::Lt) || at(Tok::Le) || at(Tok::Gt) || at(Tok::Ge)) {
      std::string op = peek().lexeme;
      SrcLoc l = loc_of(get());
      auto r = add_expr();
      e = make_binary(op, std::move(e), std::move(r));
      e->loc = l;
    }
    return e;
  }

  ExprPtr add_expr() {
    auto e = mul_expr();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      std::string op = peek().lexeme;
      SrcLoc l = loc_of(get());
      auto r = mul_expr();
      e = make_binary(op, std::move(e), std::move(r));
      e->loc = l;
    }
    return e;
  }

  ExprPtr mul_expr() {
    auto e = unary_expr();
    while (at(Tok::Star) || at(Tok::Slash)) {
      std::string op = peek().lexeme;
      SrcLoc l = loc_of(get());
      auto r = unary_expr();
      e = make_binary(op, std::move(e), std::move(r));
      e->loc = l;
    }
    return e;
  }

  ExprPtr unary_expr() {
    if (at(Tok::Bang) || at(Tok::Minus)) {
      std::string op = peek().lexeme;
      SrcLoc l = loc_of(get());
      auto e = make_unary(op, unary_expr());
      e->loc = l;
      return e;
    }
    return primary();
  }

  ExprPtr primary() {
    SrcLoc l = loc_of(peek());
    if (at(Tok::IntLit)) {
      auto e = make_int(get().value);
      e->loc = l;
      return e;
    }
    if (at(Tok::KwTrue) || at(Tok::KwFalse)) {
      auto e = make_bool(at(Tok::KwTrue));
      get();
      e->loc = l;
      return e;
    }
    if (at(Tok::KwMsg)) {
      get();
      expect(Tok::Dot, "'.'");
      expect(Tok::KwSender, "'sender'");
      auto e = make_msg_sender();
      e->loc = l;
      return e;
    }
    if (at(Tok::Ident)) {
      std::string name = get().lexeme;
      if (at(Tok::LBracket)) {
        get();
        auto key = expr();
        expect(Tok::RBracket, "']'");
        auto e = make_index(std::move(name), std::move(key));
        e->loc = l;
        return e;
      }
      auto e = make_ident(std::move(name));
      e->loc = l;
      return e;
    }
    if (at(Tok::LParen)) {
      get();
      auto e = expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    fail("expected expression");
  }
};

}  // namespace

SourceUnit parse_unit(const std::string& source, const std::string& source_name) {
  Parser p(lex(source));
  return p.unit(source_name);
}

SourceUnit parse(const std::string& source, const std::string& source_name) {
  SourceUnit u = parse_unit(source, source_name);
  validate(u);
  return u;
}

ExprPtr parse_expression(const std::string& source) {
  Parser p(lex(source));
  return p.lone_expr();
}

}  // namespace tmev::lang
