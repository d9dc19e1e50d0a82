#pragma once

#include <string>
#include <vector>

#include "tmev/ast.hpp"

namespace tmev::lang {

enum class Tok {
  Ident,
  IntLit,
  KwContract,
  KwInt,
  KwUint,
  KwBool,
  KwAddress,
  KwMapping,
  KwReturns,
  KwIf,
  KwElse,
  KwWhile,
  KwReturn,
  KwTrue,
  KwFalse,
  KwMsg,
  KwSender,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Semi,
  Comma,
  Dot,
  Arrow,  // =>
  Assign,
  PlusAssign,
  MinusAssign,
  StarAssign,
  SlashAssign,
  OrOr,
  AndAnd,
  Eq,
  Ne,
  Le,
  Ge,
  Lt,
  Gt,
  Plus,
  Minus,
  Star,
  Slash,
  Bang,
  End,
};

struct Token {
  Tok type;
  std::string lexeme;
  Int value;  // IntLit
  int line, col;
};

// Tokenizes TokenLang source.  Throws SyntaxError on unknown characters
// or malformed literals.
std::vector<Token> lex(const std::string& src);

}  // namespace tmev::lang
