#include "tmev/lexer.hpp"

#include <cctype>
#include <map>

#include "tmev/errors.hpp"

namespace tmev::lang {

namespace {

const std::map<std::string, Tok> kKeywords = {
    {"contract", Tok::KwContract}, {"int", Tok::KwInt},
    {"uint", Tok::KwUint},         {"bool", Tok::KwBool},
    {"address", Tok::KwAddress},   {"mapping", Tok::KwMapping},
    {"returns", Tok::KwReturns},   {"if", Tok::KwIf},
    {"else", Tok::KwElse},         {"while", Tok::KwWhile},
    {"return", Tok::KwReturn},     {"true", Tok::KwTrue},
    {"false", Tok::KwFalse},       {"msg", Tok::KwMsg},
    {"sender", Tok::KwSender},
};

}  // namespace

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto push = [&](Tok t, std::string lx, int l, int c) {
    out.push_back({t, std::move(lx), Int(0), l, c});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    int tl = line, tc = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      std::string digits = src.substr(i, j - i);
      Int v(digits);
      // scientific shorthand for integer powers of ten: 1e18
      if (j < src.size() && src[j] == 'e' && j + 1 < src.size() &&
          std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        size_t k = j + 1;
        while (k < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[k])))
          ++k;
        long ex = std::stol(src.substr(j + 1, k - j - 1));
        if (ex > 100000)
          throw SyntaxError(tl, tc, "exponent too large in integer literal");
        for (long e = 0; e < ex; ++e) v *= 10;
        j = k;
      }
      if (j < src.size() &&
          (std::isalpha(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        throw SyntaxError(tl, tc, "malformed integer literal");
      Token t{Tok::IntLit, src.substr(i, j - i), v, tl, tc};
      out.push_back(t);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_'))
        ++j;
      std::string word = src.substr(i, j - i);
      auto it = kKeywords.find(word);
      push(it == kKeywords.end() ? Tok::Ident : it->second, word, tl, tc);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    Tok t;
    int len = 2;
    if (two('=', '>')) t = Tok::Arrow;
    else if (two('=', '=')) t = Tok::Eq;
    else if (two('!', '=')) t = Tok::Ne;
    else if (two('<', '=')) t = Tok::Le;
    else if (two('>', '=')) t = Tok::Ge;
    else if (two('&', '&')) t = Tok::AndAnd;
    else if (two('|', '|')) t = Tok::OrOr;
    else if (two('+', '=')) t = Tok::PlusAssign;
    else if (two('-', '=')) t = Tok::MinusAssign;
    else if (two('*', '=')) t = Tok::StarAssign;
    else if (two('/', '=')) t = Tok::SlashAssign;
    else {
      len = 1;
      switch (c) {
        case '{': t = Tok::LBrace; break;
        case '}': t = Tok::RBrace; break;
        case '(': t = Tok::LParen; break;
        case ')': t = Tok::RParen; break;
        case '[': t = Tok::LBracket; break;
        case ']': t = Tok::RBracket; break;
        case ';': t = Tok::Semi; break;
        case ',': t = Tok::Comma; break;
        case '.': t = Tok::Dot; break;
        case '=': t = Tok::Assign; break;
        case '<': t = Tok::Lt; break;
        case '>': t = Tok::Gt; break;
        case '+': t = Tok::Plus; break;
        case '-': t = Tok::Minus; break;
        case '*': t = Tok::Star; break;
        case '/': t = Tok::Slash; break;
        case '!': t = Tok::Bang; break;
        default:
          throw SyntaxError(tl, tc,
                            std::string("unexpected character '") + c + "'");
      }
    }
    push(t, src.substr(i, len), tl, tc);
    i += len;
    col += len;
  }
  out.push_back({Tok::End, "", Int(0), line, col});
  return out;
}

}  // namespace tmev::lang
