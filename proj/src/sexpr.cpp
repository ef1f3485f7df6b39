#include "verge/sexpr.hpp"

#include <cctype>

#include "verge/errors.hpp"

namespace verge {

SExpr SExpr::make_atom(std::string a, size_t pos) {
  SExpr e;
  e.is_atom = true;
  e.atom = std::move(a);
  e.pos = pos;
  return e;
}

SExpr SExpr::make_list(std::vector<SExpr> items, size_t pos) {
  SExpr e;
  e.is_atom = false;
  e.items = std::move(items);
  e.pos = pos;
  return e;
}

std::string SExpr::to_string() const {
  if (is_atom) return atom;
  std::string out = "(";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ' ';
    out += items[i].to_string();
  }
  out += ')';
  return out;
}

namespace {

void skip_ws(std::string_view text, size_t& i) {
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ';') {  // line comment
      while (i < text.size() && text[i] != '\n') ++i;
    } else {
      break;
    }
  }
}

bool atom_char(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  switch (c) {
    case '_': case '-': case '+': case '*': case '/': case '<': case '>':
    case '=': case '!': case '?': case '.': case ':': case '%': case '@':
    case '$': case '&': case '^': case '~':
      return true;
    default:
      return false;
  }
}

SExpr parse_at(std::string_view text, size_t& i) {
  skip_ws(text, i);
  if (i >= text.size())
    throw Error(ErrorCode::SyntaxError, "unexpected end of input at position " +
                                            std::to_string(i));
  size_t start = i;
  char c = text[i];
  if (c == '(') {
    ++i;
    std::vector<SExpr> items;
    for (;;) {
      skip_ws(text, i);
      if (i >= text.size())
        throw Error(ErrorCode::SyntaxError,
                    "unbalanced '(' opened at position " + std::to_string(start));
      if (text[i] == ')') {
        ++i;
        return SExpr::make_list(std::move(items), start);
      }
      items.push_back(parse_at(text, i));
    }
  }
  if (c == ')')
    throw Error(ErrorCode::SyntaxError,
                "unexpected ')' at position " + std::to_string(i));
  if (c == '"') {  // string literal, kept verbatim with quotes stripped
    ++i;
    std::string s;
    while (i < text.size() && text[i] != '"') s += text[i++];
    if (i >= text.size())
      throw Error(ErrorCode::SyntaxError,
                  "unterminated string at position " + std::to_string(start));
    ++i;
    return SExpr::make_atom(std::move(s), start);
  }
  if (c == '|') {  // quoted symbol
    ++i;
    std::string s;
    while (i < text.size() && text[i] != '|') s += text[i++];
    if (i >= text.size())
      throw Error(ErrorCode::SyntaxError,
                  "unterminated |symbol| at position " + std::to_string(start));
    ++i;
    return SExpr::make_atom(std::move(s), start);
  }
  if (!atom_char(c))
    throw Error(ErrorCode::SyntaxError, std::string("unexpected character '") +
                                            c + "' at position " +
                                            std::to_string(i));
  std::string s;
  while (i < text.size() && atom_char(text[i])) s += text[i++];
  return SExpr::make_atom(std::move(s), start);
}

}  // namespace

SExpr parse_sexpr(std::string_view text, size_t* consumed) {
  size_t i = 0;
  SExpr e = parse_at(text, i);
  if (consumed) {
    *consumed = i;
  } else {
    skip_ws(text, i);
    if (i < text.size())
      throw Error(ErrorCode::SyntaxError,
                  "trailing input at position " + std::to_string(i));
  }
  return e;
}

std::vector<SExpr> parse_sexpr_list(std::string_view text) {
  std::vector<SExpr> out;
  size_t i = 0;
  for (;;) {
    skip_ws(text, i);
    if (i >= text.size()) break;
    out.push_back(parse_at(text, i));
  }
  return out;
}

bool sexpr_complete(std::string_view text) {
  int depth = 0;
  bool seen = false;
  bool in_string = false;
  for (char c : text) {
    if (in_string) {
      if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
      seen = true;
    } else if (c == '(') {
      ++depth;
      seen = true;
    } else if (c == ')') {
      --depth;
      if (depth == 0) return true;
      if (depth < 0) return true;  // malformed; let the parser report it
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      seen = true;
      if (depth == 0) return true;  // bare atom
    }
  }
  return seen && depth == 0;
}

}  // namespace verge
