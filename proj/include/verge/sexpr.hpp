#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace verge {

// Minimal s-expression reader shared by the formula parser, the bundled
// solver and the bridge's reply parsing.
struct SExpr {
  bool is_atom = false;
  std::string atom;             // valid when is_atom
  std::vector<SExpr> items;     // valid when !is_atom
  size_t pos = 0;               // byte offset in the source text

  static SExpr make_atom(std::string a, size_t pos = 0);
  static SExpr make_list(std::vector<SExpr> items, size_t pos = 0);

  bool is_list() const { return !is_atom; }
  size_t size() const { return items.size(); }
  const SExpr& operator[](size_t i) const { return items[i]; }

  std::string to_string() const;
};

// Parses a single s-expression; throws Error(SyntaxError) on malformed input.
// On return, *consumed (if non-null) holds the number of bytes read.
SExpr parse_sexpr(std::string_view text, size_t* consumed = nullptr);

// Parses a whole sequence of s-expressions (e.g. an SMT-LIB2 script body).
std::vector<SExpr> parse_sexpr_list(std::string_view text);

// True when `text` contains at least one complete, balanced s-expression.
bool sexpr_complete(std::string_view text);

}  // namespace verge
