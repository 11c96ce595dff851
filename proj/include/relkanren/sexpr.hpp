#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "relkanren/expr.hpp"
#include "relkanren/term.hpp"

namespace relkanren {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Reads s-expression text into terms.
///
/// Syntax: symbols, integers, decimals (`1.5`, `2e3`, `+inf.0`), strings
/// in double quotes, `#t`/`#f`, lists `( ... )`, dotted pairs `(a . b)`,
/// logic variables `?name` and the anonymous `?_`. `;` starts a comment.
/// A proper list whose head is a registered operator becomes an expression
/// term. Variables with the same name share one LogicVar for the lifetime
/// of the reader.
class SexprReader {
 public:
  explicit SexprReader(const OperatorRegistry& reg) : reg_(&reg) {}

  // Exactly one term; anything else is a ParseError.
  Term read(std::string_view text);

  const std::map<std::string, LogicVar, std::less<>>& variables() const { return vars_; }

 private:
  const OperatorRegistry* reg_;
  std::map<std::string, LogicVar, std::less<>> vars_;
};

Term parse_sexpr(std::string_view text, const OperatorRegistry& reg);

/// Canonical text. Unbound variables print as ?_0, ?_1, ... in
/// left-to-right first-encounter order.
std::string print_term(const Term& t);

}  // namespace relkanren
