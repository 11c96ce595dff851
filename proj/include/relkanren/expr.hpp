#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relkanren/term.hpp"

namespace relkanren {

/// Evaluation failures: unknown operator, arity mismatch, domain errors.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonGroundError : public EvalError {
 public:
  using EvalError::EvalError;
};

struct OperatorDef {
  std::string name;
  std::optional<std::size_t> arity;  // nullopt: variadic
  std::function<Term(std::span<const Term>)> eval_fn;
  bool commutative = false;
  bool associative = false;
};

class OperatorRegistry {
 public:
  // add, sub, mul, div, log, exp, sum.
  static OperatorRegistry arithmetic();

  // Throws std::invalid_argument on a duplicate name.
  void add(OperatorDef def);
  const OperatorDef* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  // Registered operator symbol?
  const OperatorDef* operator_of(const Term& head) const;

 private:
  std::map<std::string, OperatorDef, std::less<>> ops_;
};

// Sub-sequence [begin, end) of an expression term's items, as a new
// expression term. Throws std::out_of_range / std::invalid_argument.
Term slice(const Term& e, std::size_t begin, std::size_t end);

/// Evaluates a ground expression bottom-up. Results are memoized in each
/// expression term's cache; a proper cons list headed by a registered
/// operator is evaluated as an application too.
Term eval_expr(const Term& e, const OperatorRegistry& reg);

Term expr_of_application(const Term& rator, std::span<const Term> rands);
std::pair<Term, std::vector<Term>> application_of_expr(const Term& e);

}  // namespace relkanren
