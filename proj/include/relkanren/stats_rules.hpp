#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "relkanren/expr.hpp"
#include "relkanren/relations.hpp"

namespace relkanren::stats {

// Random-variable operators. normal takes (mean, variance), never a
// standard deviation; beta takes (alpha, beta); binomial takes (n, p);
// observe takes (data, rv).
inline constexpr std::string_view kNormal = "normal";
inline constexpr std::string_view kBeta = "beta";
inline constexpr std::string_view kBinomial = "binomial";
inline constexpr std::string_view kObserve = "observe";

// Adds the random-variable operators. Evaluating one rebuilds the
// application with evaluated parameters.
void register_vocabulary(OperatorRegistry& reg);

// Arithmetic plus the random-variable vocabulary.
const OperatorRegistry& default_registry();

/// add(x, x) -> mul(2, x) and log(exp(x)) -> x, with x a number or an
/// application.
Goal math_reduce_rule(Term e, Term r);

/// add(normal(mx, vx), normal(my, vy)) <-> normal(add(mx, my), add(vx, vy)).
/// The operands must be independent; terms cannot express that, so it is
/// assumed.
Goal normal_sum_rule(Term lhs, Term rhs);

/// add(m, mul(s, normal(0, 1))) <-> normal(m, mul(s, s)).
Goal normal_affine_rule(Term lhs, Term rhs);

/// observe(obs, binomial(N, beta(a, b)))
///   <-> binomial(N, beta(add(a, sum(obs)), add(b, sub(sum(N), sum(obs)))))
Goal beta_binomial_conjugate(Term x, Term y);

struct RuleSet {
  std::string name;
  Relation2 rule;
  std::string description;
};

// "math", "normal-sum", "normal-affine", "beta-binomial".
const std::map<std::string, RuleSet, std::less<>>& builtin_rulesets();
std::optional<RuleSet> find_ruleset(std::string_view name);

}  // namespace relkanren::stats
