#include "relkanren/stats_rules.hpp"

#include "relkanren/constraints.hpp"

namespace relkanren::stats {

namespace {

Term op(std::string_view name) { return sym(name); }

OperatorDef distribution(std::string_view name) {
  std::string n(name);
  return OperatorDef{n, 2, [n](std::span<const Term> params) {
                       return expr_of_application(sym(n), params);
                     }};
}

}  // namespace

void register_vocabulary(OperatorRegistry& reg) {
  reg.add(distribution(kNormal));
  reg.add(distribution(kBeta));
  reg.add(distribution(kBinomial));
  reg.add(distribution(kObserve));
}

const OperatorRegistry& default_registry() {
  static const OperatorRegistry reg = [] {
    OperatorRegistry r = OperatorRegistry::arithmetic();
    register_vocabulary(r);
    return r;
  }();
  return reg;
}

Goal math_reduce_rule(Term e, Term r) {
  Term x = fresh_var("x");
  return lall(type_constraint_any(x, {"number", "expr"}),
              conde({
                  {eq(e, expr(op("add"), x, x)), eq(r, expr(op("mul"), integer(2), x))},
                  {eq(e, expr(op("log"), expr(op("exp"), x))), eq(r, x)},
              }));
}

Goal normal_sum_rule(Term lhs, Term rhs) {
  Term mx = fresh_var("mx"), vx = fresh_var("vx"), my = fresh_var("my"), vy = fresh_var("vy");
  return lall(eq(lhs, expr(op("add"), expr(op(kNormal), mx, vx), expr(op(kNormal), my, vy))),
              eq(rhs, expr(op(kNormal), expr(op("add"), mx, my), expr(op("add"), vx, vy))));
}

Goal normal_affine_rule(Term lhs, Term rhs) {
  Term m = fresh_var("m"), s = fresh_var("s");
  Term standard = expr(op(kNormal), integer(0), integer(1));
  return lall(eq(lhs, expr(op("add"), m, expr(op("mul"), s, standard))),
              eq(rhs, expr(op(kNormal), m, expr(op("mul"), s, s))));
}

Goal beta_binomial_conjugate(Term x, Term y) {
  Term obs = fresh_var("obs"), n = fresh_var("n"), alpha = fresh_var("alpha"), beta = fresh_var("beta");
  Term obs_sum = expr(op("sum"), obs);
  Term alpha_post = expr(op("add"), alpha, obs_sum);
  Term beta_post = expr(op("add"), beta, expr(op("sub"), expr(op("sum"), n), obs_sum));
  Term prior_model = expr(op(kObserve), obs, expr(op(kBinomial), n, expr(op(kBeta), alpha, beta)));
  Term posterior = expr(op(kBinomial), n, expr(op(kBeta), alpha_post, beta_post));
  return lall(eq(x, prior_model), eq(y, posterior));
}

const std::map<std::string, RuleSet, std::less<>>& builtin_rulesets() {
  static const std::map<std::string, RuleSet, std::less<>> rules = [] {
    std::map<std::string, RuleSet, std::less<>> m;
    auto add = [&m](std::string name, Relation2 rule, std::string description) {
      m.emplace(name, RuleSet{name, std::move(rule), std::move(description)});
    };
    add("math", math_reduce_rule, "add(x, x) = mul(2, x); log(exp(x)) = x");
    add("normal-sum", normal_sum_rule, "sum of independent normals is normal (variance parameterization)");
    add("normal-affine", normal_affine_rule, "m + s * N(0, 1) = N(m, s * s)");
    add("beta-binomial", beta_binomial_conjugate, "observed binomial with beta prior -> beta posterior");
    return m;
  }();
  return rules;
}

std::optional<RuleSet> find_ruleset(std::string_view name) {
  const auto& rules = builtin_rulesets();
  auto it = rules.find(name);
  if (it == rules.end()) return std::nullopt;
  return it->second;
}

}  // namespace relkanren::stats
