#include "relkanren/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "relkanren/constraints.hpp"
#include "relkanren/relations.hpp"
#include "relkanren/sexpr.hpp"
#include "relkanren/stats_rules.hpp"

namespace relkanren::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownRuleset : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::size_t max_answers = 0;
  std::optional<std::uint64_t> max_steps;
  std::string output;
};

std::uint64_t resolve_budget(const CommonFlags& flags) {
  if (flags.max_steps) return *flags.max_steps;
  const char* env = std::getenv(kMaxStepsEnv);
  if (!env || !*env) return 0;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw UsageError(std::string(kMaxStepsEnv) + " is not a step count: " + env);
  }
}

stats::RuleSet lookup_rule(const std::string& name) {
  auto rule = stats::find_ruleset(name);
  if (!rule) throw UnknownRuleset("unknown ruleset: " + name);
  return *rule;
}

// Pulls answers, printing each distinct reified query once. Returns the
// exit status.
int emit_answers(Stream stream, const Term& query, const CommonFlags& flags, std::ostream& out,
                 std::ostream& err) {
  AnswerLimit limit = flags.max_answers == 0 ? AnswerLimit(ALL) : AnswerLimit(flags.max_answers);
  std::uint64_t budget = resolve_budget(flags);
  std::set<std::string> seen;
  std::uint64_t steps = 0;
  Stream cur = std::move(stream);
  while (!limit.reached(seen.size())) {
    if (cur.is_empty()) break;
    if (cur.shape() == Stream::Shape::kAnswer) {
      std::string line = print_term(reify(query, cur.head().subst));
      if (seen.insert(line).second) {
        out << line << '\n';
        if (limit.reached(seen.size())) break;
      }
    }
    if (budget != 0 && steps >= budget) {
      out.flush();
      err << "relkanren: step budget of " << budget << " exhausted after " << seen.size() << " answer(s)\n";
      return kBudgetExhausted;
    }
    ++steps;
    cur = cur.step();
  }
  out.flush();
  return seen.empty() ? kNoAnswers : kAnswers;
}

std::string read_all(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Relation2 combined_rule(const std::vector<std::string>& names) {
  std::vector<Relation2> rules;
  for (const auto& name : names) rules.push_back(lookup_rule(name).rule);
  if (rules.size() == 1) return rules.front();
  return [rules](Term a, Term b) {
    std::vector<Goal> arms;
    for (const auto& r : rules) arms.push_back(r(a, b));
    return lany(std::move(arms));
  };
}

struct RewriteFlags {
  CommonFlags common;
  std::vector<std::string> rules;
  std::string input;
  std::string mode = "walk";
};

int cmd_rewrite(const RewriteFlags& flags, std::istream& in, std::ostream& out, std::ostream& err) {
  Relation2 rule = combined_rule(flags.rules);

  std::string text;
  if (flags.input.empty() || flags.input == "-") {
    text = read_all(in);
  } else {
    std::ifstream file(flags.input);
    if (!file) throw UsageError("cannot read input file: " + flags.input);
    text = read_all(file);
  }
  Term term = parse_sexpr(text, stats::default_registry());

  Term q = fresh_var("q");
  Goal goal;
  if (flags.mode == "walk") {
    goal = walko_strict(rule, term, q);
  } else {
    Relation2 lifted = [rule](Term a, Term b) { return walko_strict(rule, std::move(a), std::move(b)); };
    goal = reduceo(lifted, term, q);
  }
  return emit_answers(goal(State{}), q, flags.common, out, err);
}

class GoalSyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string head_name(const Term& form) {
  if (!form.is_pair()) throw GoalSyntaxError("goal must be a list: " + print_term(form));
  Term head = car(form);
  if (!head.is_atom() || !head.atom().is_symbol()) throw GoalSyntaxError("goal head must be a symbol: " + print_term(form));
  return head.atom().symbol().name;
}

Goal goal_of(const Term& form) {
  std::string name = head_name(form);
  std::vector<Term> args;
  try {
    args = list_from_term(cdr(form));
  } catch (const NotAListError&) {
    throw GoalSyntaxError("goal must be a proper list: " + print_term(form));
  }
  auto expect = [&](std::size_t n) {
    if (args.size() != n)
      throw GoalSyntaxError(name + " takes " + std::to_string(n) + " arguments, got " + std::to_string(args.size()));
  };
  if (name == "eq") {
    expect(2);
    return eq(args[0], args[1]);
  }
  if (name == "neq") {
    expect(2);
    return neq(args[0], args[1]);
  }
  if (name == "membero") {
    expect(2);
    return membero(args[0], args[1]);
  }
  if (name == "conso") {
    expect(3);
    return conso(args[0], args[1], args[2]);
  }
  if (name == "permuteo") {
    expect(2);
    return permuteo(args[0], args[1]);
  }
  if (name == "typeo") {
    expect(2);
    if (!args[1].is_atom() || !args[1].atom().is_symbol()) throw GoalSyntaxError("typeo kind must be a symbol");
    try {
      return type_constraint(args[0], args[1].atom().symbol().name);
    } catch (const UnknownPredicateError& e) {
      throw GoalSyntaxError(e.what());
    }
  }
  if (name == "rule") {
    expect(3);
    if (!args[0].is_atom() || !args[0].atom().is_symbol()) throw GoalSyntaxError("rule name must be a symbol");
    return lookup_rule(args[0].atom().symbol().name).rule(args[1], args[2]);
  }
  throw GoalSyntaxError("unknown goal: " + name);
}

struct QueryFlags {
  CommonFlags common;
  std::string goal;
};

int cmd_query(QueryFlags flags, std::ostream& out, std::ostream& err) {
  SexprReader reader(stats::default_registry());
  Term program = reader.read(flags.goal);
  if (head_name(program) != "run") throw GoalSyntaxError("query must have the form (run N ?q goal...)");
  std::vector<Term> parts;
  try {
    parts = list_from_term(cdr(program));
  } catch (const NotAListError&) {
    throw GoalSyntaxError("query must be a proper list");
  }
  if (parts.size() < 2) throw GoalSyntaxError("query must have the form (run N ?q goal...)");
  if (!parts[0].is_atom() || !parts[0].atom().is_integer() || parts[0].atom().integer() < 0)
    throw GoalSyntaxError("answer count must be a non-negative integer");
  std::size_t n = parts[0].atom().integer().convert_to<std::size_t>();
  // Flag value takes precedence only when the program asks for all.
  if (n != 0 || flags.common.max_answers == 0) flags.common.max_answers = n;

  std::vector<Goal> goals;
  for (std::size_t i = 2; i < parts.size(); ++i) goals.push_back(goal_of(parts[i]));
  return emit_answers(lall(std::move(goals))(State{}), parts[1], flags.common, out, err);
}

void add_common(CLI::App& cmd, CommonFlags& flags) {
  cmd.add_option("--max-answers", flags.max_answers, "Answers to print; 0 prints all")->check(CLI::NonNegativeNumber);
  cmd.add_option("--max-steps", flags.max_steps,
                 std::string("Step budget; 0 is unlimited (default from ") + kMaxStepsEnv + ")");
  cmd.add_option("--output", flags.output, "Write answers to this file instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relational term rewriting with statistical model rules"};
  app.name("relkanren");
  app.require_subcommand(1);

  RewriteFlags rewrite;
  CLI::App* rewrite_cmd = app.add_subcommand("rewrite", "Apply named rulesets to a term");
  add_common(*rewrite_cmd, rewrite.common);
  rewrite_cmd->add_option("--rules", rewrite.rules, "Ruleset name (repeatable): math, normal-sum, normal-affine, beta-binomial")
      ->required();
  rewrite_cmd->add_option("--input", rewrite.input, "Input term file; stdin when absent");
  rewrite_cmd->add_option("--mode", rewrite.mode, "walk: one rewriting pass; reduce: rewrite to a fixed point")
      ->check(CLI::IsMember({"walk", "reduce"}));

  QueryFlags query;
  CLI::App* query_cmd = app.add_subcommand("query", "Run a goal program: (run N ?q goal...)");
  add_common(*query_cmd, query.common);
  query_cmd->add_option("--goal", query.goal, "Goal program")->required();

  std::vector<const char*> argv{"relkanren"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kAnswers;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  CommonFlags& common = rewrite_cmd->parsed() ? rewrite.common : query.common;
  std::unique_ptr<std::ofstream> file;
  std::ostream* sink = &out;
  if (!common.output.empty()) {
    file = std::make_unique<std::ofstream>(common.output);
    if (!*file) {
      err << "relkanren: cannot open output file: " << common.output << '\n';
      return kInputError;
    }
    sink = file.get();
  }

  try {
    if (rewrite_cmd->parsed()) return cmd_rewrite(rewrite, in, *sink, err);
    return cmd_query(query, *sink, err);
  } catch (const UnknownRuleset& e) {
    err << "relkanren: " << e.what() << '\n';
    return kUnknownRuleset;
  } catch (const ParseError& e) {
    err << "relkanren: parse error at " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "relkanren: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace relkanren::cli
