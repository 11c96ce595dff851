#include <chrono>
#include <functional>
#include <unordered_set>

#include <gtest/gtest.h>

#include "relkanren/subst.hpp"
#include "test_util.hpp"

namespace relkanren {
namespace {

using testing::P;
using testing::T;
using testing::TermGen;

TEST(Substitution, Persistent) {
  LogicVar x = fresh_var(), y = fresh_var();
  Substitution s0;
  Substitution s1 = s0.extend(x, integer(1));
  Substitution s2 = s1.extend(y, integer(2));
  EXPECT_FALSE(s0.contains(x));
  EXPECT_TRUE(s1.contains(x));
  EXPECT_FALSE(s1.contains(y));
  EXPECT_EQ(*s2.lookup(y), integer(2));
  EXPECT_EQ(s2.size(), 2u);
}

TEST(Substitution, ManyKeys) {
  std::vector<LogicVar> vars;
  Substitution s;
  for (int i = 0; i < 5000; ++i) {
    vars.push_back(fresh_var());
    s = s.extend(vars.back(), integer(i));
  }
  vars.push_back(display_var(3));
  s = s.extend(vars.back(), integer(-1));
  for (int i = 0; i < 5000; ++i) ASSERT_EQ(*s.lookup(vars[i]), integer(i));
  EXPECT_EQ(*s.lookup(display_var(3)), integer(-1));
  EXPECT_FALSE(s.contains(fresh_var()));
  std::size_t seen = 0;
  s.for_each([&](const LogicVar&, const Term&) { ++seen; });
  EXPECT_EQ(seen, s.size());
}

TEST(Walk, Chains) {
  LogicVar x = fresh_var(), y = fresh_var();
  Substitution s = Substitution().extend(x, y).extend(y, integer(3));
  EXPECT_EQ(walk(x, s), integer(3));
  EXPECT_EQ(walk(x, Substitution()), Term(x));
  Term pair = list(Term(x), integer(2));
  Term walked = walk(pair, Substitution().extend(x, integer(1)));
  EXPECT_EQ(walked.identity(), pair.identity());
}

TEST(WalkStar, Deep) {
  LogicVar x = fresh_var(), y = fresh_var();
  Substitution s = Substitution().extend(x, integer(1)).extend(y, T("(2 3)"));
  EXPECT_EQ(walk_star(cons(x, y), s), T("(1 2 3)"));
  EXPECT_EQ(walk_star(integer(5), s), integer(5));
}

TEST(WalkStar, PreservesUnchangedNodes) {
  Term e = T("(add 1 (mul 2 3))");
  EXPECT_EQ(walk_star(e, Substitution().extend(fresh_var(), integer(0))).identity(), e.identity());
}

// Recursive reference walker, used only on shallow inputs.
Term reference_walk_star(const Term& t, const Substitution& s) {
  Term w = walk(t, s);
  if (w.is_cons()) return cons(reference_walk_star(w.cons_cell().car, s), reference_walk_star(w.cons_cell().cdr, s));
  if (w.is_expr()) {
    std::vector<Term> items;
    for (const Term& i : w.expr().items()) items.push_back(reference_walk_star(i, s));
    return make_expr(std::move(items));
  }
  return w;
}

TEST(WalkStar, MatchesReferenceOnRandomTerms) {
  auto vars = testing::make_vars(4);
  TermGen gen(3, vars);
  for (int i = 0; i < 300; ++i) {
    Substitution s;
    // Bind a prefix of the variables to terms over the later ones only.
    TermGen inner(100 + i, {vars[2], vars[3]});
    s = s.extend(vars[0].var(), inner.term(2)).extend(vars[1].var(), inner.term(2));
    Term t = gen.term(3);
    EXPECT_EQ(walk_star(t, s), reference_walk_star(t, s));
  }
}

TEST(WalkStar, HundredThousandDeepList) {
  const int n = 100000;
  LogicVar tail = fresh_var();
  Term l = tail;
  for (int i = n; i-- > 0;) l = cons(integer(i), std::move(l));
  Substitution s = Substitution().extend(tail, T("(end)"));
  Term out = walk_star(l, s);
  // Iterative reference: follow the spine.
  const Term* p = &out;
  for (int i = 0; i < n; ++i) {
    ASSERT_EQ(p->cons_cell().car, integer(i));
    p = &p->cons_cell().cdr;
  }
  EXPECT_EQ(*p, T("(end)"));
}

TEST(Unify, ConsAgainstList) {
  LogicVar a = fresh_var("car"), d = fresh_var("cdr");
  auto s = unify(T("(1 2)"), cons(a, d), Substitution());
  ASSERT_TRUE(s);
  EXPECT_EQ(walk_star(a, *s), integer(1));
  EXPECT_EQ(walk_star(d, *s), T("(2)"));
}

TEST(Unify, SameVariableAddsNothing) {
  LogicVar x = fresh_var();
  auto s = unify(x, x, Substitution());
  ASSERT_TRUE(s);
  EXPECT_TRUE(s->empty());
}

TEST(Unify, OccursCheck) {
  LogicVar x = fresh_var();
  EXPECT_FALSE(unify(x, cons(integer(1), x), Substitution()));
  EXPECT_TRUE(unify(x, cons(integer(1), x), Substitution(), UnifyOptions{false}));
}

TEST(Unify, AtomsAreStrict) {
  EXPECT_FALSE(unify(integer(2), decimal(2.0), Substitution()));
  EXPECT_TRUE(unify(integer(2), integer(2), Substitution()));
  EXPECT_FALSE(unify(Term(), integer(0), Substitution()));
}

TEST(Unify, ExprAgainstCons) {
  LogicVar r = fresh_var(), d = fresh_var();
  auto s = unify(T("(add 1 2)"), cons(r, d), Substitution());
  ASSERT_TRUE(s);
  EXPECT_EQ(walk_star(r, *s), sym("add"));
  EXPECT_EQ(walk_star(d, *s), T("(1 2)"));
  EXPECT_TRUE(walk_star(d, *s).is_cons());
}

TEST(Unify, GroundPairsSucceedIffEqual) {
  TermGen gen(17);
  int equal = 0;
  for (int i = 0; i < 500; ++i) {
    Term a = gen.term(3);
    Term b = gen.uniform(0, 2) == 0 ? a : gen.term(3);
    bool eq = a == b;
    equal += eq;
    EXPECT_EQ(unify(a, b, Substitution()).has_value(), eq) << P(a) << " / " << P(b);
  }
  EXPECT_GT(equal, 100);
}

// Cycle oracle: DFS over the binding graph looking for a back edge.
bool has_cycle(const Substitution& s) {
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> edges;
  s.for_each([&](const LogicVar& v, const Term& t) {
    std::vector<Term> stack{t};
    while (!stack.empty()) {
      Term cur = stack.back();
      stack.pop_back();
      if (cur.is_var()) edges[v.id].push_back(cur.var().id);
      else if (cur.is_cons()) {
        stack.push_back(cur.cons_cell().car);
        stack.push_back(cur.cons_cell().cdr);
      } else if (cur.is_expr()) {
        for (const Term& i : cur.expr().items()) stack.push_back(i);
      }
    }
  });
  std::unordered_map<std::uint64_t, int> color;
  std::function<bool(std::uint64_t)> visit = [&](std::uint64_t n) {
    color[n] = 1;
    for (auto m : edges[n]) {
      if (color[m] == 1) return true;
      if (color[m] == 0 && visit(m)) return true;
    }
    color[n] = 2;
    return false;
  };
  for (auto& [n, _] : edges)
    if (color[n] == 0 && visit(n)) return true;
  return false;
}

class UnifyProperties : public ::testing::TestWithParam<int> {};

TEST_P(UnifyProperties, SymmetrySoundnessMonotonicityAcyclicity) {
  auto vars = testing::make_vars(5);
  TermGen gen(1000 + GetParam(), vars);
  for (int i = 0; i < 100; ++i) {
    // Start from a small consistent substitution.
    Substitution base;
    if (auto s0 = unify(vars[0], gen.term(1), Substitution())) base = *s0;
    Term u = gen.term(3), v = gen.term(3);
    auto uv = unify(u, v, base);
    auto vu = unify(v, u, base);
    ASSERT_EQ(uv.has_value(), vu.has_value());
    if (!uv) continue;
    EXPECT_EQ(walk_star(u, *uv), walk_star(v, *uv));
    EXPECT_EQ(P(reify(list(u, v), *uv)), P(reify(list(u, v), *vu)));
    base.for_each([&](const LogicVar& x, const Term& t) { EXPECT_EQ(*uv->lookup(x), t); });
    EXPECT_FALSE(has_cycle(*uv));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, UnifyProperties, ::testing::Range(0, 4));

TEST(Occurs, Basics) {
  LogicVar x = fresh_var(), y = fresh_var();
  EXPECT_TRUE(occurs(x, list(integer(1), list(integer(2), Term(x))), Substitution()));
  EXPECT_TRUE(occurs(x, y, Substitution().extend(y, x)));
  EXPECT_FALSE(occurs(x, T("(1 (2 3))"), Substitution().extend(y, x)));
}

TEST(Reify, ConsPattern) {
  LogicVar d = fresh_var("cdr");
  EXPECT_EQ(reify(cons(integer(1), d), Substitution().extend(d, T("(2 3)"))), T("(1 2 3)"));
}

TEST(Reify, NamesInFirstEncounterOrder) {
  LogicVar x = fresh_var(), y = fresh_var();
  EXPECT_EQ(reify(x, Substitution()), Term(display_var(0)));
  Term r = reify(list(Term(x), Term(y), Term(x)), Substitution());
  EXPECT_EQ(r, list(Term(display_var(0)), Term(display_var(1)), Term(display_var(0))));
  EXPECT_EQ(reify(r, Substitution()), r);
}

TEST(StackSafety, HundredThousandElementList) {
  const int n = 100000;
  std::vector<Term> vars, ints;
  for (int i = 0; i < n; ++i) {
    vars.push_back(fresh_var());
    ints.push_back(integer(i));
  }
  Term lv = term_from_list(vars), li = term_from_list(ints);
  auto s = unify(lv, li, Substitution());
  ASSERT_TRUE(s);
  EXPECT_EQ(walk_star(lv, *s), li);
  EXPECT_EQ(reify(lv, *s), li);
  LogicVar x = fresh_var();
  EXPECT_FALSE(occurs(x, lv, *s));
  EXPECT_FALSE(unify(x, cons(integer(0), cons(lv, Term(x))), *s));
}

TEST(StackSafety, HundredThousandDeepLeftSpine) {
  const int n = 100000;
  LogicVar seed = fresh_var();
  Term a = testing::left_spine(n, seed);
  Term b = testing::left_spine(n, integer(42));
  auto s = unify(a, b, Substitution());
  ASSERT_TRUE(s);
  EXPECT_EQ(walk_star(seed, *s), integer(42));
  EXPECT_EQ(walk_star(a, *s), b);
  EXPECT_EQ(reify(a, *s), b);
  EXPECT_EQ(P(reify(testing::left_spine(3, fresh_var()), Substitution())), "(((?_0 . 0) . 1) . 2)");
  EXPECT_TRUE(occurs(seed, a, Substitution()));
}

}  // namespace
}  // namespace relkanren
