#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "relkanren/constraints.hpp"
#include "relkanren/goal.hpp"
#include "relkanren/relations.hpp"
#include "test_util.hpp"

namespace relkanren {
namespace {

using testing::P;
using testing::T;

// Unary naturals: nil, (z), (z z), ... Infinite and productive.
Goal nato(Term x) {
  LogicVar d = fresh_var("d");
  return lany(eq(x, Term()), lall(eq(x, cons(sym("z"), d)), delay([d] { return nato(d); })));
}

Term unary(int n) {
  Term out;
  for (int i = 0; i < n; ++i) out = cons(sym("z"), out);
  return out;
}

std::vector<std::string> printed(const std::vector<Term>& ts) {
  std::vector<std::string> out;
  for (const Term& t : ts) out.push_back(P(t));
  return out;
}

std::set<std::string> printed_set(const std::vector<Term>& ts) {
  auto v = printed(ts);
  return {v.begin(), v.end()};
}

TEST(Eq, Basics) {
  LogicVar x = fresh_var();
  EXPECT_EQ(printed(run(1, x, {eq(x, integer(5))})), std::vector<std::string>{"5"});
  EXPECT_TRUE(run(1, x, {eq(integer(1), integer(2))}).empty());
  EXPECT_TRUE(run(1, x, {lall(neq(x, integer(1)), eq(x, integer(1)))}).empty());
}

TEST(Lall, Identities) {
  LogicVar x = fresh_var();
  State st{Substitution().extend(x, integer(7)), {}};
  Stream s = lall(std::vector<Goal>{})(st);
  ASSERT_EQ(s.shape(), Stream::Shape::kAnswer);
  EXPECT_EQ(walk(x, s.head().subst), integer(7));
  EXPECT_TRUE(s.step().is_empty());
  EXPECT_EQ(printed(run(ALL, x, {lall(eq(x, integer(1)), eq(x, integer(1)))})), std::vector<std::string>{"1"});
  EXPECT_TRUE(run(ALL, x, {lall(eq(x, integer(1)), eq(x, integer(2)))}).empty());
}

TEST(Lany, Basics) {
  LogicVar x = fresh_var();
  EXPECT_EQ(printed_set(run(ALL, x, {lany(eq(x, integer(1)), eq(x, integer(2)))})),
            (std::set<std::string>{"1", "2"}));
  EXPECT_TRUE(lany(std::vector<Goal>{})(State{}).is_empty());
  EXPECT_TRUE(run(ALL, x, {fail()}).empty());
}

TEST(Lany, InfiniteBranchDoesNotStarve) {
  LogicVar x = fresh_var();
  auto answers = printed(run(3, x, {lany(nato(x), eq(x, integer(0)))}));
  EXPECT_NE(std::find(answers.begin(), answers.end(), "0"), answers.end());
}

TEST(Lany, NatEnumeratorIsOrdered) {
  LogicVar x = fresh_var();
  auto answers = run(20, x, {nato(x)});
  ASSERT_EQ(answers.size(), 20u);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(answers[i], unary(i));
}

TEST(Lany, LazyDisjunctsAreNotBuiltEarly) {
  LogicVar x = fresh_var();
  int built = 0;
  Goal counted = [&built, x](const State& st) {
    ++built;
    return eq(x, integer(2))(st);
  };
  auto r = run(1, x, {lany(eq(x, integer(1)), counted)});
  EXPECT_EQ(printed(r), std::vector<std::string>{"1"});
  EXPECT_EQ(built, 0);
}

TEST(LanyOrdered, ExhaustsFirstBranchFirst) {
  LogicVar x = fresh_var();
  auto r = printed(run(ALL, x, {lany_ordered({membero(x, T("(1 2 3)")), membero(x, T("(4 5)"))})}));
  EXPECT_EQ(r, (std::vector<std::string>{"1", "2", "3", "4", "5"}));
}

TEST(Conde, ClauseShape) {
  LogicVar e = fresh_var(), r = fresh_var(), x = fresh_var(), a = fresh_var("a");
  Goal rule = conde({{eq(e, expr(sym("add"), x, x)), eq(r, expr(sym("mul"), integer(2), x))},
                     {eq(e, expr(sym("log"), expr(sym("exp"), x))), eq(r, x)}});
  auto ans = run(ALL, r, {eq(e, expr(sym("add"), a, a)), rule});
  ASSERT_EQ(ans.size(), 1u);
  EXPECT_EQ(P(ans[0]), "(mul 2 ?_0)");
}

TEST(Delay, Transparent) {
  LogicVar x = fresh_var();
  EXPECT_EQ(printed(run(ALL, x, {delay([x] { return eq(x, integer(1)); })})), std::vector<std::string>{"1"});
  Stream s = delay([x] { return eq(x, integer(1)); })(State{});
  EXPECT_EQ(s.shape(), Stream::Shape::kSuspended);
}

// Mutual recursion through delay: evens and odds as unary naturals.
Goal eveno(Term x);
Goal oddo(Term x) {
  LogicVar d = fresh_var();
  return lall(eq(x, cons(sym("z"), d)), delay([d] { return eveno(d); }));
}
Goal eveno(Term x) {
  LogicVar d = fresh_var();
  return lany(eq(x, Term()), lall(eq(x, cons(sym("z"), d)), delay([d] { return oddo(d); })));
}

TEST(Delay, MutualRecursion) {
  LogicVar x = fresh_var();
  auto evens = run(5, x, {eveno(x)});
  ASSERT_EQ(evens.size(), 5u);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(evens[i], unary(2 * i));
  EXPECT_EQ(run(1, x, {eq(x, unary(7)), eveno(x)}).size(), 0u);
  EXPECT_EQ(run(1, x, {eq(x, unary(7)), oddo(x)}).size(), 1u);
}

TEST(Run, DisequalityMembership) {
  LogicVar x = fresh_var();
  EXPECT_EQ(printed(run(ALL, x, {neq(x, integer(1)), neq(x, integer(3)), membero(x, T("(1 2 3)"))})),
            std::vector<std::string>{"2"});
  EXPECT_EQ(printed(run(ALL, x, {type_constraint(x, "integer"), membero(x, T("(1.1 2 3.2 4)"))})),
            (std::vector<std::string>{"2", "4"}));
}

TEST(Run, Pure) {
  LogicVar x = fresh_var(), y = fresh_var();
  auto goals = [&] { return std::vector<Goal>{lany(nato(x), membero(y, T("(a b c)")))}; };
  auto a = printed(run(15, list(Term(x), Term(y)), goals()));
  auto b = printed(run(15, list(Term(x), Term(y)), goals()));
  EXPECT_EQ(a, b);
}

// Interleaving completeness: for random finite goals A and the infinite
// enumerator B, every answer of A shows up in lany(B, A) within a bound.
TEST(Properties, InterleavingCompleteness) {
  testing::TermGen gen(2024);
  for (int i = 0; i < 300; ++i) {
    LogicVar x = fresh_var();
    int n = gen.uniform(1, 5);
    std::vector<Term> items;
    for (int k = 0; k < n; ++k) items.push_back(integer(gen.uniform(0, 50)));
    Term coll = term_from_list(items);
    auto expected = printed_set(run(ALL, x, {membero(x, coll)}));
    // The enumerator at depth k contributes one answer per visit.
    auto got = printed_set(run(4 * n + 4, x, {lany(nato(x), membero(x, coll))}));
    for (const auto& e : expected) ASSERT_TRUE(got.count(e)) << e << " missing in case " << i;
  }
}

// Every answer of lall(A, B) satisfies A and B when each is re-run with
// the answer substituted.
TEST(Properties, ConjunctionSoundness) {
  testing::TermGen gen(77);
  for (int i = 0; i < 300; ++i) {
    LogicVar x = fresh_var(), y = fresh_var();
    Term q = list(Term(x), Term(y));
    Term c1 = term_from_list(std::vector<Term>{integer(gen.uniform(0, 4)), integer(gen.uniform(0, 4)), integer(gen.uniform(0, 4))});
    Term c2 = term_from_list(std::vector<Term>{integer(gen.uniform(0, 4)), integer(gen.uniform(0, 4))});
    auto A = [&](Term a, Term b) { return lall(membero(a, c1), membero(b, c1)); };
    auto B = [&](Term a, Term b) { return lany(eq(a, b), membero(a, c2)); };
    for (const Term& ans : run(ALL, q, {A(x, y), B(x, y)})) {
      Term ax = car(ans), ay = car(cdr(ans));
      EXPECT_FALSE(run(1, q, {A(ax, ay)}).empty());
      EXPECT_FALSE(run(1, q, {B(ax, ay)}).empty());
    }
  }
}

TEST(Properties, LazinessCounter) {
  for (int k = 1; k <= 30; ++k) {
    auto calls = std::make_shared<int>(0);
    std::function<Goal(Term)> counted = [&counted, calls](Term x) -> Goal {
      LogicVar d = fresh_var();
      return lany(eq(x, Term()), lall(eq(x, cons(sym("z"), d)), delay([d, calls, &counted] {
                                          ++*calls;
                                          return counted(d);
                                        })));
    };
    LogicVar x = fresh_var();
    auto r = run(k, x, {counted(x)});
    ASSERT_EQ(r.size(), static_cast<std::size_t>(k));
    EXPECT_LE(*calls, k);
  }
}

TEST(Properties, BudgetMonotonicity) {
  LogicVar x = fresh_var(), y = fresh_var();
  Term q = list(Term(x), Term(y));
  auto goals = [&] { return std::vector<Goal>{lany(nato(x), membero(x, T("(a b c d)"))), nato(y)}; };
  std::vector<std::string> prev;
  for (std::uint64_t m = 1; m < 400; m += 7) {
    auto r = run_bounded(ALL, m, q, goals());
    EXPECT_TRUE(r.exhausted);
    EXPECT_LE(r.steps, m);
    auto cur = printed(r.answers);
    ASSERT_GE(cur.size(), prev.size());
    EXPECT_TRUE(std::equal(prev.begin(), prev.end(), cur.begin()));
    prev = cur;
  }
  EXPECT_GT(prev.size(), 5u);
}

TEST(Run, BudgetNotExhaustedOnFiniteStream) {
  LogicVar x = fresh_var();
  auto r = run_bounded(ALL, 1000, x, {membero(x, T("(1 2 3)"))});
  EXPECT_FALSE(r.exhausted);
  EXPECT_EQ(r.answers.size(), 3u);
}

TEST(Run, DistinctRunsOnThreads) {
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([&ok] {
      LogicVar x = fresh_var();
      if (run(50, x, {nato(x)}).size() == 50) ++ok;
    });
  for (auto& th : threads) th.join();
  EXPECT_EQ(ok.load(), 4);
}

}  // namespace
}  // namespace relkanren
