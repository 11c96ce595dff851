#include "relkanren/relations.hpp"

#include <algorithm>
#include <memory>

#include "relkanren/constraints.hpp"

namespace relkanren {

Relation2 eq_relation() {
  return [](Term a, Term b) { return eq(std::move(a), std::move(b)); };
}

Goal conso(Term a, Term d, Term pair) { return eq(cons(std::move(a), std::move(d)), std::move(pair)); }

Goal membero(Term x, Term coll) {
  Term tail = fresh_var();
  return conde({
      {conso(x, fresh_var(), coll)},
      {conso(fresh_var(), tail, coll), delay([x, tail] { return membero(x, tail); })},
  });
}

namespace {

// Class id per element (structurally equal elements share one), sorted, so
// std::next_permutation walks the distinct permutations.
struct PermutationSpace {
  std::vector<Term> reps;
  std::vector<std::size_t> classes;
};

PermutationSpace classify(const std::vector<Term>& items) {
  PermutationSpace space;
  for (const Term& item : items) {
    auto it = std::find(space.reps.begin(), space.reps.end(), item);
    if (it == space.reps.end()) {
      space.classes.push_back(space.reps.size());
      space.reps.push_back(item);
    } else {
      space.classes.push_back(static_cast<std::size_t>(it - space.reps.begin()));
    }
  }
  std::sort(space.classes.begin(), space.classes.end());
  return space;
}

Term permutation_term(const PermutationSpace& space, const std::vector<std::size_t>& order) {
  std::vector<Term> out;
  out.reserve(order.size());
  for (std::size_t c : order) out.push_back(space.reps[c]);
  return term_from_list(out);
}

Stream permutations_from(std::shared_ptr<const PermutationSpace> space, std::vector<std::size_t> order,
                         Term other, State st) {
  Stream here = eq(permutation_term(*space, order), other)(st);
  std::vector<std::size_t> next = order;
  if (!std::next_permutation(next.begin(), next.end())) return here;
  return append(std::move(here), Stream::suspend([space, next, other, st] {
                  return permutations_from(space, next, other, st);
                }));
}

Stream enumerate_permutations(const std::vector<Term>& items, const Term& other, const State& st) {
  auto space = std::make_shared<const PermutationSpace>(classify(items));
  return permutations_from(space, space->classes, other, st);
}

bool multiset_equal(const std::vector<Term>& a, const std::vector<Term>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const Term& x : a) {
    bool found = false;
    for (std::size_t i = 0; i < b.size() && !found; ++i) {
      if (!used[i] && b[i] == x) {
        used[i] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

Goal permuteo(Term a, Term b) {
  return [a = std::move(a), b = std::move(b)](const State& st) -> Stream {
    Term wa = walk_star(a, st.subst);
    Term wb = walk_star(b, st.subst);
    bool a_known = is_proper_list(wa);
    bool b_known = is_proper_list(wb);
    if (a_known && b_known) {
      auto la = list_from_term(wa);
      auto lb = list_from_term(wb);
      if (la.size() != lb.size()) return {};
      if (free_vars(cons(wa, wb), Substitution{}).empty())
        return multiset_equal(la, lb) ? Stream::unit(st) : Stream();
      return enumerate_permutations(la, wb, st);
    }
    if (a_known) return enumerate_permutations(list_from_term(wa), wb, st);
    if (b_known) return enumerate_permutations(list_from_term(wb), wa, st);
    throw GroundednessError("permuteo: neither argument is a proper list");
  };
}

Goal reduceo(Relation2 rel, Term u, Term v) {
  return [rel = std::move(rel), u = std::move(u), v = std::move(v)](const State& st) -> Stream {
    Term once = fresh_var();
    Goal apply_once = rel(u, once);
    Goal stop = eq(once, v);
    Goal again = delay([rel, once, v] { return reduceo(rel, once, v); });
    if (walk(u, st.subst).is_var()) {
      // Expanding: nothing to reduce yet, so relate the output first and
      // grow the input one application at a time.
      return lall(lany(stop, again), apply_once)(st);
    }
    return lall(apply_once, lany_ordered({again, stop}))(st);
  };
}

namespace {

Goal walk_operands(const Relation2& rel, const Relation2& rator_rel, const Term& du, const Term& dv);

Goal descend(const Relation2& rel, const Relation2& rator_rel, const Term& u, const Term& v,
             Goal (*operands)(const Relation2&, const Relation2&, const Term&, const Term&)) {
  return [=](const State& st) {
    Term ru = fresh_var(), du = fresh_var(), rv = fresh_var(), dv = fresh_var();
    return lall({conso(ru, du, u), conso(rv, dv, v), rator_rel(ru, rv), operands(rel, rator_rel, du, dv)})(st);
  };
}

Goal walk_operands(const Relation2& rel, const Relation2& rator_rel, const Term& du, const Term& dv) {
  Term a = fresh_var(), ta = fresh_var(), b = fresh_var(), tb = fresh_var();
  return conde({
      {eq(du, Term()), eq(dv, Term())},
      {conso(a, ta, du), conso(b, tb, dv), delay([=] { return walko(rel, a, b, rator_rel); }),
       delay([=] { return walk_operands(rel, rator_rel, ta, tb); })},
      {type_constraint(du, "atomic"), neq(du, Term()), eq(du, dv)},
  });
}

Goal walk_operands_strict(const Relation2& rel, const Relation2& rator_rel, const Term& du, const Term& dv) {
  Term a = fresh_var(), ta = fresh_var(), b = fresh_var(), tb = fresh_var();
  return conde({
      {conso(a, ta, du), conso(b, tb, dv), delay([=] { return walko_strict(rel, a, b, rator_rel); }),
       lany(eq(ta, tb), delay([=] { return walk_operands_strict(rel, rator_rel, ta, tb); }))},
      {conso(a, ta, du), conso(a, tb, dv), delay([=] { return walk_operands_strict(rel, rator_rel, ta, tb); })},
  });
}

}  // namespace

Goal walko(Relation2 rel, Term u, Term v, Relation2 rator_rel) {
  return lany({rel(u, v), descend(rel, rator_rel, u, v, walk_operands),
               lall(type_constraint(u, "atomic"), eq(u, v))});
}

Goal walko_strict(Relation2 rel, Term u, Term v, Relation2 rator_rel) {
  return lany(rel(u, v), descend(rel, rator_rel, u, v, walk_operands_strict));
}

std::size_t groundedness_score(const TermPair& pair, const Substitution& s) {
  return free_vars(cons(pair.first, pair.second), s).size();
}

std::vector<TermPair> ground_order(std::vector<TermPair> pairs, const Substitution& s) {
  std::vector<std::pair<std::size_t, TermPair>> scored;
  scored.reserve(pairs.size());
  for (auto& p : pairs) {
    std::size_t score = groundedness_score(p, s);
    scored.emplace_back(score, std::move(p));
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<TermPair> out;
  out.reserve(scored.size());
  for (auto& [score, p] : scored) out.push_back(std::move(p));
  return out;
}

Goal eq_comm(Term u, Term v, const OperatorRegistry& reg) {
  auto registry = std::make_shared<const OperatorRegistry>(reg);
  return [u = std::move(u), v = std::move(v), registry](const State& st) -> Stream {
    Term a = walk_star(u, st.subst);
    Term b = walk_star(v, st.subst);
    auto commutative_head = [&](const Term& t) -> const OperatorDef* {
      if (!t.is_pair() || !is_proper_list(t)) return nullptr;
      const OperatorDef* op = registry->operator_of(car(t));
      return op && op->commutative ? op : nullptr;
    };
    const OperatorDef* oa = commutative_head(a);
    const OperatorDef* ob = commutative_head(b);
    if (!oa || oa != ob) return eq(a, b)(st);

    auto la = list_from_term(cdr(a));
    auto lb = list_from_term(cdr(b));
    if (la.size() != lb.size()) return {};
    auto space = std::make_shared<const PermutationSpace>(classify(la));

    // One disjunct per distinct operand permutation; each matches its
    // pairs most-ground first.
    std::vector<Goal> arms;
    std::vector<std::size_t> order = space->classes;
    do {
      std::vector<TermPair> pairs;
      for (std::size_t i = 0; i < order.size(); ++i) pairs.emplace_back(space->reps[order[i]], lb[i]);
      std::vector<Goal> eqs;
      for (auto& [x, y] : ground_order(std::move(pairs), st.subst)) eqs.push_back(eq(x, y));
      arms.push_back(lall(std::move(eqs)));
    } while (std::next_permutation(order.begin(), order.end()));
    return lany(std::move(arms))(st);
  };
}

}  // namespace relkanren
