#include "relkanren/goal.hpp"

#include <variant>

namespace relkanren {

StorePtr ConstraintStoreSet::get(std::string_view kind) const {
  auto it = stores_.find(kind);
  return it == stores_.end() ? nullptr : it->second;
}

ConstraintStoreSet ConstraintStoreSet::with(StorePtr store) const {
  ConstraintStoreSet out = *this;
  std::string key(store->kind());
  if (store->empty()) {
    out.stores_.erase(key);
  } else {
    out.stores_[key] = std::move(store);
  }
  return out;
}

std::optional<ConstraintStoreSet> ConstraintStoreSet::revalidate(const Substitution& s) const {
  ConstraintStoreSet out;
  for (const auto& [kind, store] : stores_) {
    StorePtr next = store->revalidate(s);
    if (!next) return std::nullopt;
    if (!next->empty()) out.stores_.emplace(kind, std::move(next));
  }
  return out;
}

struct Stream::Node {
  Shape shape;
  std::optional<State> head;
  Thunk next;
};

Stream Stream::unit(State s) {
  return answer(std::move(s), [] { return Stream(); });
}

Stream Stream::answer(State head, Thunk rest) {
  return Stream(std::make_shared<const Node>(Node{Shape::kAnswer, std::move(head), std::move(rest)}));
}

Stream Stream::suspend(Thunk next) {
  return Stream(std::make_shared<const Node>(Node{Shape::kSuspended, std::nullopt, std::move(next)}));
}

Stream Stream::defer(Thunk next) {
  return Stream(std::make_shared<const Node>(Node{Shape::kDeferred, std::nullopt, std::move(next)}));
}

Stream::Shape Stream::shape() const { return node_ ? node_->shape : Shape::kEmpty; }

const State& Stream::head() const { return *node_->head; }

Stream Stream::step() const { return node_ ? node_->next() : Stream(); }

Stream mplus(Stream a, Stream b) {
  switch (a.shape()) {
    case Stream::Shape::kEmpty:
      return b;
    case Stream::Shape::kAnswer:
      return Stream::answer(a.head(), [a, b] { return mplus(a.step(), b); });
    case Stream::Shape::kDeferred:
      return Stream::defer([a, b] { return mplus(a.step(), b); });
    case Stream::Shape::kSuspended:
      return Stream::suspend([a, b] { return mplus(b, a.step()); });
  }
  return b;
}

Stream append(Stream a, Stream b) {
  switch (a.shape()) {
    case Stream::Shape::kEmpty:
      return b;
    case Stream::Shape::kAnswer:
      return Stream::answer(a.head(), [a, b] { return append(a.step(), b); });
    case Stream::Shape::kDeferred:
      return Stream::defer([a, b] { return append(a.step(), b); });
    case Stream::Shape::kSuspended:
      return Stream::suspend([a, b] { return append(a.step(), b); });
  }
  return b;
}

Stream bind(Stream s, Goal g) {
  switch (s.shape()) {
    case Stream::Shape::kEmpty:
      return s;
    case Stream::Shape::kAnswer: {
      Stream first = g(s.head());
      return mplus(std::move(first), Stream::defer([s, g] { return bind(s.step(), g); }));
    }
    case Stream::Shape::kDeferred:
      return Stream::defer([s, g] { return bind(s.step(), g); });
    case Stream::Shape::kSuspended:
      return Stream::suspend([s, g] { return bind(s.step(), g); });
  }
  return {};
}

Goal succeed() {
  return [](const State& st) { return Stream::unit(st); };
}

Goal fail() {
  return [](const State&) { return Stream(); };
}

Goal eq(Term u, Term v) {
  return [u = std::move(u), v = std::move(v)](const State& st) -> Stream {
    std::vector<Binding> added;
    auto s = unify_recording(u, v, st.subst, added);
    if (!s) return {};
    if (added.empty()) return Stream::unit(st);
    if (st.constraints.empty()) return Stream::unit(State{std::move(*s), {}});
    auto stores = st.constraints.revalidate(*s);
    if (!stores) return {};
    return Stream::unit(State{std::move(*s), std::move(*stores)});
  };
}

Goal lall(std::vector<Goal> goals) {
  if (goals.empty()) return succeed();
  if (goals.size() == 1) return std::move(goals.front());
  return [goals = std::move(goals)](const State& st) {
    Stream s = goals.front()(st);
    for (std::size_t i = 1; i < goals.size(); ++i) s = bind(std::move(s), goals[i]);
    return s;
  };
}

namespace {

// Disjuncts after the first are applied only when the stream reaches them.
template <Stream (*Combine)(Stream, Stream)>
Stream disjoin_from(const std::shared_ptr<const std::vector<Goal>>& goals, std::size_t i,
                    const State& st) {
  if (i + 1 == goals->size()) return (*goals)[i](st);
  Stream first = (*goals)[i](st);
  return Combine(std::move(first), Stream::defer([goals, i, st] {
                   return disjoin_from<Combine>(goals, i + 1, st);
                 }));
}

}  // namespace

Goal lany(std::vector<Goal> goals) {
  if (goals.empty()) return fail();
  if (goals.size() == 1) return std::move(goals.front());
  auto shared = std::make_shared<const std::vector<Goal>>(std::move(goals));
  return [shared](const State& st) { return disjoin_from<mplus>(shared, 0, st); };
}

Goal lany_ordered(std::vector<Goal> goals) {
  if (goals.empty()) return fail();
  if (goals.size() == 1) return std::move(goals.front());
  auto shared = std::make_shared<const std::vector<Goal>>(std::move(goals));
  return [shared](const State& st) { return disjoin_from<append>(shared, 0, st); };
}

Goal conde(std::vector<std::vector<Goal>> clauses) {
  std::vector<Goal> arms;
  arms.reserve(clauses.size());
  for (auto& clause : clauses) arms.push_back(lall(std::move(clause)));
  return lany(std::move(arms));
}

Goal delay(std::function<Goal()> thunk) {
  return [thunk = std::move(thunk)](const State& st) {
    return Stream::suspend([thunk, st] { return thunk()(st); });
  };
}

StateRun take(AnswerLimit n, std::uint64_t budget, Stream stream) {
  StateRun out;
  Stream cur = std::move(stream);
  while (!n.reached(out.states.size())) {
    if (cur.is_empty()) return out;
    if (cur.shape() == Stream::Shape::kAnswer) {
      out.states.push_back(cur.head());
      if (n.reached(out.states.size())) break;
    }
    if (budget != 0 && out.steps >= budget) {
      out.exhausted = true;
      return out;
    }
    ++out.steps;
    cur = cur.step();
  }
  return out;
}

BoundedRun run_bounded(AnswerLimit n, std::uint64_t budget, const Term& query,
                       std::vector<Goal> goals) {
  Stream s = lall(std::move(goals))(State{});
  StateRun states = take(n, budget, std::move(s));
  BoundedRun out;
  out.exhausted = states.exhausted;
  out.steps = states.steps;
  out.answers.reserve(states.states.size());
  for (const State& st : states.states) out.answers.push_back(reify(query, st.subst));
  return out;
}

std::vector<Term> run(AnswerLimit n, const Term& query, std::vector<Goal> goals) {
  return run_bounded(n, 0, query, std::move(goals)).answers;
}

}  // namespace relkanren
