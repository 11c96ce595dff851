#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relkanren/subst.hpp"
#include "relkanren/term.hpp"

namespace relkanren {

/// One kind of constraint store carried by a State.
class ConstraintStore {
 public:
  virtual ~ConstraintStore() = default;
  virtual std::string_view kind() const = 0;
  // Pruned store if every constraint is still satisfiable under s, nullptr
  // if one is violated.
  virtual std::shared_ptr<const ConstraintStore> revalidate(const Substitution& s) const = 0;
  virtual bool empty() const = 0;
};

using StorePtr = std::shared_ptr<const ConstraintStore>;

/// At most one store per kind.
class ConstraintStoreSet {
 public:
  StorePtr get(std::string_view kind) const;
  ConstraintStoreSet with(StorePtr store) const;
  std::optional<ConstraintStoreSet> revalidate(const Substitution& s) const;
  bool empty() const { return stores_.empty(); }

 private:
  std::map<std::string, StorePtr, std::less<>> stores_;
};

struct State {
  Substitution subst;
  ConstraintStoreSet constraints;
};

/// Lazy stream of states.
///
/// Four node shapes: empty, an answer with a deferred rest, a suspension
/// (an interleaving point, where disjunction swaps branches), and a
/// transparent deferral that disjunction does not swap on.
class Stream {
 public:
  using Thunk = std::function<Stream()>;
  enum class Shape { kEmpty, kAnswer, kSuspended, kDeferred };

  Stream() = default;
  static Stream unit(State s);
  static Stream answer(State head, Thunk rest);
  static Stream suspend(Thunk next);
  static Stream defer(Thunk next);

  Shape shape() const;
  bool is_empty() const { return node_ == nullptr; }
  const State& head() const;
  // Next node: the rest after an answer, or the forced suspension/deferral.
  Stream step() const;

 private:
  struct Node;
  explicit Stream(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Fair disjunction of two streams; swaps at suspensions.
Stream mplus(Stream a, Stream b);
// Ordered disjunction: everything from a, then b.
Stream append(Stream a, Stream b);

using Goal = std::function<Stream(const State&)>;

Stream bind(Stream s, Goal g);

Goal succeed();
Goal fail();

Goal eq(Term u, Term v);

Goal lall(std::vector<Goal> goals);
Goal lany(std::vector<Goal> goals);
// Disjunction that exhausts each goal before trying the next.
Goal lany_ordered(std::vector<Goal> goals);
Goal conde(std::vector<std::vector<Goal>> clauses);
Goal delay(std::function<Goal()> thunk);

template <typename... Gs>
Goal lall(Goal g, Gs... rest) {
  return lall(std::vector<Goal>{std::move(g), std::move(rest)...});
}

template <typename... Gs>
Goal lany(Goal g, Gs... rest) {
  return lany(std::vector<Goal>{std::move(g), std::move(rest)...});
}

struct AllAnswers {};
inline constexpr AllAnswers ALL{};

class AnswerLimit {
 public:
  AnswerLimit(std::size_t n) : n_(n) {}  // NOLINT(google-explicit-constructor)
  AnswerLimit(AllAnswers) {}             // NOLINT(google-explicit-constructor)

  bool unlimited() const { return !n_.has_value(); }
  bool reached(std::size_t count) const { return n_ && count >= *n_; }

 private:
  std::optional<std::size_t> n_;
};

/// Runs the conjunction of goals from an empty state and reifies query in
/// each answer state.
std::vector<Term> run(AnswerLimit n, const Term& query, std::vector<Goal> goals);

struct BoundedRun {
  std::vector<Term> answers;
  bool exhausted = false;
  std::uint64_t steps = 0;
};

/// run with a step budget: one step per stream node evaluated. A budget of
/// zero means unlimited.
BoundedRun run_bounded(AnswerLimit n, std::uint64_t budget, const Term& query,
                       std::vector<Goal> goals);

// Raw answer states, for callers that need more than the reified query.
struct StateRun {
  std::vector<State> states;
  bool exhausted = false;
  std::uint64_t steps = 0;
};
StateRun take(AnswerLimit n, std::uint64_t budget, Stream stream);

}  // namespace relkanren
