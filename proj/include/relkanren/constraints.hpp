#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "relkanren/goal.hpp"

namespace relkanren {

/// Prohibited binding-sets: each must never be entailed all at once.
class DisequalityStore : public ConstraintStore {
 public:
  static constexpr std::string_view kKind = "disequality";

  explicit DisequalityStore(std::vector<std::vector<Binding>> prohibited = {})
      : prohibited_(std::move(prohibited)) {}

  std::string_view kind() const override { return kKind; }
  std::shared_ptr<const ConstraintStore> revalidate(const Substitution& s) const override;
  bool empty() const override { return prohibited_.empty(); }

  const std::vector<std::vector<Binding>>& prohibited() const { return prohibited_; }
  std::shared_ptr<const DisequalityStore> with(std::vector<Binding> set) const;

 private:
  std::vector<std::vector<Binding>> prohibited_;
};

// A predicate over a (walked) term: true, false, or undecided while the
// term is still too fresh to tell.
using TermPredicate = std::function<std::optional<bool>(const Term&)>;

class UnknownPredicateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Named ground-term predicates. The built-in set is integer, decimal,
/// number, symbol, string, boolean, cons, nil, expr and atomic.
class PredicateRegistry {
 public:
  static PredicateRegistry& global();

  void add(std::string name, TermPredicate pred);
  const TermPredicate& get(std::string_view name) const;
  bool contains(std::string_view name) const;

 private:
  PredicateRegistry();
  std::map<std::string, TermPredicate, std::less<>> preds_;
};

/// Per-term predicate requirements. Each requirement is a group of
/// predicate names, at least one of which must hold.
class PredicateStore : public ConstraintStore {
 public:
  static constexpr std::string_view kKind = "predicate";

  struct Entry {
    Term subject;
    std::vector<std::string> any_of;
  };

  explicit PredicateStore(std::vector<Entry> entries = {}) : entries_(std::move(entries)) {}

  std::string_view kind() const override { return kKind; }
  std::shared_ptr<const ConstraintStore> revalidate(const Substitution& s) const override;
  bool empty() const override { return entries_.empty(); }

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

Goal neq(Term u, Term v);

// v must satisfy the named predicate. Throws UnknownPredicateError at
// construction for unregistered names.
Goal type_constraint(Term v, std::string_view kind);
// v must satisfy at least one of the named predicates.
Goal type_constraint_any(Term v, std::vector<std::string> kinds);

std::optional<ConstraintStoreSet> revalidate(const ConstraintStoreSet& stores, const Substitution& s);

}  // namespace relkanren
