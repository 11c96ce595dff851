#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "relkanren/term.hpp"

namespace relkanren {

namespace detail {
struct TrieNode;
}  // namespace detail

/// Persistent triangular substitution: LogicVar -> Term.
///
/// Backed by a big-endian Patricia trie over variable ids, so extension
/// copies only one root-to-leaf path and old versions stay valid.
class Substitution {
 public:
  Substitution() = default;

  std::optional<Term> lookup(const LogicVar& v) const;
  bool contains(const LogicVar& v) const { return lookup(v).has_value(); }

  // New substitution with v bound to t; *this is unchanged.
  Substitution extend(const LogicVar& v, Term t) const;

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  // Visits bindings in ascending id order.
  void for_each(const std::function<void(const LogicVar&, const Term&)>& fn) const;

 private:
  std::shared_ptr<const detail::TrieNode> root_;
  std::size_t size_ = 0;
};

struct UnifyOptions {
  bool occurs_check = true;
};

/// A binding added by unification.
using Binding = std::pair<LogicVar, Term>;

Term walk(const Term& t, const Substitution& s);
Term walk_star(const Term& t, const Substitution& s);

bool occurs(const LogicVar& v, const Term& t, const Substitution& s);

std::optional<Substitution> unify(const Term& u, const Term& v, const Substitution& s,
                                  UnifyOptions options = {});

// Same as unify, also reporting the bindings that were added to s.
std::optional<Substitution> unify_recording(const Term& u, const Term& v, const Substitution& s,
                                            std::vector<Binding>& added,
                                            UnifyOptions options = {});

/// walk_star, then unbound variables become display variables _0, _1, ...
/// in left-to-right depth-first first-encounter order.
Term reify(const Term& t, const Substitution& s);

// Distinct unbound variables of walk_star(t, s), in first-encounter order.
std::vector<LogicVar> free_vars(const Term& t, const Substitution& s);

}  // namespace relkanren
