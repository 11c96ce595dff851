#include "relkanren/subst.hpp"

#include <bit>
#include <unordered_map>
#include <unordered_set>

namespace relkanren {

namespace detail {

// Leaf when mask == 0, otherwise a branch on bit `mask` whose keys share
// `prefix` above that bit.
struct TrieNode {
  std::uint64_t prefix = 0;
  std::uint64_t mask = 0;
  LogicVar var;
  Term value;
  std::shared_ptr<const TrieNode> left;
  std::shared_ptr<const TrieNode> right;
};

}  // namespace detail

namespace {

using NodePtr = std::shared_ptr<const detail::TrieNode>;

std::uint64_t mask_above(std::uint64_t key, std::uint64_t m) { return key & ~((m << 1) - 1); }

bool is_zero_bit(std::uint64_t key, std::uint64_t m) { return (key & m) == 0; }

NodePtr make_leaf(const LogicVar& v, Term t) {
  auto n = std::make_shared<detail::TrieNode>();
  n->prefix = v.id;
  n->var = v;
  n->value = std::move(t);
  return n;
}

NodePtr make_branch(std::uint64_t prefix, std::uint64_t mask, NodePtr l, NodePtr r) {
  auto n = std::make_shared<detail::TrieNode>();
  n->prefix = prefix;
  n->mask = mask;
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

NodePtr join(std::uint64_t p1, NodePtr t1, std::uint64_t p2, NodePtr t2) {
  std::uint64_t m = std::bit_floor(p1 ^ p2);
  if (m == 0) m = 1;
  if (is_zero_bit(p1, m)) return make_branch(mask_above(p1, m), m, std::move(t1), std::move(t2));
  return make_branch(mask_above(p1, m), m, std::move(t2), std::move(t1));
}

// Depth is bounded by the key width, so recursion is fine here.
NodePtr insert(const NodePtr& t, const LogicVar& v, Term value, bool& added) {
  std::uint64_t k = v.id;
  if (!t) {
    added = true;
    return make_leaf(v, std::move(value));
  }
  if (t->mask == 0) {
    if (t->prefix == k) return make_leaf(v, std::move(value));
    added = true;
    return join(k, make_leaf(v, std::move(value)), t->prefix, t);
  }
  if (mask_above(k, t->mask) != t->prefix) {
    added = true;
    return join(k, make_leaf(v, std::move(value)), t->prefix, t);
  }
  if (is_zero_bit(k, t->mask))
    return make_branch(t->prefix, t->mask, insert(t->left, v, std::move(value), added), t->right);
  return make_branch(t->prefix, t->mask, t->left, insert(t->right, v, std::move(value), added));
}

}  // namespace

std::optional<Term> Substitution::lookup(const LogicVar& v) const {
  const detail::TrieNode* n = root_.get();
  while (n) {
    if (n->mask == 0) {
      if (n->prefix == v.id) return n->value;
      return std::nullopt;
    }
    if (mask_above(v.id, n->mask) != n->prefix) return std::nullopt;
    n = is_zero_bit(v.id, n->mask) ? n->left.get() : n->right.get();
  }
  return std::nullopt;
}

Substitution Substitution::extend(const LogicVar& v, Term t) const {
  Substitution out;
  bool added = false;
  out.root_ = insert(root_, v, std::move(t), added);
  out.size_ = size_ + (added ? 1 : 0);
  return out;
}

void Substitution::for_each(const std::function<void(const LogicVar&, const Term&)>& fn) const {
  std::vector<const detail::TrieNode*> stack;
  if (root_) stack.push_back(root_.get());
  while (!stack.empty()) {
    const detail::TrieNode* n = stack.back();
    stack.pop_back();
    if (n->mask == 0) {
      fn(n->var, n->value);
      continue;
    }
    stack.push_back(n->right.get());
    stack.push_back(n->left.get());
  }
}

Term walk(const Term& t, const Substitution& s) {
  Term cur = t;
  while (cur.is_var()) {
    auto next = s.lookup(cur.var());
    if (!next) break;
    cur = std::move(*next);
  }
  return cur;
}

namespace {

// Post-order rebuild of a term with every variable walked; `leaf` maps each
// non-pair walked subterm. Unchanged subtrees keep their node (and, for
// expression terms, their evaluation cache).
template <typename LeafFn>
Term rebuild(const Term& root, const Substitution& s, LeafFn&& leaf) {
  struct Frame {
    Term node;
    std::vector<Term> kids;
    std::size_t next = 0;
  };
  auto child_count = [](const Term& t) -> std::size_t {
    return t.is_cons() ? 2 : t.expr().size();
  };
  auto child_at = [](const Term& t, std::size_t i) -> const Term& {
    if (t.is_cons()) return i == 0 ? t.cons_cell().car : t.cons_cell().cdr;
    return t.expr()[i];
  };

  std::vector<Frame> frames;
  Term result;
  auto deliver = [&](Term value) {
    if (frames.empty()) {
      result = std::move(value);
    } else {
      frames.back().kids.push_back(std::move(value));
    }
  };

  Term start = walk(root, s);
  if (!start.is_pair()) return leaf(start);
  frames.push_back(Frame{start, {}, 0});
  while (!frames.empty()) {
    Frame& f = frames.back();
    std::size_t n = child_count(f.node);
    if (f.next < n) {
      Term child = walk(child_at(f.node, f.next), s);
      ++f.next;
      if (child.is_pair()) {
        f.kids.reserve(n);
        frames.push_back(Frame{std::move(child), {}, 0});
      } else {
        f.kids.push_back(leaf(child));
      }
      continue;
    }
    bool same = true;
    for (std::size_t i = 0; i < n && same; ++i)
      same = f.kids[i].identity() == child_at(f.node, i).identity();
    Term built;
    if (same) {
      built = f.node;
    } else if (f.node.is_cons()) {
      built = cons(std::move(f.kids[0]), std::move(f.kids[1]));
    } else {
      built = make_expr(std::move(f.kids));
    }
    frames.pop_back();
    deliver(std::move(built));
  }
  return result;
}

}  // namespace

Term walk_star(const Term& t, const Substitution& s) {
  return rebuild(t, s, [](const Term& leaf) { return leaf; });
}

Term reify(const Term& t, const Substitution& s) {
  std::unordered_map<std::uint64_t, std::size_t> names;
  return rebuild(t, s, [&names](const Term& leaf) -> Term {
    if (!leaf.is_var()) return leaf;
    auto [it, inserted] = names.try_emplace(leaf.var().id, names.size());
    return display_var(it->second);
  });
}

std::vector<LogicVar> free_vars(const Term& t, const Substitution& s) {
  std::vector<LogicVar> out;
  std::unordered_set<std::uint64_t> seen;
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term cur = walk(stack.back(), s);
    stack.pop_back();
    if (cur.is_var()) {
      if (seen.insert(cur.var().id).second) out.push_back(cur.var());
    } else if (cur.is_cons()) {
      stack.push_back(cur.cons_cell().cdr);
      stack.push_back(cur.cons_cell().car);
    } else if (cur.is_expr()) {
      auto items = cur.expr().items();
      for (auto it = items.rbegin(); it != items.rend(); ++it) stack.push_back(*it);
    }
  }
  return out;
}

bool occurs(const LogicVar& v, const Term& t, const Substitution& s) {
  std::unordered_set<const void*> visited;
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term cur = walk(stack.back(), s);
    stack.pop_back();
    if (cur.is_var()) {
      if (cur.var() == v) return true;
      continue;
    }
    if (!cur.is_pair() || !visited.insert(cur.identity()).second) continue;
    if (cur.is_cons()) {
      stack.push_back(cur.cons_cell().car);
      stack.push_back(cur.cons_cell().cdr);
    } else {
      for (const Term& item : cur.expr().items()) stack.push_back(item);
    }
  }
  return false;
}

std::optional<Substitution> unify_recording(const Term& u, const Term& v, const Substitution& s,
                                            std::vector<Binding>& added, UnifyOptions options) {
  Substitution out = s;
  std::vector<std::pair<Term, Term>> work;
  work.emplace_back(u, v);

  auto bind = [&](const LogicVar& x, const Term& t) {
    if (options.occurs_check && occurs(x, t, out)) return false;
    out = out.extend(x, t);
    added.emplace_back(x, t);
    return true;
  };

  while (!work.empty()) {
    auto [a0, b0] = std::move(work.back());
    work.pop_back();
    Term a = walk(a0, out);
    Term b = walk(b0, out);
    if (a.identity() == b.identity()) continue;
    if (a.is_var() && b.is_var() && a.var() == b.var()) continue;
    if (a.is_var()) {
      if (!bind(a.var(), b)) return std::nullopt;
      continue;
    }
    if (b.is_var()) {
      if (!bind(b.var(), a)) return std::nullopt;
      continue;
    }
    if (a.is_expr() && b.is_expr()) {
      const ExprTerm& ea = a.expr();
      const ExprTerm& eb = b.expr();
      if (ea.size() != eb.size()) return std::nullopt;
      for (std::size_t i = ea.size(); i-- > 0;) work.emplace_back(ea[i], eb[i]);
      continue;
    }
    if (a.is_pair() && b.is_pair()) {
      auto pa = as_pair(a);
      auto pb = as_pair(b);
      work.emplace_back(std::move(pa->cdr), std::move(pb->cdr));
      work.emplace_back(std::move(pa->car), std::move(pb->car));
      continue;
    }
    if (a.kind() != b.kind()) return std::nullopt;
    if (a.is_atom() && !(a.atom() == b.atom())) return std::nullopt;
    // Nil/Nil falls through as equal.
  }
  return out;
}

std::optional<Substitution> unify(const Term& u, const Term& v, const Substitution& s,
                                  UnifyOptions options) {
  std::vector<Binding> added;
  return unify_recording(u, v, s, added, options);
}

}  // namespace relkanren
