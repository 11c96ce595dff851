#include "relkanren/term.hpp"

#include <atomic>
#include <cmath>
#include <unordered_map>

namespace relkanren {

namespace {

std::atomic<std::uint64_t> next_var_id{0};

void take_children(detail::Node& node, std::vector<std::shared_ptr<detail::Node>>& out);

}  // namespace

bool operator==(const Atom& a, const Atom& b) {
  if (a.value_.index() != b.value_.index()) return false;
  if (a.is_decimal()) {
    double x = a.decimal(), y = b.decimal();
    return x == y || (std::isnan(x) && std::isnan(y));
  }
  return a.value_ == b.value_;
}

namespace detail {

// Children are detached and released on an explicit stack; a naive
// recursive destructor overflows on long spines.
Node::~Node() {
  std::vector<std::shared_ptr<Node>> pending;
  take_children(*this, pending);
  while (!pending.empty()) {
    std::shared_ptr<Node> n = std::move(pending.back());
    pending.pop_back();
    if (n && n.use_count() == 1) take_children(*n, pending);
  }
}

}  // namespace detail

namespace {

struct ChildStealer {
  std::vector<std::shared_ptr<detail::Node>>& out;
  void steal(Term& t);
};

}  // namespace

// Term's node_ is private; this helper is the only place that moves it out.
class TermAccess {
 public:
  static const std::shared_ptr<detail::Node>& node(const Term& t) { return t.node_; }
  static std::shared_ptr<detail::Node> release(Term& t) {
    Term tmp;
    std::swap(tmp, t);
    return std::move(tmp.node_);
  }
};

namespace {

void ChildStealer::steal(Term& t) {
  if (!t.is_nil()) out.push_back(TermAccess::release(t));
}

void take_children(detail::Node& node, std::vector<std::shared_ptr<detail::Node>>& out) {
  ChildStealer s{out};
  if (auto* c = std::get_if<ConsCell>(&node.data)) {
    s.steal(c->car);
    s.steal(c->cdr);
  } else if (auto* e = std::get_if<ExprTerm>(&node.data)) {
    for (const Term& item : e->items()) s.steal(const_cast<Term&>(item));
  }
}

}  // namespace

Term::Term(Atom atom) : node_(std::make_shared<detail::Node>(std::move(atom))) {}

Term::Term(LogicVar var) : node_(std::make_shared<detail::Node>(std::move(var))) {}

Term::Kind Term::kind() const {
  if (!node_) return Kind::kNil;
  switch (node_->data.index()) {
    case 0: return Kind::kAtom;
    case 1: return Kind::kVar;
    case 2: return Kind::kCons;
    default: return Kind::kExpr;
  }
}

const Atom& Term::atom() const { return std::get<Atom>(node_->data); }
const LogicVar& Term::var() const { return std::get<LogicVar>(node_->data); }
const ConsCell& Term::cons_cell() const { return std::get<ConsCell>(node_->data); }
const ExprTerm& Term::expr() const { return std::get<ExprTerm>(node_->data); }

namespace {

class CacheTable {
 public:
  std::shared_ptr<detail::EvalCache> acquire(std::span<const Term> items) {
    std::size_t h = 0;
    for (const Term& t : items)
      h = h * 1000003u ^ std::hash<const void*>{}(t.identity());
    std::lock_guard lock(mutex_);
    auto& bucket = buckets_[h];
    for (auto it = bucket.begin(); it != bucket.end();) {
      auto cache = it->lock();
      if (!cache) {
        it = bucket.erase(it);
        continue;
      }
      if (matches(*cache, items)) return cache;
      ++it;
    }
    auto cache = std::make_shared<detail::EvalCache>();
    cache->items.reserve(items.size());
    for (const Term& t : items) {
      cache->items.push_back(TermAccess::node(t));
      cache->nil_items.push_back(t.is_nil());
    }
    bucket.push_back(cache);
    if (++inserts_ % 4096 == 0) sweep();
    return cache;
  }

 private:
  static bool matches(const detail::EvalCache& cache, std::span<const Term> items) {
    if (cache.items.size() != items.size()) return false;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].is_nil()) {
        if (!cache.nil_items[i]) return false;
      } else if (cache.nil_items[i] || cache.items[i].lock().get() != items[i].identity()) {
        return false;
      }
    }
    return true;
  }

  void sweep() {
    for (auto it = buckets_.begin(); it != buckets_.end();) {
      std::erase_if(it->second, [](const auto& w) { return w.expired(); });
      it = it->second.empty() ? buckets_.erase(it) : std::next(it);
    }
  }

  std::mutex mutex_;
  std::unordered_map<std::size_t, std::vector<std::weak_ptr<detail::EvalCache>>> buckets_;
  std::uint64_t inserts_ = 0;
};

CacheTable& cache_table() {
  static auto* table = new CacheTable;
  return *table;
}

}  // namespace

ExprTerm::ExprTerm(std::vector<Term> items)
    : items_(std::move(items)), cache_(cache_table().acquire(items_)) {}

Term ExprTerm::operand_list() const { return term_from_list(operands()); }

bool operator==(const Term& a, const Term& b) {
  std::vector<std::pair<Term, Term>> work;
  work.emplace_back(a, b);
  while (!work.empty()) {
    auto [x, y] = std::move(work.back());
    work.pop_back();
    if (x.identity() == y.identity()) continue;
    if (x.is_expr() && y.is_expr()) {
      const ExprTerm& ex = x.expr();
      const ExprTerm& ey = y.expr();
      if (ex.size() != ey.size()) return false;
      for (std::size_t i = 0; i < ex.size(); ++i) work.emplace_back(ex[i], ey[i]);
      continue;
    }
    if (x.is_pair() && y.is_pair()) {
      auto px = as_pair(x);
      auto py = as_pair(y);
      work.emplace_back(std::move(px->cdr), std::move(py->cdr));
      work.emplace_back(std::move(px->car), std::move(py->car));
      continue;
    }
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case Term::Kind::kNil: break;
      case Term::Kind::kAtom:
        if (!(x.atom() == y.atom())) return false;
        break;
      case Term::Kind::kVar:
        if (!(x.var() == y.var())) return false;
        break;
      default: return false;
    }
  }
  return true;
}

Term sym(std::string_view name) { return Atom(Symbol{std::string(name)}); }
Term integer(Integer value) { return Atom(std::move(value)); }
Term integer(long long value) { return Atom(Integer(value)); }
Term decimal(double value) { return Atom(value); }
Term str(std::string value) { return Atom(std::move(value)); }
Term boolean(bool value) { return Atom(value); }

LogicVar fresh_var(std::optional<std::string> hint) {
  return LogicVar{next_var_id.fetch_add(1, std::memory_order_relaxed), hint.value_or("")};
}

LogicVar display_var(std::size_t index) {
  return LogicVar{kDisplayVarBase + index, "_" + std::to_string(index)};
}

bool is_display_var(const LogicVar& v) { return v.id >= kDisplayVarBase; }

Term cons(Term car, Term cdr) {
  return Term(std::make_shared<detail::Node>(ConsCell{std::move(car), std::move(cdr)}));
}

Term make_expr(std::vector<Term> items) {
  if (items.empty()) throw std::invalid_argument("expression term needs an operator position");
  return Term(std::make_shared<detail::Node>(ExprTerm(std::move(items))));
}

std::optional<PairView> as_pair(const Term& t) {
  if (t.is_cons()) return PairView{t.cons_cell().car, t.cons_cell().cdr};
  if (t.is_expr()) return PairView{t.expr().head(), t.expr().operand_list()};
  return std::nullopt;
}

Term car(const Term& t) {
  if (t.is_cons()) return t.cons_cell().car;
  if (t.is_expr()) return t.expr().head();
  throw DecompositionError("car: term is not a pair");
}

Term cdr(const Term& t) {
  if (t.is_cons()) return t.cons_cell().cdr;
  if (t.is_expr()) return t.expr().operand_list();
  throw DecompositionError("cdr: term is not a pair");
}

Term term_from_list(std::span<const Term> items) {
  Term out;
  for (auto it = items.rbegin(); it != items.rend(); ++it) out = cons(*it, std::move(out));
  return out;
}

std::vector<Term> list_from_term(const Term& t) {
  if (t.is_expr()) {
    auto items = t.expr().items();
    return {items.begin(), items.end()};
  }
  std::vector<Term> out;
  const Term* cur = &t;
  while (cur->is_cons()) {
    out.push_back(cur->cons_cell().car);
    cur = &cur->cons_cell().cdr;
  }
  if (cur->is_expr()) {
    auto items = cur->expr().items();
    out.insert(out.end(), items.begin(), items.end());
    return out;
  }
  if (!cur->is_nil()) throw NotAListError("list_from_term: improper or variable-tailed list");
  return out;
}

bool is_proper_list(const Term& t) {
  const Term* cur = &t;
  while (cur->is_cons()) cur = &cur->cons_cell().cdr;
  return cur->is_nil() || cur->is_expr();
}

}  // namespace relkanren
