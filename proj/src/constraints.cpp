#include "relkanren/constraints.hpp"

namespace relkanren {

std::shared_ptr<const ConstraintStore> DisequalityStore::revalidate(const Substitution& s) const {
  std::vector<std::vector<Binding>> kept;
  for (const auto& set : prohibited_) {
    std::vector<Binding> added;
    std::optional<Substitution> cur = s;
    for (const auto& [var, value] : set) {
      cur = unify_recording(Term(var), value, *cur, added);
      if (!cur) break;
    }
    if (!cur) continue;            // can never be entailed any more
    if (added.empty()) return nullptr;  // entailed right now
    kept.push_back(std::move(added));
  }
  return std::make_shared<const DisequalityStore>(std::move(kept));
}

std::shared_ptr<const DisequalityStore> DisequalityStore::with(std::vector<Binding> set) const {
  auto next = prohibited_;
  next.push_back(std::move(set));
  return std::make_shared<const DisequalityStore>(std::move(next));
}

namespace {

TermPredicate atom_kind(bool (Atom::*test)() const) {
  return [test](const Term& t) -> std::optional<bool> {
    if (t.is_var()) return std::nullopt;
    return t.is_atom() && (t.atom().*test)();
  };
}

std::optional<bool> is_application(const Term& t) {
  if (t.is_var()) return std::nullopt;
  return t.is_pair();
}

}  // namespace

PredicateRegistry::PredicateRegistry() {
  preds_.emplace("integer", atom_kind(&Atom::is_integer));
  preds_.emplace("decimal", atom_kind(&Atom::is_decimal));
  preds_.emplace("number", atom_kind(&Atom::is_number));
  preds_.emplace("symbol", atom_kind(&Atom::is_symbol));
  preds_.emplace("string", atom_kind(&Atom::is_string));
  preds_.emplace("boolean", atom_kind(&Atom::is_boolean));
  preds_.emplace("cons", is_application);
  preds_.emplace("expr", is_application);
  preds_.emplace("nil", [](const Term& t) -> std::optional<bool> {
    if (t.is_var()) return std::nullopt;
    return t.is_nil();
  });
  preds_.emplace("atomic", [](const Term& t) -> std::optional<bool> {
    if (t.is_var()) return std::nullopt;
    return !t.is_pair();
  });
}

PredicateRegistry& PredicateRegistry::global() {
  static PredicateRegistry registry;
  return registry;
}

void PredicateRegistry::add(std::string name, TermPredicate pred) {
  if (contains(name)) throw std::invalid_argument("predicate already registered: " + name);
  preds_.emplace(std::move(name), std::move(pred));
}

const TermPredicate& PredicateRegistry::get(std::string_view name) const {
  auto it = preds_.find(name);
  if (it == preds_.end()) throw UnknownPredicateError("unknown predicate: " + std::string(name));
  return it->second;
}

bool PredicateRegistry::contains(std::string_view name) const { return preds_.find(name) != preds_.end(); }

namespace {

// nullopt: undecided; otherwise whether some predicate of the group holds.
std::optional<bool> check_group(const Term& walked, const std::vector<std::string>& any_of) {
  const auto& registry = PredicateRegistry::global();
  bool undecided = false;
  for (const auto& name : any_of) {
    auto r = registry.get(name)(walked);
    if (!r) {
      undecided = true;
    } else if (*r) {
      return true;
    }
  }
  if (undecided) return std::nullopt;
  return false;
}

}  // namespace

std::shared_ptr<const ConstraintStore> PredicateStore::revalidate(const Substitution& s) const {
  std::vector<Entry> kept;
  for (const auto& entry : entries_) {
    auto r = check_group(walk_star(entry.subject, s), entry.any_of);
    if (!r) {
      kept.push_back(entry);
    } else if (!*r) {
      return nullptr;
    }
  }
  return std::make_shared<const PredicateStore>(std::move(kept));
}

Goal neq(Term u, Term v) {
  return [u = std::move(u), v = std::move(v)](const State& st) -> Stream {
    std::vector<Binding> added;
    auto s = unify_recording(u, v, st.subst, added);
    if (!s) return Stream::unit(st);
    if (added.empty()) return {};
    auto current = std::static_pointer_cast<const DisequalityStore>(st.constraints.get(DisequalityStore::kKind));
    auto store = current ? current->with(std::move(added))
                         : std::make_shared<const DisequalityStore>(std::vector<std::vector<Binding>>{std::move(added)});
    return Stream::unit(State{st.subst, st.constraints.with(std::move(store))});
  };
}

Goal type_constraint_any(Term v, std::vector<std::string> kinds) {
  for (const auto& k : kinds) PredicateRegistry::global().get(k);
  return [v = std::move(v), kinds = std::move(kinds)](const State& st) -> Stream {
    auto r = check_group(walk_star(v, st.subst), kinds);
    if (r) return *r ? Stream::unit(st) : Stream();
    auto current = std::static_pointer_cast<const PredicateStore>(st.constraints.get(PredicateStore::kKind));
    std::vector<PredicateStore::Entry> entries = current ? current->entries() : std::vector<PredicateStore::Entry>{};
    entries.push_back({v, kinds});
    auto store = std::make_shared<const PredicateStore>(std::move(entries));
    return Stream::unit(State{st.subst, st.constraints.with(std::move(store))});
  };
}

Goal type_constraint(Term v, std::string_view kind) {
  return type_constraint_any(std::move(v), {std::string(kind)});
}

std::optional<ConstraintStoreSet> revalidate(const ConstraintStoreSet& stores, const Substitution& s) {
  return stores.revalidate(s);
}

}  // namespace relkanren
