#include "relkanren/expr.hpp"

#include <cmath>
#include <variant>

namespace relkanren {

namespace {

using Number = std::variant<Integer, double>;

Number as_number(const Term& t, std::string_view op) {
  if (t.is_atom()) {
    if (t.atom().is_integer()) return t.atom().integer();
    if (t.atom().is_decimal()) return t.atom().decimal();
  }
  throw EvalError(std::string(op) + ": operand is not a number");
}

double to_double(const Number& n) {
  if (auto* i = std::get_if<Integer>(&n)) return i->convert_to<double>();
  return std::get<double>(n);
}

Term to_term(const Number& n) {
  if (auto* i = std::get_if<Integer>(&n)) return integer(*i);
  return decimal(std::get<double>(n));
}

template <typename IntOp, typename DecOp>
Number combine(const Number& a, const Number& b, IntOp iop, DecOp dop) {
  if (std::holds_alternative<Integer>(a) && std::holds_alternative<Integer>(b))
    return iop(std::get<Integer>(a), std::get<Integer>(b));
  return dop(to_double(a), to_double(b));
}

Number add2(const Number& a, const Number& b) {
  return combine(a, b, [](const Integer& x, const Integer& y) { return Number(Integer(x + y)); },
                 [](double x, double y) { return Number(x + y); });
}

Number mul2(const Number& a, const Number& b) {
  return combine(a, b, [](const Integer& x, const Integer& y) { return Number(Integer(x * y)); },
                 [](double x, double y) { return Number(x * y); });
}

Number sub2(const Number& a, const Number& b) {
  return combine(a, b, [](const Integer& x, const Integer& y) { return Number(Integer(x - y)); },
                 [](double x, double y) { return Number(x - y); });
}

Number div2(const Number& a, const Number& b) {
  if (to_double(b) == 0.0) throw EvalError("div: division by zero");
  return combine(
      a, b,
      [](const Integer& x, const Integer& y) {
        if (x % y == 0) return Number(Integer(x / y));
        return Number(x.convert_to<double>() / y.convert_to<double>());
      },
      [](double x, double y) { return Number(x / y); });
}

Term fold(std::span<const Term> args, std::string_view op, Number init, Number (*f)(const Number&, const Number&)) {
  Number acc = std::move(init);
  for (const Term& a : args) acc = f(acc, as_number(a, op));
  return to_term(acc);
}

Term sum_of(const Term& operand) {
  if (operand.is_atom()) return to_term(as_number(operand, "sum"));
  Number acc = Integer(0);
  for (const Term& item : list_from_term(operand)) acc = add2(acc, as_number(item, "sum"));
  return to_term(acc);
}

}  // namespace

OperatorRegistry OperatorRegistry::arithmetic() {
  OperatorRegistry reg;
  reg.add({"add", std::nullopt,
           [](std::span<const Term> a) { return fold(a, "add", Integer(0), add2); }, true, true});
  reg.add({"mul", std::nullopt,
           [](std::span<const Term> a) { return fold(a, "mul", Integer(1), mul2); }, true, true});
  reg.add({"sub", 2,
           [](std::span<const Term> a) { return to_term(sub2(as_number(a[0], "sub"), as_number(a[1], "sub"))); }});
  reg.add({"div", 2,
           [](std::span<const Term> a) { return to_term(div2(as_number(a[0], "div"), as_number(a[1], "div"))); }});
  reg.add({"log", 1, [](std::span<const Term> a) {
             double x = to_double(as_number(a[0], "log"));
             if (x <= 0.0) throw EvalError("log: argument must be positive");
             return decimal(std::log(x));
           }});
  reg.add({"exp", 1, [](std::span<const Term> a) { return decimal(std::exp(to_double(as_number(a[0], "exp")))); }});
  reg.add({"sum", 1, [](std::span<const Term> a) { return sum_of(a[0]); }});
  return reg;
}

void OperatorRegistry::add(OperatorDef def) {
  if (find(def.name)) throw std::invalid_argument("operator already registered: " + def.name);
  std::string name = def.name;
  ops_.emplace(std::move(name), std::move(def));
}

const OperatorDef* OperatorRegistry::find(std::string_view name) const {
  auto it = ops_.find(name);
  return it == ops_.end() ? nullptr : &it->second;
}

const OperatorDef* OperatorRegistry::operator_of(const Term& head) const {
  if (!head.is_atom() || !head.atom().is_symbol()) return nullptr;
  return find(head.atom().symbol().name);
}

Term slice(const Term& e, std::size_t begin, std::size_t end) {
  if (!e.is_expr()) throw std::invalid_argument("slice: not an expression term");
  auto items = e.expr().items();
  if (begin > end || end > items.size()) throw std::out_of_range("slice: bad range");
  return make_expr(std::vector<Term>(items.begin() + begin, items.begin() + end));
}

namespace {

Term eval_value(const Term& t, const OperatorRegistry& reg);

Term apply_operator(std::span<const Term> items, const OperatorRegistry& reg) {
  const Term& head = items.front();
  if (head.is_var()) throw NonGroundError("eval: operator position is a logic variable");
  const OperatorDef* op = reg.operator_of(head);
  if (!op) throw EvalError("eval: unbound operator");
  std::size_t argc = items.size() - 1;
  if (op->arity && *op->arity != argc)
    throw EvalError("eval: " + op->name + " expects " + std::to_string(*op->arity) + " operands, got " +
                    std::to_string(argc));
  std::vector<Term> args;
  args.reserve(argc);
  for (const Term& operand : items.subspan(1)) args.push_back(eval_value(operand, reg));
  return op->eval_fn(args);
}

Term eval_cached(const Term& e, const OperatorRegistry& reg) {
  auto& cache = e.expr().cache();
  {
    std::lock_guard lock(cache.mutex);
    if (cache.value) return *cache.value;
  }
  Term value = apply_operator(e.expr().items(), reg);
  std::lock_guard lock(cache.mutex);
  if (!cache.value) cache.value = std::move(value);
  return *cache.value;
}

Term eval_value(const Term& t, const OperatorRegistry& reg) {
  switch (t.kind()) {
    case Term::Kind::kVar:
      throw NonGroundError("eval: term contains a logic variable");
    case Term::Kind::kNil:
    case Term::Kind::kAtom:
      return t;
    case Term::Kind::kExpr:
      return eval_cached(t, reg);
    case Term::Kind::kCons:
      break;
  }
  if (is_proper_list(t) && reg.operator_of(t.cons_cell().car)) {
    auto items = list_from_term(t);
    return apply_operator(items, reg);
  }
  // Data list: evaluate the elements along the spine.
  std::vector<Term> elems;
  const Term* cur = &t;
  while (cur->is_cons()) {
    elems.push_back(eval_value(cur->cons_cell().car, reg));
    cur = &cur->cons_cell().cdr;
  }
  Term out = eval_value(*cur, reg);
  for (auto it = elems.rbegin(); it != elems.rend(); ++it) out = cons(std::move(*it), std::move(out));
  return out;
}

}  // namespace

Term eval_expr(const Term& e, const OperatorRegistry& reg) { return eval_value(e, reg); }

Term expr_of_application(const Term& rator, std::span<const Term> rands) {
  std::vector<Term> items;
  items.reserve(rands.size() + 1);
  items.push_back(rator);
  items.insert(items.end(), rands.begin(), rands.end());
  return make_expr(std::move(items));
}

std::pair<Term, std::vector<Term>> application_of_expr(const Term& e) {
  if (!e.is_expr()) throw std::invalid_argument("application_of_expr: not an expression term");
  auto ops = e.expr().operands();
  return {e.expr().head(), std::vector<Term>(ops.begin(), ops.end())};
}

}  // namespace relkanren
