#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace relkanren {

using Integer = boost::multiprecision::cpp_int;

struct Symbol {
  std::string name;
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

// An atom: symbol, exact integer, 64-bit decimal, string, or boolean.
// Equality is syntactic: integer 2 and decimal 2.0 are different atoms.
class Atom {
 public:
  using Value = std::variant<Symbol, Integer, double, std::string, bool>;

  explicit Atom(Value v) : value_(std::move(v)) {}

  bool is_symbol() const { return std::holds_alternative<Symbol>(value_); }
  bool is_integer() const { return std::holds_alternative<Integer>(value_); }
  bool is_decimal() const { return std::holds_alternative<double>(value_); }
  bool is_string() const { return std::holds_alternative<std::string>(value_); }
  bool is_boolean() const { return std::holds_alternative<bool>(value_); }
  bool is_number() const { return is_integer() || is_decimal(); }

  const Symbol& symbol() const { return std::get<Symbol>(value_); }
  const Integer& integer() const { return std::get<Integer>(value_); }
  double decimal() const { return std::get<double>(value_); }
  const std::string& string() const { return std::get<std::string>(value_); }
  bool boolean() const { return std::get<bool>(value_); }

  const Value& value() const { return value_; }

  friend bool operator==(const Atom& a, const Atom& b);

 private:
  Value value_;
};

// Identity is by id; the hint is display-only.
struct LogicVar {
  std::uint64_t id = 0;
  std::string hint;

  friend bool operator==(const LogicVar& a, const LogicVar& b) { return a.id == b.id; }
};

class Term;
class ExprTerm;
struct ConsCell;

namespace detail {
struct Node;
}  // namespace detail

/// Thrown by car/cdr when the term has no pair structure to descend into.
class DecompositionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by list_from_term on improper or variable-tailed spines.
class NotAListError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable term handle. A default-constructed Term is Nil.
///
/// Terms share structure through reference counting. Destruction, equality
/// and the substitution-level traversals are iterative, so spines that are
/// hundreds of thousands of cells deep are safe to build and drop.
class Term {
 public:
  enum class Kind { kNil, kAtom, kVar, kCons, kExpr };

  Term() = default;
  Term(Atom atom);       // NOLINT(google-explicit-constructor)
  Term(LogicVar var);    // NOLINT(google-explicit-constructor)

  Kind kind() const;
  bool is_nil() const { return node_ == nullptr; }
  bool is_atom() const { return kind() == Kind::kAtom; }
  bool is_var() const { return kind() == Kind::kVar; }
  bool is_cons() const { return kind() == Kind::kCons; }
  bool is_expr() const { return kind() == Kind::kExpr; }
  // Cons cell or expression term: anything car/cdr can decompose.
  bool is_pair() const { return is_cons() || is_expr(); }

  const Atom& atom() const;
  const LogicVar& var() const;
  const ConsCell& cons_cell() const;
  const ExprTerm& expr() const;

  // Node address; equal handles share structure. Null for Nil.
  const void* identity() const { return node_.get(); }

  // Structural equality. An expression term equals the proper cons spine
  // (operator . operands) with the same elements.
  friend bool operator==(const Term& a, const Term& b);

 private:
  friend class ExprTerm;
  friend class TermAccess;
  friend Term cons(Term car, Term cdr);
  friend Term make_expr(std::vector<Term> items);
  explicit Term(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

  std::shared_ptr<detail::Node> node_;
};

struct ConsCell {
  Term car;
  Term cdr;
};

namespace detail {
struct Node;
struct EvalCache {
  std::mutex mutex;
  std::optional<Term> value;
  // The item nodes this cache belongs to; nil items stay empty.
  std::vector<std::weak_ptr<Node>> items;
  std::vector<bool> nil_items;
};
}  // namespace detail

/// Operator application: items[0] is the operator, items[1..] the operands.
/// Carries a memo cell for its evaluated value (see expr.hpp). Expression
/// terms built from the identical item nodes share one memo cell.
class ExprTerm {
 public:
  explicit ExprTerm(std::vector<Term> items);

  std::size_t size() const { return items_.size(); }
  const Term& operator[](std::size_t i) const { return items_.at(i); }
  std::span<const Term> items() const { return items_; }
  const Term& head() const { return items_.front(); }
  std::span<const Term> operands() const { return std::span<const Term>(items_).subspan(1); }

  // Proper list of the operands; the cdr projection.
  Term operand_list() const;

  detail::EvalCache& cache() const { return *cache_; }

 private:
  std::vector<Term> items_;
  std::shared_ptr<detail::EvalCache> cache_;
};

namespace detail {
struct Node {
  std::variant<Atom, LogicVar, ConsCell, ExprTerm> data;

  template <typename T>
  explicit Node(T&& value) : data(std::forward<T>(value)) {}
  ~Node();

  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;
};
}  // namespace detail

// Atom constructors.
Term sym(std::string_view name);
Term integer(Integer value);
Term integer(long long value);
Term decimal(double value);
Term str(std::string value);
Term boolean(bool value);

/// Returns a variable whose id has never been issued before.
LogicVar fresh_var(std::optional<std::string> hint = std::nullopt);

// Variables used by reify for unbound positions: ids live in a reserved
// range that fresh_var never reaches.
inline constexpr std::uint64_t kDisplayVarBase = std::uint64_t{1} << 63;
LogicVar display_var(std::size_t index);
bool is_display_var(const LogicVar& v);

Term cons(Term car, Term cdr);
Term car(const Term& t);
Term cdr(const Term& t);

Term term_from_list(std::span<const Term> items);
std::vector<Term> list_from_term(const Term& t);

// Proper list with ground spine (Nil-terminated)?
bool is_proper_list(const Term& t);

// Builds an expression term; throws std::invalid_argument on zero items.
Term make_expr(std::vector<Term> items);

// (car . cdr) view of a cons cell or expression term.
struct PairView {
  Term car;
  Term cdr;
};
std::optional<PairView> as_pair(const Term& t);

template <typename... Ts>
Term list(Ts&&... items) {
  std::vector<Term> v{Term(std::forward<Ts>(items))...};
  return term_from_list(v);
}

template <typename... Ts>
Term expr(Ts&&... items) {
  return make_expr(std::vector<Term>{Term(std::forward<Ts>(items))...});
}

}  // namespace relkanren
