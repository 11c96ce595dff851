#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "relkanren/expr.hpp"
#include "relkanren/goal.hpp"

namespace relkanren {

/// A binary relation: builds the goal relating its two arguments.
using Relation2 = std::function<Goal(Term, Term)>;

// The relation eq itself, as a Relation2.
Relation2 eq_relation();

/// Raised when a goal is asked to run in a mode it refuses, such as
/// permuteo with neither side a proper list.
class GroundednessError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

Goal conso(Term a, Term d, Term pair);
Goal membero(Term x, Term coll);

/// Multiset equality of two proper lists. Ground/ground is a direct
/// multiset check; with one side known the distinct permutations of that
/// side are enumerated.
Goal permuteo(Term a, Term b);

/// v is reachable from u by one or more applications of rel. For a
/// non-fresh u the most-reduced form comes first.
Goal reduceo(Relation2 rel, Term u, Term v);

/// Relates whole term graphs: rel at the root, or componentwise through
/// operator/operand structure, or unchanged for non-application terms.
Goal walko(Relation2 rel, Term u, Term v, Relation2 rator_rel = eq_relation());

// walko variant that insists on at least one application of rel somewhere
// in the term. This is the lifting used for single-pass and fixed-point
// rewriting, where the unchanged term is not an answer.
Goal walko_strict(Relation2 rel, Term u, Term v, Relation2 rator_rel = eq_relation());

using TermPair = std::pair<Term, Term>;

// Distinct fresh variables in walk_star of both components.
std::size_t groundedness_score(const TermPair& pair, const Substitution& s);

/// Stable sort, most-ground pairs first.
std::vector<TermPair> ground_order(std::vector<TermPair> pairs, const Substitution& s);

/// eq, except that applications of the same commutative operator match
/// their operands up to permutation.
Goal eq_comm(Term u, Term v, const OperatorRegistry& reg);

}  // namespace relkanren
