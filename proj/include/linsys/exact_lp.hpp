#pragma once

// Exact rational linear feasibility and optimization with strict
// inequalities and bounded integer search.
//
// Strict rows a.x < b are handled with a single shared slack t: the system
// is strictly feasible iff max t subject to a.x + t <= b (strict rows) and
// the non-strict rows is positive. Optimization is over the closure of the
// feasible region.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linsys/rational.hpp"

namespace linsys {

enum class Relation { Equal, LessEqual, Less };

struct Term {
  std::size_t var = 0;
  Rational coeff;
};

struct LinearConstraint {
  std::vector<Term> terms;  // sorted by variable, no zero coefficients
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

class ConstraintSystem {
 public:
  std::size_t add_variable(std::string name, bool integer = false);

  /// Adds sum(terms) relation rhs. Repeated variables are merged and zero
  /// coefficients dropped.
  void add(std::vector<Term> terms, Relation relation, Rational rhs);
  void add_equal(std::vector<Term> terms, Rational rhs) { add(std::move(terms), Relation::Equal, std::move(rhs)); }
  void add_less_equal(std::vector<Term> terms, Rational rhs) { add(std::move(terms), Relation::LessEqual, std::move(rhs)); }
  void add_less(std::vector<Term> terms, Rational rhs) { add(std::move(terms), Relation::Less, std::move(rhs)); }
  void add_greater_equal(std::vector<Term> terms, const Rational& rhs);
  void add_greater(std::vector<Term> terms, const Rational& rhs);
  void fix(std::size_t var, const Rational& value) { add_equal({{var, 1}}, value); }
  /// Drops every constraint after the first `count`.
  void truncate(std::size_t count) {
    if (count < constraints_.size()) constraints_.resize(count);
  }

  std::size_t variable_count() const { return names_.size(); }
  const std::string& name(std::size_t var) const { return names_.at(var); }
  bool is_integer(std::size_t var) const { return integer_.at(var); }
  std::optional<std::size_t> find(const std::string& name) const;
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  bool has_strict() const;

  /// Dense coefficient vector of constraint i.
  std::vector<Rational> coefficients(std::size_t i) const;
  /// True when `point` satisfies every constraint exactly (strict rows strictly).
  bool satisfied_by(const std::vector<Rational>& point) const;

  /// One constraint per line in "lhs relop rhs" form.
  std::string to_string() const;

 private:
  std::vector<std::string> names_;
  std::vector<bool> integer_;
  std::vector<LinearConstraint> constraints_;
};

enum class Direction { Minimize, Maximize };

struct OptResult {
  enum class Status { Infeasible, Bounded, Unbounded };

  Status status = Status::Infeasible;
  std::optional<Rational> value;  // present iff Bounded
  bool attained = false;          // optimum reached by a strictly feasible point

  bool bounded() const { return status == Status::Bounded; }
};

bool is_strictly_feasible(const ConstraintSystem& system);

/// Infimum/supremum of one variable over the closure of the feasible region.
/// With `check_attainment` false the attained flag is left false and one
/// LP solve is saved.
OptResult extremize(const ConstraintSystem& system, std::size_t var, Direction direction,
                    bool check_attainment = true);

/// Slack-maximal witness (Bland's rule vertex of the slack LP), or nullopt
/// if the system is not strictly feasible. Integer marks are ignored.
std::optional<std::vector<Rational>> find_point(const ConstraintSystem& system);

/// Depth-first branching on integer-marked variables: at each node the
/// first marked variable (by index) whose witness value is fractional is
/// fixed to each integer of its closure range, lowest first; strictly
/// infeasible nodes are pruned. Returns a witness with every marked
/// variable integral. Throws PreconditionError if a variable that must be
/// branched on is unbounded.
std::optional<std::vector<Rational>> find_integer_point(const ConstraintSystem& system);

bool has_integer_point(const ConstraintSystem& system);

}  // namespace linsys
