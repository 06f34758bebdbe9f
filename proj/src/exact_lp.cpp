#include "linsys/exact_lp.hpp"

#include <algorithm>
#include <sstream>

#include "linsys/errors.hpp"
#include "simplex.hpp"

namespace linsys {

std::size_t ConstraintSystem::add_variable(std::string name, bool integer) {
  names_.push_back(std::move(name));
  integer_.push_back(integer);
  return names_.size() - 1;
}

void ConstraintSystem::add(std::vector<Term> terms, Relation relation, Rational rhs) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  for (auto& term : terms) {
    if (term.var >= names_.size()) throw PreconditionError("constraint references an unknown variable");
    if (!merged.empty() && merged.back().var == term.var) {
      merged.back().coeff += term.coeff;
    } else {
      merged.push_back(std::move(term));
    }
  }
  std::erase_if(merged, [](const Term& t) { return sgn(t.coeff) == 0; });
  constraints_.push_back({std::move(merged), relation, std::move(rhs)});
}

void ConstraintSystem::add_greater_equal(std::vector<Term> terms, const Rational& rhs) {
  for (auto& t : terms) t.coeff = -t.coeff;
  add(std::move(terms), Relation::LessEqual, -rhs);
}

void ConstraintSystem::add_greater(std::vector<Term> terms, const Rational& rhs) {
  for (auto& t : terms) t.coeff = -t.coeff;
  add(std::move(terms), Relation::Less, -rhs);
}

std::optional<std::size_t> ConstraintSystem::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

bool ConstraintSystem::has_strict() const {
  return std::any_of(constraints_.begin(), constraints_.end(),
                     [](const LinearConstraint& c) { return c.relation == Relation::Less; });
}

std::vector<Rational> ConstraintSystem::coefficients(std::size_t i) const {
  std::vector<Rational> dense(names_.size());
  for (const auto& t : constraints_.at(i).terms) dense[t.var] = t.coeff;
  return dense;
}

bool ConstraintSystem::satisfied_by(const std::vector<Rational>& point) const {
  if (point.size() != names_.size()) return false;
  for (const auto& c : constraints_) {
    Rational lhs = 0;
    for (const auto& t : c.terms) lhs += t.coeff * point[t.var];
    switch (c.relation) {
      case Relation::Equal:
        if (lhs != c.rhs) return false;
        break;
      case Relation::LessEqual:
        if (lhs > c.rhs) return false;
        break;
      case Relation::Less:
        if (lhs >= c.rhs) return false;
        break;
    }
  }
  return true;
}

std::string ConstraintSystem::to_string() const {
  std::ostringstream out;
  for (const auto& c : constraints_) {
    bool first = true;
    for (const auto& t : c.terms) {
      const bool negative = sgn(t.coeff) < 0;
      const Rational magnitude = abs(t.coeff);
      out << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
      if (magnitude != 1) out << linsys::to_string(magnitude) << "*";
      out << names_[t.var];
      first = false;
    }
    if (first) out << "0";
    switch (c.relation) {
      case Relation::Equal: out << " = "; break;
      case Relation::LessEqual: out << " <= "; break;
      case Relation::Less: out << " < "; break;
    }
    out << linsys::to_string(c.rhs) << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

const Rational kOne(1);

detail::LpProblem closure_problem(const ConstraintSystem& system) {
  detail::LpProblem lp;
  lp.nonnegative.assign(system.variable_count(), false);
  lp.rows.reserve(system.constraints().size() + 1);
  for (const auto& c : system.constraints()) {
    lp.rows.push_back({&c.terms, std::nullopt, c.relation == Relation::Equal, &c.rhs});
  }
  return lp;
}

// max t  s.t.  a.x + t <= b on strict rows, t <= 1, other rows unchanged.
detail::LpSolution solve_slack_problem(const ConstraintSystem& system) {
  detail::LpProblem lp = closure_problem(system);
  const std::size_t slack = system.variable_count();
  lp.nonnegative.push_back(true);
  for (std::size_t i = 0; i < system.constraints().size(); ++i) {
    if (system.constraints()[i].relation == Relation::Less) lp.rows[i].unit_var = slack;
  }
  lp.rows.push_back({nullptr, slack, false, &kOne});
  lp.objective.emplace_back(slack, 1);
  return detail::solve_lp(lp);
}

// Optimum over the non-strict relaxation, which is the closure of the
// feasible region whenever that region is nonempty.
OptResult relaxed_extremum(const ConstraintSystem& system, std::size_t var, Direction direction,
                           bool check_attainment) {
  detail::LpProblem lp = closure_problem(system);
  const bool minimize = direction == Direction::Minimize;
  lp.objective.emplace_back(var, minimize ? -1 : 1);
  const auto solution = detail::solve_lp(lp);

  OptResult result;
  if (solution.status == detail::LpStatus::Infeasible) return result;
  if (solution.status == detail::LpStatus::Unbounded) {
    result.status = OptResult::Status::Unbounded;
    return result;
  }
  result.status = OptResult::Status::Bounded;
  result.value = minimize ? Rational(-solution.value) : solution.value;
  if (!check_attainment) return result;
  ConstraintSystem at_optimum = system;
  at_optimum.fix(var, *result.value);
  result.attained = is_strictly_feasible(at_optimum);
  return result;
}

// Branches in place on `system`, which is restored before returning.
std::optional<std::vector<Rational>> integer_search(ConstraintSystem& system) {
  auto point = find_point(system);
  if (!point) return std::nullopt;
  std::size_t var = 0;
  while (var < system.variable_count() && !(system.is_integer(var) && !is_integer((*point)[var]))) ++var;
  if (var == system.variable_count()) return point;

  // Branch on the first marked variable with a fractional witness value.
  const OptResult lo = relaxed_extremum(system, var, Direction::Minimize, false);
  const OptResult hi = relaxed_extremum(system, var, Direction::Maximize, false);
  if (!lo.bounded() || !hi.bounded()) {
    throw PreconditionError("integer variable '" + system.name(var) + "' is unbounded");
  }
  const std::size_t base = system.constraints().size();
  for (std::int64_t value = ceil_to_int(*lo.value); value <= floor_to_int(*hi.value); ++value) {
    system.fix(var, value);
    auto found = integer_search(system);
    system.truncate(base);
    if (found) return found;
  }
  return std::nullopt;
}

}  // namespace

bool is_strictly_feasible(const ConstraintSystem& system) {
  const auto solution = solve_slack_problem(system);
  return solution.status == detail::LpStatus::Optimal && sgn(solution.value) > 0;
}

std::optional<std::vector<Rational>> find_point(const ConstraintSystem& system) {
  auto solution = solve_slack_problem(system);
  if (solution.status != detail::LpStatus::Optimal || sgn(solution.value) <= 0) return std::nullopt;
  solution.x.pop_back();
  return std::move(solution.x);
}

OptResult extremize(const ConstraintSystem& system, std::size_t var, Direction direction,
                    bool check_attainment) {
  if (var >= system.variable_count()) throw PreconditionError("extremize: unknown variable");
  // The relaxation of an empty strict system may still be nonempty.
  if (system.has_strict() && !is_strictly_feasible(system)) return {};
  return relaxed_extremum(system, var, direction, check_attainment);
}

std::optional<std::vector<Rational>> find_integer_point(const ConstraintSystem& system) {
  ConstraintSystem work = system;
  return integer_search(work);
}

bool has_integer_point(const ConstraintSystem& system) { return find_integer_point(system).has_value(); }

}  // namespace linsys
