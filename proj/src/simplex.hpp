#pragma once

// Two-phase tableau simplex over exact rationals with Bland's rule.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "linsys/exact_lp.hpp"
#include "linsys/rational.hpp"

namespace linsys::detail {

// Rows borrow their terms and right-hand side from the caller.
struct LpRow {
  const std::vector<Term>* terms = nullptr;
  std::optional<std::size_t> unit_var;  // extra term with coefficient 1
  bool equality = false;                // otherwise terms <= rhs
  const Rational* rhs = nullptr;
};

struct LpProblem {
  std::vector<bool> nonnegative;  // one entry per variable; false means free
  std::vector<LpRow> rows;
  std::vector<std::pair<std::size_t, Rational>> objective;  // maximized
};

enum class LpStatus { Infeasible, Optimal, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> x;
};

LpSolution solve_lp(const LpProblem& problem);

}  // namespace linsys::detail
