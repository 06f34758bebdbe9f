#include "simplex.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <type_traits>

#include "small_rational.hpp"

namespace linsys::detail {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

template <class Num>
bool is_zero(const Num& x) {
  return sgn(x) == 0;
}

Rational to_rational(const Rational& x) { return x; }
Rational to_rational(const SmallRational& x) { return x.to_rational(); }

template <class Num>
Num convert(const Rational& x) {
  if constexpr (std::is_same_v<Num, Rational>) {
    return x;
  } else {
    return Num::from(x);
  }
}

template <class Num>
class Tableau {
 public:
  Tableau(std::size_t row_count, std::size_t column_count)
      : width_(column_count + 1),
        rows_(row_count, std::vector<Num>(width_)),
        objective_(width_),
        auxiliary_(width_),
        basis_(row_count, kNone),
        defining_(row_count, false),
        alive_(row_count, true),
        allowed_(column_count, true) {}

  std::size_t rhs() const { return width_ - 1; }
  std::vector<Num>& row(std::size_t r) { return rows_[r]; }
  std::vector<Num>& objective() { return objective_; }
  std::vector<Num>& auxiliary() { return auxiliary_; }
  std::size_t row_count() const { return rows_.size(); }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  bool defining(std::size_t r) const { return defining_[r]; }
  void set_defining(std::size_t r) { defining_[r] = true; }
  bool alive(std::size_t r) const { return alive_[r]; }
  void kill(std::size_t r) { alive_[r] = false; }
  void forbid(std::size_t column) { allowed_[column] = false; }

  void pivot(std::size_t r, std::size_t c) {
    auto& pr = rows_[r];
    if (!(pr[c] == Num(1))) {
      const Num inverse = Num(1) / pr[c];
      for (auto& x : pr) {
        if (!is_zero(x)) x *= inverse;
      }
    }
    nonzero_.clear();
    for (std::size_t k = 0; k < width_; ++k) {
      if (!is_zero(pr[k])) nonzero_.push_back(k);
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i != r && alive_[i]) eliminate(rows_[i], pr, c);
    }
    eliminate(objective_, pr, c);
    eliminate(auxiliary_, pr, c);
    basis_[r] = c;
  }

  /// Maximizes the objective held in `z` (stored as z - c.x = 0). Returns
  /// false if unbounded.
  bool optimize(std::vector<Num>& z) {
    for (;;) {
      std::size_t entering = kNone;
      for (std::size_t j = 0; j + 1 < width_; ++j) {
        if (allowed_[j] && sgn(z[j]) < 0) {
          entering = j;
          break;
        }
      }
      if (entering == kNone) return true;

      std::size_t leaving = kNone;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (!alive_[r] || defining_[r] || sgn(rows_[r][entering]) <= 0) continue;
        if (leaving == kNone) {
          leaving = r;
          continue;
        }
        // Compare rhs_r / a_r against rhs_l / a_l with positive denominators.
        const int cmp = cmp_ratio(rows_[r], rows_[leaving], entering);
        if (cmp < 0 || (cmp == 0 && basis_[r] < basis_[leaving])) leaving = r;
      }
      if (leaving == kNone) return false;
      pivot(leaving, entering);
    }
  }

 private:
  void eliminate(std::vector<Num>& target, const std::vector<Num>& pr, std::size_t c) {
    if (is_zero(target[c])) return;
    const Num factor = target[c];
    for (std::size_t k : nonzero_) {
      scratch_ = factor * pr[k];
      target[k] -= scratch_;
    }
  }

  int cmp_ratio(const std::vector<Num>& a, const std::vector<Num>& b, std::size_t column) {
    scratch_ = a[rhs()] * b[column];
    const Num other = b[rhs()] * a[column];
    return cmp(scratch_, other);
  }

  std::size_t width_;
  std::vector<std::vector<Num>> rows_;
  std::vector<Num> objective_;
  std::vector<Num> auxiliary_;
  std::vector<std::size_t> basis_;
  std::vector<bool> defining_;
  std::vector<bool> alive_;
  std::vector<bool> allowed_;
  std::vector<std::size_t> nonzero_;
  Num scratch_;
};

template <class Num>
LpSolution solve(const LpProblem& problem) {
  const std::size_t n = problem.nonnegative.size();
  const std::size_t m = problem.rows.size();
  std::size_t slacks = 0;
  for (const auto& row : problem.rows) slacks += !row.equality;
  const std::size_t first_artificial = n + slacks;

  Tableau<Num> t(m, n + slacks + m);
  std::vector<std::size_t> slack_of(m, kNone);
  std::size_t slack = n;
  for (std::size_t r = 0; r < m; ++r) {
    const LpRow& src = problem.rows[r];
    auto& row = t.row(r);
    if (src.terms) {
      for (const auto& term : *src.terms) row[term.var] += convert<Num>(term.coeff);
    }
    if (src.unit_var) row[*src.unit_var] += Num(1);
    if (!src.equality) {
      slack_of[r] = slack;
      row[slack++] = Num(1);
    }
    row[t.rhs()] = convert<Num>(*src.rhs);
  }
  for (const auto& [var, coeff] : problem.objective) t.objective()[var] -= convert<Num>(coeff);
  for (std::size_t j = first_artificial; j < n + slacks + m; ++j) t.forbid(j);

  // Free variables become basic in a row of their own and never leave.
  // Sparse equality rows go first to limit fill-in. A row with no pending
  // column never gains one, so a single pass suffices.
  std::vector<bool> pending(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    if (problem.nonnegative[j]) continue;
    t.forbid(j);
    pending[j] = true;
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const LpRow& a = problem.rows[x];
    const LpRow& b = problem.rows[y];
    if (a.equality != b.equality) return a.equality;
    const std::size_t a_size = (a.terms ? a.terms->size() : 0) + a.unit_var.has_value();
    const std::size_t b_size = (b.terms ? b.terms->size() : 0) + b.unit_var.has_value();
    return a_size < b_size;
  });
  for (std::size_t r : order) {
    const auto& row = t.row(r);
    std::size_t col = kNone;
    for (std::size_t k = 0; k < n && col == kNone; ++k) {
      if (pending[k] && !is_zero(row[k])) col = k;
    }
    if (col == kNone) continue;
    t.pivot(r, col);
    t.set_defining(r);
    pending[col] = false;
  }
  bool unbounded_if_feasible = false;
  for (std::size_t j = 0; j < n; ++j) {
    if (pending[j] && !is_zero(t.objective()[j])) unbounded_if_feasible = true;
  }

  // Initial basis for the remaining rows: the row's own slack when it is
  // still a unit column, an artificial otherwise.
  bool need_phase_one = false;
  for (std::size_t r = 0; r < m; ++r) {
    if (t.defining(r)) continue;
    auto& row = t.row(r);
    if (sgn(row[t.rhs()]) < 0) {
      for (auto& x : row) x = -x;
    }
    std::size_t unit = slack_of[r];
    if (unit != kNone && row[unit] == Num(1)) {
      for (std::size_t i = 0; i < m && unit != kNone; ++i) {
        if (i != r && !is_zero(t.row(i)[unit])) unit = kNone;
      }
    } else {
      unit = kNone;
    }
    if (unit == kNone) {
      unit = first_artificial + r;
      row[unit] = Num(1);
      need_phase_one = true;
    }
    t.basis(r) = unit;
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (t.defining(r)) continue;
    auto& z = t.objective();
    const std::size_t b = t.basis(r);
    if (!is_zero(z[b])) {
      const Num factor = z[b];
      for (std::size_t k = 0; k <= t.rhs(); ++k) z[k] -= factor * t.row(r)[k];
    }
  }

  LpSolution solution;
  if (need_phase_one) {
    auto& w = t.auxiliary();
    for (std::size_t r = 0; r < m; ++r) {
      if (t.defining(r) || t.basis(r) < first_artificial) continue;
      for (std::size_t k = 0; k <= t.rhs(); ++k) w[k] -= t.row(r)[k];
      w[t.basis(r)] = Num();
    }
    t.optimize(w);
    if (sgn(w[t.rhs()]) < 0) return solution;

    for (std::size_t r = 0; r < m; ++r) {
      if (t.defining(r) || t.basis(r) < first_artificial) continue;
      std::size_t column = kNone;
      for (std::size_t k = 0; k < first_artificial; ++k) {
        if (k < n && !problem.nonnegative[k]) continue;
        if (!is_zero(t.row(r)[k])) {
          column = k;
          break;
        }
      }
      if (column == kNone) {
        t.kill(r);
      } else {
        t.pivot(r, column);
      }
    }
  }

  if (unbounded_if_feasible || !t.optimize(t.objective())) {
    solution.status = LpStatus::Unbounded;
    return solution;
  }

  solution.status = LpStatus::Optimal;
  solution.x.assign(n, 0);
  for (std::size_t r = 0; r < m; ++r) {
    if (t.alive(r) && t.basis(r) < n) solution.x[t.basis(r)] = to_rational(t.row(r)[t.rhs()]);
  }
  solution.value = 0;
  for (const auto& [var, coeff] : problem.objective) solution.value += coeff * solution.x[var];
  return solution;
}

}  // namespace

// Entries are usually tiny, so the 64-bit path runs first.
LpSolution solve_lp(const LpProblem& problem) {
  try {
    return solve<SmallRational>(problem);
  } catch (const SmallOverflow&) {
    return solve<Rational>(problem);
  }
}

}  // namespace linsys::detail
