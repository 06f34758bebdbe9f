#pragma once

// Anchor cells of the linear system |D| of a vertex-supported effective
// divisor D, for a fixed metric.
//
// A rational function with at most two linear pieces per edge is described
// by its vertex values a_i and the outgoing slopes (s_tail, s_head) at the
// two ends of every edge. For each split of deg(D) into interior masses c_j
// and vertex masses d'_i, the admissible slopes form the integer points of a
// linear system; each integer slope tuple is one anchor cell.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "linsys/exact_lp.hpp"
#include "linsys/graph.hpp"

namespace linsys {

struct Configuration {
  std::vector<std::int64_t> c;        // interior chip mass per edge
  std::vector<std::int64_t> d_prime;  // chip mass per vertex

  std::int64_t total() const;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

/// Weak compositions of d into (m edge parts, n vertex parts), yielded in
/// lexicographic order of (c_1..c_m, d'_1..d'_n).
class ConfigurationEnumerator {
 public:
  ConfigurationEnumerator(std::size_t vertex_count, std::size_t edge_count, std::int64_t degree);

  bool next(Configuration& out);
  /// binom(d + n + m - 1, d)
  static std::uint64_t count(std::size_t vertex_count, std::size_t edge_count, std::int64_t degree);

 private:
  std::size_t edges_;
  std::vector<std::int64_t> parts_;
  bool started_ = false;
  bool done_ = false;
};

std::vector<Configuration> enumerate_configurations(std::size_t vertex_count, std::size_t edge_count,
                                                    std::int64_t degree);

using SlopePair = std::pair<std::int64_t, std::int64_t>;  // (outgoing at tail, outgoing at head)

struct AnchorCell {
  std::vector<SlopePair> slopes;  // per edge
  Configuration config;
  std::int64_t dim = 0;
  std::int64_t s_value = 0;

  /// Canonical order: slope vectors compared edge by edge.
  friend bool operator<(const AnchorCell& a, const AnchorCell& b) { return a.slopes < b.slopes; }
  friend bool operator==(const AnchorCell&, const AnchorCell&) = default;
};

/// Variable layout of build_constraints: a_i first, then s_{j,1}, s_{j,2}.
inline std::size_t vertex_value_variable(std::size_t vertex) { return vertex; }
inline std::size_t slope_variable(const MetricGraph& g, std::size_t edge, int end) {
  return g.vertex_count() + 2 * edge + static_cast<std::size_t>(end);
}

/// Constraints on (a, s) for one configuration, with the gauge a_0 = 0.
/// Slope variables are integer-marked. Throws InputError unless d is
/// effective and vertex-supported, or if the configuration does not add up
/// to deg(d).
ConstraintSystem build_constraints(const Divisor& d, const Configuration& cfg);

/// build_constraints plus equalities pinning every slope.
ConstraintSystem fixed_slope_constraints(const Divisor& d, const Configuration& cfg,
                                         const std::vector<SlopePair>& slopes);

/// Configuration determined by a slope tuple: c_j = -s_tail - s_head and
/// d'_i = d_i + sum of outgoing slopes at v_i.
Configuration configuration_from_slopes(const Divisor& d, const std::vector<SlopePair>& slopes);

std::int64_t s_value(const Configuration& cfg);
std::int64_t cell_dimension(const MetricGraph& g, const AnchorCell& a);

/// Anchor cell for a slope tuple; does not check feasibility.
AnchorCell make_anchor_cell(const Divisor& d, const std::vector<SlopePair>& slopes);

/// Throws InvariantViolation if `a` breaks a structural property of anchor
/// cells of |d| (configuration identities, slope bound, dimension bound).
void check_anchor_invariants(const Divisor& d, const AnchorCell& a);

struct AnchorOptions {
  unsigned jobs = 1;
  /// Called (serialized) with every configuration whose system has an
  /// integer point.
  std::function<void(const Configuration&, const ConstraintSystem&)> on_feasible_system;
};

/// All anchor cells of |d|, sorted canonically.
std::vector<AnchorCell> anchor_cells(const Divisor& d, const AnchorOptions& options = {});

/// Function f with f(first vertex) = 0 realizing `a`: one piece on edges
/// with c_j = 0, two pieces otherwise. Verifies that d + (f) is the anchor
/// divisor described by `a` and throws InvariantViolation if not.
RationalFunction representative_function(const Divisor& d, const AnchorCell& a);

}  // namespace linsys
