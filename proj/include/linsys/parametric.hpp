#pragma once

// Metric-free anchor candidates: slope tuples whose system with the edge
// lengths M_j as unknowns (M_j > 0) is strictly feasible for some metric.
// Instantiating at a concrete metric keeps the candidates that remain
// feasible there, which are exactly that metric's anchor cells.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "linsys/anchor.hpp"

namespace linsys {

struct ParametricCandidate {
  std::vector<SlopePair> slopes;
  Configuration config;
  std::vector<Rational> witness;  // a metric realizing the candidate, per edge

  friend bool operator==(const ParametricCandidate&, const ParametricCandidate&) = default;
};

/// System in (a_i, M_j) for the first `assigned` edges of `order` fixed to
/// `slopes`; every M_j is kept strictly positive and a_0 = 0.
ConstraintSystem parametric_system(const Divisor& d, const std::vector<SlopePair>& slopes,
                                   std::span<const std::size_t> order, std::size_t assigned);

/// Edge lengths of d's graph are ignored. Throws InputError unless d is
/// effective and vertex-supported.
std::vector<ParametricCandidate> parametric_candidates(const Divisor& d, unsigned jobs = 1);

/// True when the fixed-slope system of `c` is strictly feasible at its own
/// witness metric.
bool witness_holds(const Divisor& d, const ParametricCandidate& c);

/// Anchor cells of d at the metric of d's graph among the candidates.
std::vector<AnchorCell> instantiate(const std::vector<ParametricCandidate>& candidates, const Divisor& d);
/// Same, after moving d onto `metric` (one length per edge).
std::vector<AnchorCell> instantiate(const std::vector<ParametricCandidate>& candidates, const Divisor& d,
                                    std::span<const Rational> metric);

/// Hex SHA-256 of the skeleton (ids and incidences, no lengths) and the
/// divisor.
std::string cache_key(const Divisor& d);

struct CacheResult {
  std::vector<ParametricCandidate> candidates;
  bool hit = false;
};

/// Candidates loaded from `dir` when a valid cache file exists, otherwise
/// computed and written atomically. A cache file whose witnesses fail to
/// verify is recomputed.
CacheResult cached_parametric_candidates(const Divisor& d, const std::filesystem::path& dir, unsigned jobs = 1);

}  // namespace linsys
