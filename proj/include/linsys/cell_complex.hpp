#pragma once

// Cells of |D| obtained from anchor cells by splitting each interior chip
// mass into an ordered sequence of chips, and the f-vector of the complex.

#include <cstdint>
#include <vector>

#include "linsys/anchor.hpp"

namespace linsys {

struct CellDescriptor {
  std::vector<std::int64_t> d_v;                      // per vertex
  std::vector<std::vector<std::int64_t>> partitions;  // per edge, empty when c_j = 0
  std::vector<std::int64_t> m_e;                      // outgoing slope at the tail, per edge
  std::int64_t dim = 0;

  friend auto operator<=>(const CellDescriptor&, const CellDescriptor&) = default;
};

struct FVector {
  std::vector<std::int64_t> counts;  // counts[k] = number of k-dimensional cells

  friend bool operator==(const FVector&, const FVector&) = default;
};

/// Ordered compositions of n, by number of parts and then lexicographically.
std::vector<std::vector<std::int64_t>> compositions(std::int64_t n);

/// The 2^s(A) cells whose anchor is `a`.
std::vector<CellDescriptor> expand_anchor(const MetricGraph& g, const AnchorCell& a);

/// Coefficients of sum over anchors of x^dim (1+x)^s.
FVector f_vector(const std::vector<AnchorCell>& anchors);

std::int64_t euler_characteristic(const FVector& fv);

/// Throws EulerViolation unless the alternating sum of `fv` is 1.
void require_contractible(const FVector& fv);

/// Every cell of |d|. Cross-checks the per-dimension counts against
/// f_vector and the Euler characteristic.
std::vector<CellDescriptor> all_cells(const Divisor& d, const std::vector<AnchorCell>& anchors);
std::vector<CellDescriptor> all_cells(const Divisor& d);

}  // namespace linsys
