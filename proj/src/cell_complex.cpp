#include "linsys/cell_complex.hpp"

#include <algorithm>

#include "linsys/errors.hpp"

namespace linsys {

std::vector<std::vector<std::int64_t>> compositions(std::int64_t n) {
  if (n <= 0) return {};
  std::vector<std::vector<std::int64_t>> out;
  // Bit k of the mask cuts between unit k and k + 1.
  const std::uint64_t masks = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    std::vector<std::int64_t> parts{1};
    for (std::int64_t k = 0; k + 1 < n; ++k) {
      if (mask >> k & 1) {
        parts.push_back(1);
      } else {
        ++parts.back();
      }
    }
    out.push_back(std::move(parts));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

std::vector<CellDescriptor> expand_anchor(const MetricGraph& g, const AnchorCell& a) {
  CellDescriptor base;
  base.d_v = a.config.d_prime;
  base.partitions.resize(g.edge_count());
  base.m_e.resize(g.edge_count());
  for (std::size_t j = 0; j < g.edge_count(); ++j) base.m_e[j] = a.slopes[j].first;

  std::vector<CellDescriptor> out{base};
  std::int64_t chip_edges = 0;
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    if (a.config.c[j] == 0) continue;
    ++chip_edges;
    std::vector<CellDescriptor> next;
    for (const auto& partial : out) {
      for (auto& parts : compositions(a.config.c[j])) {
        CellDescriptor cell = partial;
        cell.partitions[j] = std::move(parts);
        next.push_back(std::move(cell));
      }
    }
    out = std::move(next);
  }

  std::vector<std::size_t> removal(g.edge_count());
  for (auto& cell : out) {
    std::int64_t parts = 0;
    for (std::size_t j = 0; j < g.edge_count(); ++j) {
      removal[j] = cell.partitions[j].size();
      parts += static_cast<std::int64_t>(removal[j]);
    }
    cell.dim = a.dim + parts - chip_edges;
    const auto components = static_cast<std::int64_t>(components_after_interior_removal(g, removal));
    if (cell.dim != components - 1) throw InvariantViolation("expanded cell dimension disagrees with its component count");
  }
  return out;
}

FVector f_vector(const std::vector<AnchorCell>& anchors) {
  FVector fv;
  for (const auto& a : anchors) {
    const auto top = static_cast<std::size_t>(a.dim + a.s_value);
    if (fv.counts.size() <= top) fv.counts.resize(top + 1, 0);
    // binom(s, k) built incrementally.
    std::int64_t binom = 1;
    for (std::int64_t k = 0; k <= a.s_value; ++k) {
      fv.counts[static_cast<std::size_t>(a.dim + k)] += binom;
      binom = binom * (a.s_value - k) / (k + 1);
    }
  }
  while (!fv.counts.empty() && fv.counts.back() == 0) fv.counts.pop_back();
  return fv;
}

std::int64_t euler_characteristic(const FVector& fv) {
  std::int64_t chi = 0;
  for (std::size_t k = 0; k < fv.counts.size(); ++k) chi += k % 2 == 0 ? fv.counts[k] : -fv.counts[k];
  return chi;
}

void require_contractible(const FVector& fv) {
  const auto chi = euler_characteristic(fv);
  if (chi != 1) throw EulerViolation("Euler characteristic is " + std::to_string(chi) + ", expected 1");
}

std::vector<CellDescriptor> all_cells(const Divisor& d, const std::vector<AnchorCell>& anchors) {
  std::vector<CellDescriptor> cells;
  FVector histogram;
  for (const auto& a : anchors) {
    for (auto& cell : expand_anchor(*d.graph(), a)) {
      const auto k = static_cast<std::size_t>(cell.dim);
      if (histogram.counts.size() <= k) histogram.counts.resize(k + 1, 0);
      ++histogram.counts[k];
      cells.push_back(std::move(cell));
    }
  }
  const FVector fv = f_vector(anchors);
  if (histogram != fv) throw InvariantViolation("cell expansion disagrees with the f-vector");
  require_contractible(fv);
  return cells;
}

std::vector<CellDescriptor> all_cells(const Divisor& d) { return all_cells(d, anchor_cells(d)); }

}  // namespace linsys
