#pragma once

// Extremality of rational functions in R(D).
//
// f is extremal iff Γ cannot be covered by two proper subgraphs that can
// both fire for L = D + (f). Cutting Γ at supp(L) leaves finitely many
// components, and every subgraph that can fire is a union of them, so the
// search runs over component subsets.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "linsys/anchor.hpp"
#include "linsys/graph.hpp"

namespace linsys {

using ComponentMask = std::uint64_t;

struct SupportPoint {
  std::optional<std::size_t> vertex;  // set for vertices
  std::size_t edge = 0;               // interior points only
  Rational position;                  // interior points only
  std::int64_t chips = 0;
};

struct Segment {
  std::size_t edge = 0;
  Rational from;
  Rational to;
};

struct SupportComponent {
  std::size_t id = 0;
  std::vector<std::size_t> vertices;  // vertices in the closure
  std::vector<Segment> segments;
  std::vector<std::size_t> boundary;  // indices into SupportDecomposition::points
};

struct SupportDecomposition {
  std::vector<SupportPoint> points;
  /// germs[p] lists, for every direction leaving points[p], the component
  /// containing it. A loop at a vertex contributes two directions.
  std::vector<std::vector<std::size_t>> germs;
  std::vector<SupportComponent> components;

  ComponentMask full_mask() const;
};

/// Throws PreconditionError unless l is effective.
SupportDecomposition support_components(const Divisor& l);

/// Directions leaving the union `mask` at points[p].
std::int64_t outgoing_directions(const SupportDecomposition& s, std::size_t p, ComponentMask mask);

bool can_fire(const SupportDecomposition& s, ComponentMask mask);
bool can_fire(const SupportDecomposition& s, const std::vector<std::size_t>& component_ids);

/// Every nonempty proper union of components that can fire.
std::vector<ComponentMask> firable_unions(const SupportDecomposition& s);

/// Extremality of any f with D + (f) = l.
bool is_extremal_divisor(const Divisor& l);
/// Throws PreconditionError unless d + (f) is effective.
bool is_extremal(const Divisor& d, const RationalFunction& f);

struct Generator {
  AnchorCell cell;
  RationalFunction function;
};

/// Extremal functions among the representatives of the 0-dimensional
/// anchor cells, normalized to vanish at the first vertex.
std::vector<Generator> extremal_generators(const Divisor& d, const std::vector<AnchorCell>& anchors);
std::vector<Generator> extremal_generators(const Divisor& d);

}  // namespace linsys
