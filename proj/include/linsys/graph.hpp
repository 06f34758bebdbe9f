#pragma once

// Metric graphs, divisors and tropical rational functions.
//
// Every edge is identified with the interval [0, length] running from its
// tail to its head; all slope data is expressed in that frame. Vertices and
// edges are kept sorted by identifier so that index order is the canonical
// output order.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linsys/rational.hpp"

namespace linsys {

struct EdgeSpec {
  std::string id;
  std::string tail;
  std::string head;
  Rational length;
};

class MetricGraph {
 public:
  struct Edge {
    std::string id;
    std::size_t tail = 0;
    std::size_t head = 0;
    Rational length;

    bool is_loop() const { return tail == head; }
  };

  /// Throws InputError unless the graph is nonempty, connected, uses unique
  /// identifiers and has strictly positive edge lengths. Loops and parallel
  /// edges are allowed.
  MetricGraph(std::vector<std::string> vertex_ids, std::vector<EdgeSpec> edges);

  static std::shared_ptr<const MetricGraph> create(std::vector<std::string> vertex_ids,
                                                   std::vector<EdgeSpec> edges);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t index) const { return edges_.at(index); }

  std::optional<std::size_t> find_vertex(std::string_view id) const;
  std::optional<std::size_t> find_edge(std::string_view id) const;
  std::size_t vertex_index(std::string_view id) const;  // throws InputError
  std::size_t edge_index(std::string_view id) const;    // throws InputError

  /// Number of half-edges at v; a loop counts twice.
  int degree(std::size_t v) const;
  Rational total_length() const;
  /// Genus m - n + 1 of the underlying multigraph.
  std::int64_t genus() const;
  /// True when removing any single interior point keeps the graph connected.
  bool is_bridgeless() const;

  /// Same skeleton with new lengths, indexed by edge.
  std::shared_ptr<const MetricGraph> with_lengths(std::span<const Rational> lengths) const;

  friend bool operator==(const MetricGraph&, const MetricGraph&);

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
};

using GraphPtr = std::shared_ptr<const MetricGraph>;

struct InteriorChip {
  std::size_t edge = 0;
  Rational position;
  std::int64_t value = 0;

  friend bool operator==(const InteriorChip&, const InteriorChip&) = default;
};

class Divisor {
 public:
  /// Interior chips must lie strictly inside their edge, carry a nonzero
  /// value and occupy distinct points. They are stored sorted by
  /// (edge, position).
  Divisor(GraphPtr graph, std::vector<std::int64_t> vertex_values,
          std::vector<InteriorChip> interior = {});

  static Divisor zero(GraphPtr graph);

  const GraphPtr& graph() const { return graph_; }
  const std::vector<std::int64_t>& vertex_values() const { return vertex_values_; }
  const std::vector<InteriorChip>& interior() const { return interior_; }
  std::int64_t at_vertex(std::size_t v) const { return vertex_values_.at(v); }

  std::int64_t degree() const;
  bool is_effective() const;
  bool is_vertex_supported() const { return interior_.empty(); }

  friend bool operator==(const Divisor&, const Divisor&);

 private:
  GraphPtr graph_;
  std::vector<std::int64_t> vertex_values_;
  std::vector<InteriorChip> interior_;
};

Divisor add_divisors(const Divisor& a, const Divisor& b);
inline bool is_effective(const Divisor& d) { return d.is_effective(); }
inline std::int64_t degree(const Divisor& d) { return d.degree(); }

/// K(v) = deg(v) - 2 at every vertex.
Divisor canonical_divisor(const GraphPtr& graph);

/// Subdivides edges at every interior chip so that the divisor becomes
/// vertex-supported. New vertices are named "<edge>@<position>" and the
/// pieces of a split edge "<edge>.<k>", k counted from the tail.
std::pair<GraphPtr, Divisor> refine_to_vertex_supported(const Divisor& d);

/// Connected components of the graph after deleting removal[e] distinct
/// interior points from each edge e.
std::size_t components_after_interior_removal(const MetricGraph& graph,
                                              std::span<const std::size_t> removal);

struct Breakpoint {
  Rational position;
  Rational value;

  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Continuous piecewise-linear function with integer slopes.
class RationalFunction {
 public:
  /// `pieces[e]` lists breakpoints of edge e from position 0 to its length.
  /// Collinear interior breakpoints are dropped. Throws InputError on
  /// non-integer slopes, unsorted positions or a mismatch between an edge
  /// end value and the value at the incident vertex.
  RationalFunction(GraphPtr graph, std::vector<Rational> vertex_values,
                   std::vector<std::vector<Breakpoint>> pieces);

  static RationalFunction constant(GraphPtr graph, const Rational& value);

  const GraphPtr& graph() const { return graph_; }
  const std::vector<Rational>& vertex_values() const { return vertex_values_; }
  const std::vector<Breakpoint>& pieces(std::size_t edge) const { return pieces_.at(edge); }

  Rational value_at(std::size_t edge, const Rational& position) const;
  /// Slope of each linear piece of `edge`, in tail-to-head direction.
  std::vector<std::int64_t> slopes(std::size_t edge) const;
  std::int64_t outgoing_slope_at_tail(std::size_t edge) const;
  std::int64_t outgoing_slope_at_head(std::size_t edge) const;

  friend bool operator==(const RationalFunction&, const RationalFunction&);

 private:
  GraphPtr graph_;
  std::vector<Rational> vertex_values_;
  std::vector<std::vector<Breakpoint>> pieces_;
};

/// (f): sum of outgoing slopes at every vertex and breakpoint.
Divisor principal_divisor(const RationalFunction& f);

/// Pointwise maximum, with breakpoints inserted where the pieces cross.
RationalFunction tropical_max(const RationalFunction& f, const RationalFunction& g);
/// Pointwise f + c.
RationalFunction tropical_shift(const RationalFunction& f, const Rational& c);

}  // namespace linsys
