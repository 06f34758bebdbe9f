#include "linsys/graph.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "linsys/errors.hpp"
#include "union_find.hpp"

namespace linsys {

namespace {

template <typename T, typename Key>
std::optional<std::size_t> find_sorted(const std::vector<T>& items, std::string_view id, Key key) {
  auto it = std::lower_bound(items.begin(), items.end(), id,
                             [&](const T& item, std::string_view x) { return key(item) < x; });
  if (it == items.end() || key(*it) != id) return std::nullopt;
  return static_cast<std::size_t>(it - items.begin());
}

std::size_t component_count(std::size_t n, const std::vector<MetricGraph::Edge>& edges,
                            std::optional<std::size_t> skip = std::nullopt) {
  detail::UnionFind uf(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (skip && *skip == e) continue;
    uf.unite(edges[e].tail, edges[e].head);
  }
  return uf.set_count();
}

void check_same_graph(const GraphPtr& a, const GraphPtr& b, const char* what) {
  if (a != b && !(*a == *b)) throw InputError(std::string(what) + ": operands live on different graphs");
}

}  // namespace

MetricGraph::MetricGraph(std::vector<std::string> vertex_ids, std::vector<EdgeSpec> edges) {
  if (vertex_ids.empty()) throw InputError("graph has no vertices");
  std::sort(vertex_ids.begin(), vertex_ids.end());
  if (std::adjacent_find(vertex_ids.begin(), vertex_ids.end()) != vertex_ids.end()) {
    throw InputError("duplicate vertex identifier");
  }
  vertices_ = std::move(vertex_ids);

  std::sort(edges.begin(), edges.end(), [](const EdgeSpec& a, const EdgeSpec& b) { return a.id < b.id; });
  edges_.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const EdgeSpec& spec = edges[i];
    if (i > 0 && edges[i - 1].id == spec.id) throw InputError("duplicate edge identifier '" + spec.id + "'");
    if (spec.length <= 0) throw InputError("edge '" + spec.id + "' must have positive length");
    const auto tail = find_vertex(spec.tail);
    const auto head = find_vertex(spec.head);
    if (!tail || !head) throw InputError("edge '" + spec.id + "' references an unknown vertex");
    edges_.push_back(Edge{spec.id, *tail, *head, spec.length});
  }
  if (component_count(vertices_.size(), edges_) != 1) throw InputError("graph is not connected");
}

std::shared_ptr<const MetricGraph> MetricGraph::create(std::vector<std::string> vertex_ids,
                                                       std::vector<EdgeSpec> edges) {
  return std::make_shared<const MetricGraph>(std::move(vertex_ids), std::move(edges));
}

std::optional<std::size_t> MetricGraph::find_vertex(std::string_view id) const {
  return find_sorted(vertices_, id, [](const std::string& v) -> std::string_view { return v; });
}

std::optional<std::size_t> MetricGraph::find_edge(std::string_view id) const {
  return find_sorted(edges_, id, [](const Edge& e) -> std::string_view { return e.id; });
}

std::size_t MetricGraph::vertex_index(std::string_view id) const {
  if (auto v = find_vertex(id)) return *v;
  throw InputError("unknown vertex '" + std::string(id) + "'");
}

std::size_t MetricGraph::edge_index(std::string_view id) const {
  if (auto e = find_edge(id)) return *e;
  throw InputError("unknown edge '" + std::string(id) + "'");
}

int MetricGraph::degree(std::size_t v) const {
  int deg = 0;
  for (const Edge& e : edges_) deg += (e.tail == v) + (e.head == v);
  return deg;
}

Rational MetricGraph::total_length() const {
  Rational total = 0;
  for (const Edge& e : edges_) total += e.length;
  return total;
}

std::int64_t MetricGraph::genus() const {
  return static_cast<std::int64_t>(edges_.size()) - static_cast<std::int64_t>(vertices_.size()) + 1;
}

bool MetricGraph::is_bridgeless() const {
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].is_loop()) continue;
    if (component_count(vertices_.size(), edges_, e) != 1) return false;
  }
  return true;
}

std::shared_ptr<const MetricGraph> MetricGraph::with_lengths(std::span<const Rational> lengths) const {
  if (lengths.size() != edges_.size()) throw InputError("metric has the wrong number of entries");
  std::vector<EdgeSpec> specs;
  specs.reserve(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    specs.push_back({edges_[e].id, vertices_[edges_[e].tail], vertices_[edges_[e].head], lengths[e]});
  }
  return create(vertices_, std::move(specs));
}

bool operator==(const MetricGraph& a, const MetricGraph& b) {
  if (a.vertices_ != b.vertices_ || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t e = 0; e < a.edges_.size(); ++e) {
    const auto& x = a.edges_[e];
    const auto& y = b.edges_[e];
    if (x.id != y.id || x.tail != y.tail || x.head != y.head || x.length != y.length) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Divisor::Divisor(GraphPtr graph, std::vector<std::int64_t> vertex_values, std::vector<InteriorChip> interior)
    : graph_(std::move(graph)), vertex_values_(std::move(vertex_values)), interior_(std::move(interior)) {
  if (!graph_) throw InputError("divisor without a graph");
  if (vertex_values_.size() != graph_->vertex_count()) throw InputError("divisor has the wrong number of vertex values");
  std::sort(interior_.begin(), interior_.end(), [](const InteriorChip& a, const InteriorChip& b) {
    return a.edge != b.edge ? a.edge < b.edge : a.position < b.position;
  });
  for (std::size_t i = 0; i < interior_.size(); ++i) {
    const InteriorChip& chip = interior_[i];
    if (chip.edge >= graph_->edge_count()) throw InputError("interior chip on an unknown edge");
    const auto& edge = graph_->edge(chip.edge);
    if (chip.position <= 0 || chip.position >= edge.length) {
      throw InputError("interior chip on edge '" + edge.id + "' is not strictly inside the edge");
    }
    if (chip.value == 0) throw InputError("interior chip with multiplicity 0 on edge '" + edge.id + "'");
    if (i > 0 && interior_[i - 1].edge == chip.edge && interior_[i - 1].position == chip.position) {
      throw InputError("two interior chips at the same point of edge '" + edge.id + "'");
    }
  }
}

Divisor Divisor::zero(GraphPtr graph) {
  const std::size_t n = graph->vertex_count();
  return Divisor(std::move(graph), std::vector<std::int64_t>(n, 0));
}

std::int64_t Divisor::degree() const {
  std::int64_t total = 0;
  for (auto v : vertex_values_) total += v;
  for (const auto& chip : interior_) total += chip.value;
  return total;
}

bool Divisor::is_effective() const {
  return std::all_of(vertex_values_.begin(), vertex_values_.end(), [](auto v) { return v >= 0; }) &&
         std::all_of(interior_.begin(), interior_.end(), [](const auto& c) { return c.value >= 0; });
}

bool operator==(const Divisor& a, const Divisor& b) {
  return (a.graph_ == b.graph_ || *a.graph_ == *b.graph_) && a.vertex_values_ == b.vertex_values_ &&
         a.interior_ == b.interior_;
}

Divisor add_divisors(const Divisor& a, const Divisor& b) {
  check_same_graph(a.graph(), b.graph(), "add_divisors");
  std::vector<std::int64_t> values = a.vertex_values();
  for (std::size_t v = 0; v < values.size(); ++v) values[v] += b.at_vertex(v);

  std::map<std::pair<std::size_t, Rational>, std::int64_t> points;
  for (const auto* d : {&a, &b}) {
    for (const auto& chip : d->interior()) points[{chip.edge, chip.position}] += chip.value;
  }
  std::vector<InteriorChip> interior;
  for (const auto& [key, value] : points) {
    if (value != 0) interior.push_back({key.first, key.second, value});
  }
  return Divisor(a.graph(), std::move(values), std::move(interior));
}

Divisor canonical_divisor(const GraphPtr& graph) {
  std::vector<std::int64_t> values(graph->vertex_count());
  for (std::size_t v = 0; v < values.size(); ++v) values[v] = graph->degree(v) - 2;
  return Divisor(graph, std::move(values));
}

std::pair<GraphPtr, Divisor> refine_to_vertex_supported(const Divisor& d) {
  if (d.is_vertex_supported()) return {d.graph(), d};
  const MetricGraph& g = *d.graph();

  std::set<std::string> taken(g.vertices().begin(), g.vertices().end());
  for (const auto& e : g.edges()) taken.insert(e.id);
  auto fresh = [&taken](std::string name) {
    while (taken.contains(name)) name += "'";
    taken.insert(name);
    return name;
  };

  std::vector<std::string> vertices = g.vertices();
  std::vector<EdgeSpec> edges;
  std::map<std::string, std::int64_t> values;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) values[g.vertices()[v]] = d.at_vertex(v);

  const auto& chips = d.interior();
  auto chip = chips.begin();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    std::string previous = g.vertices()[edge.tail];
    Rational previous_pos = 0;
    int piece = 0;
    for (; chip != chips.end() && chip->edge == e; ++chip) {
      std::string mid = fresh(edge.id + "@" + to_string(chip->position));
      vertices.push_back(mid);
      values[mid] = chip->value;
      edges.push_back({fresh(edge.id + "." + std::to_string(++piece)), previous, mid, chip->position - previous_pos});
      previous = mid;
      previous_pos = chip->position;
    }
    if (piece == 0) {
      edges.push_back({edge.id, previous, g.vertices()[edge.head], edge.length});
    } else {
      edges.push_back({fresh(edge.id + "." + std::to_string(++piece)), previous, g.vertices()[edge.head],
                       edge.length - previous_pos});
    }
  }
  GraphPtr refined = MetricGraph::create(std::move(vertices), std::move(edges));
  std::vector<std::int64_t> vertex_values(refined->vertex_count());
  for (std::size_t v = 0; v < refined->vertex_count(); ++v) vertex_values[v] = values.at(refined->vertices()[v]);
  return {refined, Divisor(refined, std::move(vertex_values))};
}

std::size_t components_after_interior_removal(const MetricGraph& graph, std::span<const std::size_t> removal) {
  if (removal.size() != graph.edge_count()) throw PreconditionError("removal counts must cover every edge");
  detail::UnionFind uf(graph.vertex_count());
  std::size_t free_segments = 0;
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    if (removal[e] == 0) {
      uf.unite(graph.edge(e).tail, graph.edge(e).head);
    } else {
      free_segments += removal[e] - 1;
    }
  }
  return uf.set_count() + free_segments;
}

// ---------------------------------------------------------------------------

namespace {

Rational piece_slope(const Breakpoint& a, const Breakpoint& b) { return (b.value - a.value) / (b.position - a.position); }

std::vector<Breakpoint> drop_collinear(std::vector<Breakpoint> points) {
  if (points.size() <= 2) return points;
  std::vector<Breakpoint> out;
  out.push_back(points.front());
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    if (piece_slope(out.back(), points[i]) != piece_slope(points[i], points[i + 1])) out.push_back(points[i]);
  }
  out.push_back(points.back());
  return out;
}

}  // namespace

RationalFunction::RationalFunction(GraphPtr graph, std::vector<Rational> vertex_values,
                                   std::vector<std::vector<Breakpoint>> pieces)
    : graph_(std::move(graph)), vertex_values_(std::move(vertex_values)), pieces_(std::move(pieces)) {
  if (!graph_) throw InputError("rational function without a graph");
  if (vertex_values_.size() != graph_->vertex_count() || pieces_.size() != graph_->edge_count()) {
    throw InputError("rational function does not match the graph dimensions");
  }
  for (std::size_t e = 0; e < pieces_.size(); ++e) {
    const auto& edge = graph_->edge(e);
    auto& pts = pieces_[e];
    if (pts.size() < 2 || pts.front().position != 0 || pts.back().position != edge.length) {
      throw InputError("breakpoints of edge '" + edge.id + "' must start at 0 and end at the edge length");
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i].position <= pts[i - 1].position) throw InputError("breakpoints of edge '" + edge.id + "' are not increasing");
      if (!is_integer(piece_slope(pts[i - 1], pts[i]))) throw InputError("non-integer slope on edge '" + edge.id + "'");
    }
    if (pts.front().value != vertex_values_[edge.tail] || pts.back().value != vertex_values_[edge.head]) {
      throw InputError("rational function is discontinuous at an end of edge '" + edge.id + "'");
    }
    pts = drop_collinear(std::move(pts));
  }
}

RationalFunction RationalFunction::constant(GraphPtr graph, const Rational& value) {
  std::vector<std::vector<Breakpoint>> pieces;
  for (const auto& e : graph->edges()) pieces.push_back({{0, value}, {e.length, value}});
  const std::size_t n = graph->vertex_count();
  return RationalFunction(std::move(graph), std::vector<Rational>(n, value), std::move(pieces));
}

Rational RationalFunction::value_at(std::size_t edge, const Rational& position) const {
  const auto& pts = pieces_.at(edge);
  if (position < 0 || position > pts.back().position) throw PreconditionError("position outside the edge");
  auto hi = std::upper_bound(pts.begin(), pts.end(), position,
                             [](const Rational& x, const Breakpoint& b) { return x < b.position; });
  if (hi == pts.end()) return pts.back().value;
  auto lo = std::prev(hi);
  return lo->value + piece_slope(*lo, *hi) * (position - lo->position);
}

std::vector<std::int64_t> RationalFunction::slopes(std::size_t edge) const {
  const auto& pts = pieces_.at(edge);
  std::vector<std::int64_t> out;
  for (std::size_t i = 1; i < pts.size(); ++i) out.push_back(to_int(piece_slope(pts[i - 1], pts[i])));
  return out;
}

std::int64_t RationalFunction::outgoing_slope_at_tail(std::size_t edge) const {
  const auto& pts = pieces_.at(edge);
  return to_int(piece_slope(pts[0], pts[1]));
}

std::int64_t RationalFunction::outgoing_slope_at_head(std::size_t edge) const {
  const auto& pts = pieces_.at(edge);
  return -to_int(piece_slope(pts[pts.size() - 2], pts.back()));
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
  return (a.graph_ == b.graph_ || *a.graph_ == *b.graph_) && a.vertex_values_ == b.vertex_values_ &&
         a.pieces_ == b.pieces_;
}

Divisor principal_divisor(const RationalFunction& f) {
  const MetricGraph& g = *f.graph();
  std::vector<std::int64_t> values(g.vertex_count(), 0);
  std::vector<InteriorChip> interior;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    values[g.edge(e).tail] += f.outgoing_slope_at_tail(e);
    values[g.edge(e).head] += f.outgoing_slope_at_head(e);
    const auto slopes = f.slopes(e);
    const auto& pts = f.pieces(e);
    for (std::size_t i = 1; i < slopes.size(); ++i) interior.push_back({e, pts[i].position, slopes[i] - slopes[i - 1]});
  }
  return Divisor(f.graph(), std::move(values), std::move(interior));
}

RationalFunction tropical_max(const RationalFunction& f, const RationalFunction& g) {
  check_same_graph(f.graph(), g.graph(), "tropical_max");
  const MetricGraph& graph = *f.graph();
  std::vector<Rational> vertex_values(graph.vertex_count());
  for (std::size_t v = 0; v < vertex_values.size(); ++v) {
    vertex_values[v] = std::max(f.vertex_values()[v], g.vertex_values()[v]);
  }
  std::vector<std::vector<Breakpoint>> pieces;
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    std::set<Rational> positions;
    for (const auto& b : f.pieces(e)) positions.insert(b.position);
    for (const auto& b : g.pieces(e)) positions.insert(b.position);
    std::vector<Rational> xs(positions.begin(), positions.end());
    std::vector<Rational> all;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      all.push_back(xs[i]);
      if (i + 1 == xs.size()) break;
      // Both functions are affine on [xs[i], xs[i+1]]; add the crossing.
      const Rational h0 = f.value_at(e, xs[i]) - g.value_at(e, xs[i]);
      const Rational h1 = f.value_at(e, xs[i + 1]) - g.value_at(e, xs[i + 1]);
      if ((h0 > 0 && h1 < 0) || (h0 < 0 && h1 > 0)) all.push_back(xs[i] + h0 / (h0 - h1) * (xs[i + 1] - xs[i]));
    }
    std::vector<Breakpoint> pts;
    for (const auto& x : all) pts.push_back({x, std::max(f.value_at(e, x), g.value_at(e, x))});
    pieces.push_back(std::move(pts));
  }
  return RationalFunction(f.graph(), std::move(vertex_values), std::move(pieces));
}

RationalFunction tropical_shift(const RationalFunction& f, const Rational& c) {
  std::vector<Rational> vertex_values = f.vertex_values();
  for (auto& v : vertex_values) v += c;
  std::vector<std::vector<Breakpoint>> pieces;
  for (std::size_t e = 0; e < f.graph()->edge_count(); ++e) {
    auto pts = f.pieces(e);
    for (auto& b : pts) b.value += c;
    pieces.push_back(std::move(pts));
  }
  return RationalFunction(f.graph(), std::move(vertex_values), std::move(pieces));
}

}  // namespace linsys
