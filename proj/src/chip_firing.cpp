#include "linsys/chip_firing.hpp"

#include <algorithm>
#include <map>

#include "linsys/errors.hpp"
#include "union_find.hpp"

namespace linsys {

namespace {

// Subset enumeration is exponential in the component count.
constexpr std::size_t kMaxComponents = 24;

}  // namespace

ComponentMask SupportDecomposition::full_mask() const {
  const std::size_t k = components.size();
  return k >= 64 ? ~ComponentMask{0} : (ComponentMask{1} << k) - 1;
}

SupportDecomposition support_components(const Divisor& l) {
  if (!l.is_effective()) throw PreconditionError("support components need an effective divisor");
  const MetricGraph& g = *l.graph();
  SupportDecomposition out;

  // Segments of edge j are numbered first_segment[j] .. first_segment[j+1]-1
  // from the tail; interior chips on j are the cuts between them.
  std::vector<std::vector<std::size_t>> chips_on(g.edge_count());
  for (std::size_t i = 0; i < l.interior().size(); ++i) chips_on[l.interior()[i].edge].push_back(i);
  std::vector<std::size_t> first_segment(g.edge_count() + 1, 0);
  for (std::size_t j = 0; j < g.edge_count(); ++j) first_segment[j + 1] = first_segment[j] + chips_on[j].size() + 1;
  const std::size_t segment_count = first_segment.back();
  auto tail_segment = [&](std::size_t j) { return first_segment[j]; };
  auto head_segment = [&](std::size_t j) { return first_segment[j + 1] - 1; };

  detail::UnionFind uf(segment_count);
  std::vector<std::size_t> anchor(g.vertex_count(), segment_count);
  auto touch = [&](std::size_t v, std::size_t segment) {
    if (l.at_vertex(v) > 0) return;
    if (anchor[v] == segment_count) {
      anchor[v] = segment;
    } else {
      uf.unite(anchor[v], segment);
    }
  };
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    touch(g.edge(j).tail, tail_segment(j));
    touch(g.edge(j).head, head_segment(j));
  }

  std::map<std::size_t, std::size_t> id_of_root;
  std::vector<std::size_t> component_of(segment_count);
  for (std::size_t s = 0; s < segment_count; ++s) {
    auto [it, inserted] = id_of_root.try_emplace(uf.find(s), id_of_root.size());
    component_of[s] = it->second;
  }
  out.components.resize(id_of_root.size());
  for (std::size_t c = 0; c < out.components.size(); ++c) out.components[c].id = c;

  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    const auto& e = g.edge(j);
    Rational from = 0;
    for (std::size_t k = 0; k <= chips_on[j].size(); ++k) {
      const Rational to = k < chips_on[j].size() ? l.interior()[chips_on[j][k]].position : e.length;
      auto& component = out.components[component_of[first_segment[j] + k]];
      component.segments.push_back({j, from, to});
      if (k == 0) component.vertices.push_back(e.tail);
      if (k == chips_on[j].size()) component.vertices.push_back(e.head);
      from = to;
    }
  }
  for (auto& component : out.components) {
    std::sort(component.vertices.begin(), component.vertices.end());
    component.vertices.erase(std::unique(component.vertices.begin(), component.vertices.end()),
                             component.vertices.end());
  }

  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (l.at_vertex(v) == 0) continue;
    SupportPoint p;
    p.vertex = v;
    p.chips = l.at_vertex(v);
    std::vector<std::size_t> germs;
    for (std::size_t j = 0; j < g.edge_count(); ++j) {
      if (g.edge(j).tail == v) germs.push_back(component_of[tail_segment(j)]);
      if (g.edge(j).head == v) germs.push_back(component_of[head_segment(j)]);
    }
    out.points.push_back(std::move(p));
    out.germs.push_back(std::move(germs));
  }
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    for (std::size_t k = 0; k < chips_on[j].size(); ++k) {
      const auto& chip = l.interior()[chips_on[j][k]];
      out.points.push_back({std::nullopt, j, chip.position, chip.value});
      out.germs.push_back({component_of[first_segment[j] + k], component_of[first_segment[j] + k + 1]});
    }
  }

  for (std::size_t p = 0; p < out.points.size(); ++p) {
    const auto& germs = out.germs[p];
    for (auto c : germs) {
      auto& boundary = out.components[c].boundary;
      const bool mixed = std::any_of(germs.begin(), germs.end(), [&](std::size_t other) { return other != c; });
      if (mixed && (boundary.empty() || boundary.back() != p)) boundary.push_back(p);
    }
  }
  return out;
}

std::int64_t outgoing_directions(const SupportDecomposition& s, std::size_t p, ComponentMask mask) {
  std::int64_t out = 0;
  for (auto c : s.germs.at(p)) out += (mask >> c & 1) ? 0 : 1;
  return out;
}

bool can_fire(const SupportDecomposition& s, ComponentMask mask) {
  for (std::size_t p = 0; p < s.points.size(); ++p) {
    const auto& germs = s.germs[p];
    const auto out = outgoing_directions(s, p, mask);
    const bool touches = out < static_cast<std::int64_t>(germs.size());
    if (touches && out > s.points[p].chips) return false;
  }
  return true;
}

bool can_fire(const SupportDecomposition& s, const std::vector<std::size_t>& component_ids) {
  ComponentMask mask = 0;
  for (auto c : component_ids) {
    if (c >= s.components.size() || c >= 64) throw PreconditionError("unknown component id");
    mask |= ComponentMask{1} << c;
  }
  return can_fire(s, mask);
}

std::vector<ComponentMask> firable_unions(const SupportDecomposition& s) {
  if (s.components.size() > kMaxComponents) throw PreconditionError("too many support components to enumerate");
  std::vector<ComponentMask> out;
  const ComponentMask full = s.full_mask();
  for (ComponentMask mask = 1; mask < full; ++mask) {
    if (can_fire(s, mask)) out.push_back(mask);
  }
  return out;
}

bool is_extremal_divisor(const Divisor& l) {
  const SupportDecomposition s = support_components(l);
  const std::size_t k = s.components.size();
  if (k > kMaxComponents) throw PreconditionError("too many support components to enumerate");
  const ComponentMask full = s.full_mask();
  if (full == 0) return true;

  // covering[m]: some firable proper union contains m.
  std::vector<char> firable(full + 1, 0);
  for (ComponentMask mask = 1; mask < full; ++mask) firable[mask] = can_fire(s, mask);
  std::vector<char> covering = firable;
  for (std::size_t bit = 0; bit < k; ++bit) {
    const ComponentMask b = ComponentMask{1} << bit;
    for (ComponentMask mask = 0; mask <= full; ++mask) {
      if (!(mask & b)) covering[mask] |= covering[mask | b];
    }
  }
  for (ComponentMask mask = 1; mask < full; ++mask) {
    if (firable[mask] && covering[full ^ mask]) return false;
  }
  return true;
}

bool is_extremal(const Divisor& d, const RationalFunction& f) {
  const Divisor l = add_divisors(d, principal_divisor(f));
  if (!l.is_effective()) throw PreconditionError("D + (f) is not effective");
  return is_extremal_divisor(l);
}

std::vector<Generator> extremal_generators(const Divisor& d, const std::vector<AnchorCell>& anchors) {
  std::vector<Generator> out;
  for (const auto& a : anchors) {
    if (a.dim != 0) continue;
    RationalFunction f = representative_function(d, a);
    if (is_extremal(d, f)) out.push_back({a, std::move(f)});
  }
  return out;
}

std::vector<Generator> extremal_generators(const Divisor& d) { return extremal_generators(d, anchor_cells(d)); }

}  // namespace linsys
