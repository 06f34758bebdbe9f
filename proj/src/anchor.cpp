#include "linsys/anchor.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "linsys/errors.hpp"

namespace linsys {

std::int64_t Configuration::total() const {
  return std::accumulate(c.begin(), c.end(), std::int64_t{0}) +
         std::accumulate(d_prime.begin(), d_prime.end(), std::int64_t{0});
}

ConfigurationEnumerator::ConfigurationEnumerator(std::size_t vertex_count, std::size_t edge_count,
                                                 std::int64_t degree)
    : edges_(edge_count), parts_(vertex_count + edge_count, 0) {
  if (degree < 0) throw PreconditionError("configurations need a nonnegative degree");
  if (parts_.empty()) {
    done_ = degree != 0;
  } else {
    parts_.back() = degree;
  }
}

bool ConfigurationEnumerator::next(Configuration& out) {
  if (done_) return false;
  if (started_) {
    // Lexicographic successor: bump the last position that still has mass
    // to its right and push the remaining mass to the final part.
    std::int64_t suffix = 0;
    std::size_t i = parts_.size();
    while (i > 1) {
      --i;
      suffix += parts_[i];
      if (suffix > 0) break;
    }
    if (parts_.size() < 2 || suffix == 0) {
      done_ = true;
      return false;
    }
    const std::size_t pos = i - 1;
    ++parts_[pos];
    std::fill(parts_.begin() + static_cast<std::ptrdiff_t>(pos) + 1, parts_.end(), 0);
    parts_.back() = suffix - 1;
  }
  started_ = true;
  if (parts_.size() < 2) done_ = true;
  out.c.assign(parts_.begin(), parts_.begin() + static_cast<std::ptrdiff_t>(edges_));
  out.d_prime.assign(parts_.begin() + static_cast<std::ptrdiff_t>(edges_), parts_.end());
  return true;
}

std::uint64_t ConfigurationEnumerator::count(std::size_t vertex_count, std::size_t edge_count, std::int64_t degree) {
  const std::uint64_t k = vertex_count + edge_count;
  if (k == 0) return degree == 0 ? 1 : 0;
  // binom(d + k - 1, d), built incrementally so every step is exact.
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= static_cast<std::uint64_t>(degree); ++i) result = result * (k - 1 + i) / i;
  return result;
}

std::vector<Configuration> enumerate_configurations(std::size_t vertex_count, std::size_t edge_count,
                                                    std::int64_t degree) {
  std::vector<Configuration> out;
  ConfigurationEnumerator it(vertex_count, edge_count, degree);
  Configuration cfg;
  while (it.next(cfg)) out.push_back(cfg);
  return out;
}

namespace {

void require_anchor_input(const Divisor& d) {
  if (!d.is_effective()) throw InputError("divisor must be effective");
  if (!d.is_vertex_supported()) throw InputError("divisor must be vertex-supported; refine the graph first");
}

}  // namespace

ConstraintSystem build_constraints(const Divisor& d, const Configuration& cfg) {
  require_anchor_input(d);
  const MetricGraph& g = *d.graph();
  if (cfg.c.size() != g.edge_count() || cfg.d_prime.size() != g.vertex_count()) {
    throw InputError("configuration does not match the graph");
  }
  if (cfg.total() != d.degree()) throw InputError("configuration does not add up to deg(D)");

  ConstraintSystem sys;
  for (const auto& v : g.vertices()) sys.add_variable("a_" + v);
  for (const auto& e : g.edges()) {
    sys.add_variable("s_" + e.id + "_1", true);
    sys.add_variable("s_" + e.id + "_2", true);
  }

  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    const auto& e = g.edge(j);
    const std::size_t s1 = slope_variable(g, j, 0);
    const std::size_t s2 = slope_variable(g, j, 1);
    const std::size_t at = vertex_value_variable(e.tail);
    const std::size_t ah = vertex_value_variable(e.head);
    if (cfg.c[j] == 0) {
      // f linear on the edge.
      sys.add_equal({{s1, 1}, {s2, 1}}, 0);
      sys.add_equal({{at, 1}, {ah, -1}, {s1, e.length}}, 0);
    } else {
      // Two pieces meeting strictly inside the edge.
      sys.add_less({{s1, 1}, {s2, 1}}, 0);
      sys.add_less({{s2, e.length}, {at, -1}, {ah, 1}}, 0);
      sys.add_less({{at, 1}, {ah, -1}, {s1, e.length}}, 0);
    }
    sys.add_equal({{s1, 1}, {s2, 1}}, -cfg.c[j]);
  }
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    std::vector<Term> outgoing;
    for (std::size_t j = 0; j < g.edge_count(); ++j) {
      if (g.edge(j).tail == i) outgoing.push_back({slope_variable(g, j, 0), 1});
      if (g.edge(j).head == i) outgoing.push_back({slope_variable(g, j, 1), 1});
    }
    sys.add_equal(std::move(outgoing), cfg.d_prime[i] - d.at_vertex(i));
  }
  sys.fix(vertex_value_variable(0), 0);
  return sys;
}

ConstraintSystem fixed_slope_constraints(const Divisor& d, const Configuration& cfg,
                                         const std::vector<SlopePair>& slopes) {
  ConstraintSystem sys = build_constraints(d, cfg);
  const MetricGraph& g = *d.graph();
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    sys.fix(slope_variable(g, j, 0), slopes[j].first);
    sys.fix(slope_variable(g, j, 1), slopes[j].second);
  }
  return sys;
}

Configuration configuration_from_slopes(const Divisor& d, const std::vector<SlopePair>& slopes) {
  const MetricGraph& g = *d.graph();
  if (slopes.size() != g.edge_count()) throw PreconditionError("slope tuple does not match the graph");
  Configuration cfg;
  cfg.c.resize(g.edge_count());
  cfg.d_prime = d.vertex_values();
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    cfg.c[j] = -slopes[j].first - slopes[j].second;
    cfg.d_prime[g.edge(j).tail] += slopes[j].first;
    cfg.d_prime[g.edge(j).head] += slopes[j].second;
  }
  return cfg;
}

std::int64_t s_value(const Configuration& cfg) {
  std::int64_t s = 0;
  for (auto c : cfg.c) {
    if (c >= 1) s += c - 1;
  }
  return s;
}

std::int64_t cell_dimension(const MetricGraph& g, const AnchorCell& a) {
  std::vector<std::size_t> removal(g.edge_count());
  for (std::size_t j = 0; j < g.edge_count(); ++j) removal[j] = a.config.c.at(j) > 0 ? 1 : 0;
  return static_cast<std::int64_t>(components_after_interior_removal(g, removal)) - 1;
}

AnchorCell make_anchor_cell(const Divisor& d, const std::vector<SlopePair>& slopes) {
  AnchorCell cell;
  cell.slopes = slopes;
  cell.config = configuration_from_slopes(d, slopes);
  cell.dim = cell_dimension(*d.graph(), cell);
  cell.s_value = s_value(cell.config);
  return cell;
}

void check_anchor_invariants(const Divisor& d, const AnchorCell& a) {
  const MetricGraph& g = *d.graph();
  const std::int64_t deg = d.degree();
  auto fail = [](const std::string& what) { throw InvariantViolation("anchor cell invariant: " + what); };
  if (a.slopes.size() != g.edge_count()) fail("slope tuple size");
  if (a.config != configuration_from_slopes(d, a.slopes)) fail("configuration does not match the slopes");
  for (auto x : a.config.c) {
    if (x < 0) fail("negative interior mass");
  }
  for (auto x : a.config.d_prime) {
    if (x < 0) fail("negative vertex mass");
  }
  for (const auto& [s1, s2] : a.slopes) {
    if (std::abs(s1) > deg || std::abs(s2) > deg) fail("slope outside [-deg D, deg D]");
  }
  if (a.dim != cell_dimension(g, a) || a.dim < 0 || a.dim > deg) fail("dimension");
  if (deg >= 1 && g.is_bridgeless() && a.dim > deg - 1) fail("dimension exceeds deg D - 1 on a bridgeless graph");
  if (a.s_value != s_value(a.config)) fail("s(A)");
}

namespace {

class ConfigurationSearch {
 public:
  ConfigurationSearch(const Divisor& d, const Configuration& cfg) : d_(d), g_(*d.graph()), cfg_(cfg) {}

  void run(std::vector<AnchorCell>& out, const AnchorOptions& options, std::mutex& callback_mutex) {
    ConstraintSystem sys = build_constraints(d_, cfg_);
    if (!has_integer_point(sys)) return;
    if (options.on_feasible_system) {
      std::lock_guard lock(callback_mutex);
      options.on_feasible_system(cfg_, sys);
    }
    // s_{j,2} = -c_j - s_{j,1}, so only the tail slopes need ranges.
    lo_.resize(g_.edge_count());
    hi_.resize(g_.edge_count());
    for (std::size_t j = 0; j < g_.edge_count(); ++j) {
      const auto var = slope_variable(g_, j, 0);
      const auto lo = extremize(sys, var, Direction::Minimize, false);
      const auto hi = extremize(sys, var, Direction::Maximize, false);
      if (!lo.bounded() || !hi.bounded()) throw InvariantViolation("unbounded slope in a feasible configuration");
      lo_[j] = ceil_to_int(*lo.value);
      hi_[j] = floor_to_int(*hi.value);
    }
    slopes_.assign(g_.edge_count(), {0, 0});
    descend(0, sys, out);
  }

 private:
  // Fixes edges in place on `sys` and restores it before returning.
  void descend(std::size_t edge, ConstraintSystem& sys, std::vector<AnchorCell>& out) {
    if (edge == g_.edge_count()) {
      AnchorCell cell;
      cell.slopes = slopes_;
      cell.config = cfg_;
      cell.dim = cell_dimension(g_, cell);
      cell.s_value = s_value(cfg_);
      out.push_back(std::move(cell));
      return;
    }
    const std::size_t base = sys.constraints().size();
    for (std::int64_t s1 = lo_[edge]; s1 <= hi_[edge]; ++s1) {
      const std::int64_t s2 = -cfg_.c[edge] - s1;
      sys.fix(slope_variable(g_, edge, 0), s1);
      sys.fix(slope_variable(g_, edge, 1), s2);
      // A partial fixing that is already strictly infeasible cannot extend.
      if (is_strictly_feasible(sys)) {
        slopes_[edge] = {s1, s2};
        descend(edge + 1, sys, out);
      }
      sys.truncate(base);
    }
  }

  const Divisor& d_;
  const MetricGraph& g_;
  const Configuration& cfg_;
  std::vector<std::int64_t> lo_, hi_;
  std::vector<SlopePair> slopes_;
};

}  // namespace

std::vector<AnchorCell> anchor_cells(const Divisor& d, const AnchorOptions& options) {
  require_anchor_input(d);
  const MetricGraph& g = *d.graph();

  ConfigurationEnumerator configs(g.vertex_count(), g.edge_count(), d.degree());
  std::mutex feed_mutex;
  std::mutex callback_mutex;
  std::exception_ptr failure;
  const unsigned jobs = std::max(1u, options.jobs);
  std::vector<std::vector<AnchorCell>> found(jobs);

  auto worker = [&](unsigned id) {
    try {
      Configuration cfg;
      for (;;) {
        {
          std::lock_guard lock(feed_mutex);
          if (failure || !configs.next(cfg)) return;
        }
        ConfigurationSearch(d, cfg).run(found[id], options, callback_mutex);
      }
    } catch (...) {
      std::lock_guard lock(feed_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned id = 0; id < jobs; ++id) pool.emplace_back(worker, id);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<AnchorCell> cells;
  for (auto& part : found) std::move(part.begin(), part.end(), std::back_inserter(cells));
  std::sort(cells.begin(), cells.end());
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (cells[i].slopes == cells[i - 1].slopes) throw InvariantViolation("two configurations produced the same slopes");
  }
  for (const auto& cell : cells) check_anchor_invariants(d, cell);
  return cells;
}

RationalFunction representative_function(const Divisor& d, const AnchorCell& a) {
  const MetricGraph& g = *d.graph();
  const auto point = find_point(fixed_slope_constraints(d, a.config, a.slopes));
  if (!point) throw InvariantViolation("anchor cell has no realizing function");

  std::vector<Rational> values(g.vertex_count());
  for (std::size_t i = 0; i < g.vertex_count(); ++i) values[i] = (*point)[vertex_value_variable(i)];

  std::vector<std::vector<Breakpoint>> pieces;
  std::vector<InteriorChip> expected_chips;
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    const auto& e = g.edge(j);
    const auto [s1, s2] = a.slopes[j];
    const Rational& at = values[e.tail];
    const Rational& ah = values[e.head];
    if (a.config.c[j] == 0) {
      pieces.push_back({{0, at}, {e.length, ah}});
    } else {
      const Rational x = (ah - at + s2 * e.length) / Rational(s1 + s2);
      pieces.push_back({{0, at}, {x, at + s1 * x}, {e.length, ah}});
      expected_chips.push_back({j, x, a.config.c[j]});
    }
  }
  RationalFunction f(d.graph(), std::move(values), std::move(pieces));

  const Divisor l = add_divisors(d, principal_divisor(f));
  if (!l.is_effective() || l.vertex_values() != a.config.d_prime || l.interior() != expected_chips) {
    throw InvariantViolation("representative function does not reproduce its anchor cell");
  }
  return f;
}

}  // namespace linsys
