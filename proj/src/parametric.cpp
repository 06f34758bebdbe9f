#include "linsys/parametric.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "linsys/errors.hpp"
#include "linsys/io.hpp"

namespace linsys {

namespace {

std::size_t length_variable(const MetricGraph& g, std::size_t edge) { return g.vertex_count() + edge; }

void require_input(const Divisor& d) {
  if (!d.is_effective()) throw InputError("parametric candidates need an effective divisor");
  if (!d.is_vertex_supported()) throw InputError("parametric candidates need a vertex-supported divisor");
}

void add_edge_rows(ConstraintSystem& sys, const MetricGraph& g, std::size_t j, const SlopePair& slopes) {
  const auto& e = g.edge(j);
  const std::size_t at = vertex_value_variable(e.tail);
  const std::size_t ah = vertex_value_variable(e.head);
  const std::size_t len = length_variable(g, j);
  const auto [s1, s2] = slopes;
  if (s1 + s2 == 0) {
    sys.add_equal({{at, 1}, {ah, -1}, {len, s1}}, 0);
  } else {
    sys.add_less({{at, 1}, {ah, -1}, {len, s1}}, 0);
    sys.add_less({{len, s2}, {at, -1}, {ah, 1}}, 0);
  }
}

ConstraintSystem base_system(const MetricGraph& g) {
  ConstraintSystem sys;
  for (const auto& v : g.vertices()) sys.add_variable("a_" + v);
  for (const auto& e : g.edges()) sys.add_variable("M_" + e.id);
  for (std::size_t j = 0; j < g.edge_count(); ++j) sys.add_greater({{length_variable(g, j), 1}}, 0);
  sys.fix(vertex_value_variable(0), 0);
  return sys;
}

// Edges ordered so that vertices close to vertex 0 see all their edges early.
std::vector<std::size_t> search_order(const MetricGraph& g) {
  std::vector<std::size_t> rank(g.vertex_count(), g.vertex_count());
  std::vector<std::size_t> queue{0};
  rank[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t v = queue[head];
    for (const auto& e : g.edges()) {
      for (std::size_t w : {e.tail, e.head}) {
        if ((e.tail == v || e.head == v) && rank[w] == g.vertex_count()) {
          rank[w] = queue.size();
          queue.push_back(w);
        }
      }
    }
  }
  std::vector<std::size_t> order(g.edge_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = g.edge(x);
    const auto& b = g.edge(y);
    const auto ka = std::pair(std::max(rank[a.tail], rank[a.head]), std::min(rank[a.tail], rank[a.head]));
    const auto kb = std::pair(std::max(rank[b.tail], rank[b.head]), std::min(rank[b.tail], rank[b.head]));
    return ka < kb;
  });
  return order;
}

// Slope pairs within [-deg, deg] with nonnegative interior mass.
std::vector<SlopePair> edge_choices(std::int64_t deg) {
  std::vector<SlopePair> out;
  for (std::int64_t c = 0; c <= deg; ++c) {
    for (std::int64_t s1 = -deg; s1 <= deg; ++s1) {
      const std::int64_t s2 = -c - s1;
      if (s2 >= -deg && s2 <= deg) out.push_back({s1, s2});
    }
  }
  return out;
}

class CandidateSearch {
 public:
  CandidateSearch(const Divisor& d, std::vector<std::size_t> order)
      : d_(d),
        g_(*d.graph()),
        deg_(d.degree()),
        order_(std::move(order)),
        choices_(edge_choices(deg_)),
        open_(g_.vertex_count(), 0) {
    for (const auto& e : g_.edges()) {
      ++open_[e.tail];
      ++open_[e.head];
    }
    partial_ = d.vertex_values();
    slopes_.assign(g_.edge_count(), {0, 0});
  }

  void run_from(const SlopePair& first, std::vector<ParametricCandidate>& out) {
    ConstraintSystem sys = base_system(g_);
    try_assign(0, first, sys, out);
  }

 private:
  void try_assign(std::size_t depth, const SlopePair& pair, ConstraintSystem& sys, std::vector<ParametricCandidate>& out) {
    const std::size_t j = order_[depth];
    const auto& e = g_.edge(j);
    const std::int64_t c = -pair.first - pair.second;
    if (interior_ + c > deg_) return;

    partial_[e.tail] += pair.first;
    partial_[e.head] += pair.second;
    --open_[e.tail];
    --open_[e.head];
    interior_ += c;
    // A vertex with every edge assigned has its final mass, and final
    // masses plus interior masses never exceed deg(D).
    bool ok = true;
    std::int64_t settled = 0;
    const std::size_t ends[] = {e.tail, e.head};
    for (std::size_t k = 0; k < (e.is_loop() ? 1u : 2u); ++k) {
      const std::size_t v = ends[k];
      if (open_[v] != 0) continue;
      if (partial_[v] < 0) ok = false;
      settled += partial_[v];
    }
    settled_ += settled;
    if (ok && settled_ + interior_ <= deg_) {
      const std::size_t base = sys.constraints().size();
      add_edge_rows(sys, g_, j, pair);
      slopes_[j] = pair;
      if (is_strictly_feasible(sys)) descend(depth + 1, sys, out);
      sys.truncate(base);
    }
    settled_ -= settled;
    interior_ -= c;
    ++open_[e.tail];
    ++open_[e.head];
    partial_[e.tail] -= pair.first;
    partial_[e.head] -= pair.second;
  }

  void descend(std::size_t depth, ConstraintSystem& sys, std::vector<ParametricCandidate>& out) {
    if (depth == order_.size()) {
      emit(sys, out);
      return;
    }
    for (const auto& pair : choices_) try_assign(depth, pair, sys, out);
  }

  void emit(const ConstraintSystem& sys, std::vector<ParametricCandidate>& out) {
    const auto point = find_point(sys);
    if (!point) throw InvariantViolation("feasible parametric system has no witness");
    ParametricCandidate candidate;
    candidate.slopes = slopes_;
    candidate.config = configuration_from_slopes(d_, slopes_);
    for (std::size_t j = 0; j < g_.edge_count(); ++j) candidate.witness.push_back((*point)[length_variable(g_, j)]);
    out.push_back(std::move(candidate));
  }

  const Divisor& d_;
  const MetricGraph& g_;
  std::int64_t deg_;
  std::vector<std::size_t> order_;
  std::vector<SlopePair> choices_;
  std::vector<std::int64_t> open_;     // unassigned half-edges per vertex
  std::vector<std::int64_t> partial_;  // d_i plus assigned outgoing slopes
  std::int64_t interior_ = 0;
  std::int64_t settled_ = 0;  // total final mass of completed vertices
  std::vector<SlopePair> slopes_;
};

}  // namespace

ConstraintSystem parametric_system(const Divisor& d, const std::vector<SlopePair>& slopes,
                                   std::span<const std::size_t> order, std::size_t assigned) {
  const MetricGraph& g = *d.graph();
  ConstraintSystem sys = base_system(g);
  for (std::size_t k = 0; k < assigned; ++k) add_edge_rows(sys, g, order[k], slopes.at(order[k]));
  return sys;
}

std::vector<ParametricCandidate> parametric_candidates(const Divisor& d, unsigned jobs) {
  require_input(d);
  const MetricGraph& g = *d.graph();
  if (g.edge_count() == 0) {
    return {{{}, configuration_from_slopes(d, {}), {}}};
  }
  const auto order = search_order(g);
  const auto first_choices = edge_choices(d.degree());

  // Shards are the choices for the first edge of the search order.
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  jobs = std::max(1u, jobs);
  std::vector<std::vector<ParametricCandidate>> found(jobs);
  auto worker = [&](unsigned id) {
    try {
      CandidateSearch search(d, order);
      for (std::size_t k; (k = next++) < first_choices.size();) search.run_from(first_choices[k], found[id]);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = first_choices.size();
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned id = 0; id < jobs; ++id) pool.emplace_back(worker, id);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ParametricCandidate> out;
  for (auto& part : found) std::move(part.begin(), part.end(), std::back_inserter(out));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.slopes < b.slopes; });
  return out;
}

bool witness_holds(const Divisor& d, const ParametricCandidate& c) {
  const MetricGraph& g = *d.graph();
  if (c.slopes.size() != g.edge_count() || c.witness.size() != g.edge_count()) return false;
  if (std::any_of(c.witness.begin(), c.witness.end(), [](const Rational& x) { return x <= 0; })) return false;
  const Divisor at_witness(g.with_lengths(c.witness), d.vertex_values());
  return c.config == configuration_from_slopes(d, c.slopes) &&
         is_strictly_feasible(fixed_slope_constraints(at_witness, c.config, c.slopes));
}

std::vector<AnchorCell> instantiate(const std::vector<ParametricCandidate>& candidates, const Divisor& d) {
  require_input(d);
  std::vector<AnchorCell> out;
  for (const auto& c : candidates) {
    if (is_strictly_feasible(fixed_slope_constraints(d, c.config, c.slopes))) out.push_back(make_anchor_cell(d, c.slopes));
  }
  std::sort(out.begin(), out.end());
  for (const auto& cell : out) check_anchor_invariants(d, cell);
  return out;
}

std::vector<AnchorCell> instantiate(const std::vector<ParametricCandidate>& candidates, const Divisor& d,
                                    std::span<const Rational> metric) {
  if (metric.size() != d.graph()->edge_count()) throw InputError("metric has the wrong number of lengths");
  return instantiate(candidates, Divisor(d.graph()->with_lengths(metric), d.vertex_values()));
}

std::string cache_key(const Divisor& d) {
  Json key = {{"skeleton", to_json(*d.graph(), false)}, {"divisor", to_json(d)}};
  return sha256_hex(key.dump());
}

CacheResult cached_parametric_candidates(const Divisor& d, const std::filesystem::path& dir, unsigned jobs) {
  require_input(d);
  const std::string key = cache_key(d);
  const auto path = dir / (key + ".json");
  const MetricGraph& g = *d.graph();

  if (std::ifstream file{path}) {
    try {
      std::ostringstream text;
      text << file.rdbuf();
      const Json j = parse_json_text(text.str());
      if (j.at("key") == key) {
        CacheResult result;
        for (const auto& c : j.at("candidates")) result.candidates.push_back(candidate_from_json(d, c));
        const bool verified = std::all_of(result.candidates.begin(), result.candidates.end(),
                                          [&](const auto& c) { return witness_holds(d, c); });
        if (verified) {
          result.hit = true;
          return result;
        }
      }
    } catch (const InputError&) {
    } catch (const nlohmann::json::exception&) {
    }
  }

  CacheResult result;
  result.candidates = parametric_candidates(d, jobs);
  Json candidates = Json::array();
  for (const auto& c : result.candidates) candidates.push_back(to_json(g, c));
  const Json j = {{"key", key}, {"skeleton", to_json(g, false)}, {"divisor", to_json(d)}, {"candidates", std::move(candidates)}};

  std::filesystem::create_directories(dir);
  const auto tmp = dir / (key + ".json.tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())));
  {
    std::ofstream out(tmp);
    out << dump(j);
    if (!out) throw InputError("cannot write cache file '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
  return result;
}

}  // namespace linsys
