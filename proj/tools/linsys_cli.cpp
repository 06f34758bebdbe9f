// Command-line front end for linear systems of divisors on metric graphs.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "linsys/anchor.hpp"
#include "linsys/cell_complex.hpp"
#include "linsys/chip_firing.hpp"
#include "linsys/errors.hpp"
#include "linsys/io.hpp"
#include "linsys/parametric.hpp"

namespace {

using namespace linsys;

constexpr int kExitInput = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitEuler = 3;

struct Options {
  std::string input;
  std::vector<std::string> metric;
  unsigned jobs = 1;
  std::string cache;
  bool table = false;
  bool check = false;
  unsigned seed_metrics = 0;
  std::uint64_t seed = 1;
  std::string dump_systems;
};

struct Problem {
  InputFile in;
  Divisor divisor;
  std::string label;  // metric in file edge order
};

std::string metric_label(const InputFile& in, const MetricGraph& g) {
  std::string out = "(";
  for (std::size_t k = 0; k < in.file_edge_order.size(); ++k) {
    if (k > 0) out += ",";
    out += to_string(g.edge(in.file_edge_order[k]).length);
  }
  return out + ")";
}

Problem on_metric(const InputFile& in, const Divisor& d, const std::vector<Rational>& file_order_metric) {
  if (file_order_metric.size() != in.file_edge_order.size()) {
    throw InputError("--metric needs " + std::to_string(in.file_edge_order.size()) + " lengths");
  }
  std::vector<Rational> lengths(file_order_metric.size());
  for (std::size_t k = 0; k < lengths.size(); ++k) lengths[in.file_edge_order[k]] = file_order_metric[k];
  InputFile moved = in;
  moved.graph = in.graph->with_lengths(lengths);
  moved.has_lengths = true;
  Divisor divisor(moved.graph, d.vertex_values(), d.interior());
  moved.divisor = divisor;
  return {moved, divisor, metric_label(moved, *moved.graph)};
}

// Inputs without a divisor use the canonical divisor. With `refine`, interior
// chips become vertices after any metric override.
std::vector<Problem> load_problems(const Options& opt, bool lengths_required, bool refine) {
  InputFile in = read_input(opt.input, lengths_required && opt.metric.empty() && opt.seed_metrics == 0);
  const Divisor d = in.divisor ? *in.divisor : canonical_divisor(in.graph);
  if (!in.divisor) in.divisor = d;

  std::vector<Problem> out;
  if (opt.metric.empty() && (in.has_lengths || opt.seed_metrics == 0)) out.push_back({in, d, metric_label(in, *in.graph)});
  if (!opt.metric.empty()) {
    std::vector<Rational> metric;
    for (const auto& text : opt.metric) metric.push_back(parse_rational(text));
    out.push_back(on_metric(in, d, metric));
  }
  if (opt.seed_metrics > 0) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> length(1, 100);
    for (unsigned k = 0; k < opt.seed_metrics; ++k) {
      std::vector<Rational> metric;
      for (std::size_t e = 0; e < in.file_edge_order.size(); ++e) metric.emplace_back(length(rng));
      out.push_back(on_metric(in, d, metric));
    }
  }
  if (refine) {
    for (auto& p : out) {
      if (!p.divisor.is_vertex_supported()) p.divisor = refine_to_vertex_supported(p.divisor).second;
    }
  }
  return out;
}

std::string input_digest(const Problem& p) { return sha256_hex(input_to_json(p.in).dump()); }

std::string join(const std::vector<std::int64_t>& xs) {
  std::string out = "(";
  for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? "," : "") + std::to_string(xs[k]);
  return out + ")";
}

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<AnchorCell> compute_anchors(const Problem& p, const Options& opt) {
  AnchorOptions options;
  options.jobs = opt.jobs;
  if (!opt.dump_systems.empty()) {
    std::filesystem::create_directories(opt.dump_systems);
    const MetricGraph& g = *p.divisor.graph();
    options.on_feasible_system = [&](const Configuration& cfg, const ConstraintSystem& sys) {
      std::string name = "system";
      for (auto c : cfg.c) name += "_" + std::to_string(c);
      name += "__";
      for (auto d : cfg.d_prime) name += "_" + std::to_string(d);
      std::ofstream out(std::filesystem::path(opt.dump_systems) / (name + ".txt"));
      AnchorCell cell;
      cell.slopes.resize(g.edge_count());
      cell.config = cfg;
      const Json config = to_json(g, cell).at("config");
      out << "# " << config.dump() << "\n" << sys.to_string();
    };
  }
  auto anchors = anchor_cells(p.divisor, options);
  if (opt.check) {
    for (const auto& a : anchors) {
      check_anchor_invariants(p.divisor, a);
      representative_function(p.divisor, a);
    }
  }
  return anchors;
}

struct Report {
  Json json;
  std::size_t anchors = 0;
  std::optional<std::size_t> extremals;
  FVector fv;
  double seconds = 0;
};

Report base_report(const char* command, const Problem& p, const std::vector<AnchorCell>& anchors) {
  Report r;
  r.anchors = anchors.size();
  r.fv = f_vector(anchors);
  require_contractible(r.fv);
  r.json = {{"command", command}, {"input_digest", input_digest(p)}, {"metric", p.label}, {"anchor_cells", anchors.size()}};
  return r;
}

void finish_report(Report& r) {
  if (r.extremals) r.json["extremal_generators"] = *r.extremals;
  r.json["f_vector"] = r.fv.counts;
  r.json["euler_characteristic"] = euler_characteristic(r.fv);
}

void print_table(const std::vector<Report>& reports, const std::vector<Problem>& problems) {
  std::cout << std::left << std::setw(28) << "Metric" << std::setw(14) << "Anchor cells" << std::setw(12) << "Extremal"
            << std::setw(48) << "f-vector" << "Time (s)\n";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    std::ostringstream time;
    time << std::fixed << std::setprecision(2) << r.seconds;
    std::cout << std::left << std::setw(28) << problems[k].label << std::setw(14) << r.anchors << std::setw(12)
              << (r.extremals ? std::to_string(*r.extremals) : "-") << std::setw(48) << join(r.fv.counts) << " " << time.str()
              << "\n";
  }
}

void emit(const Options& opt, const std::vector<Problem>& problems, std::vector<Report>& reports,
          const std::vector<Json>& payloads) {
  for (std::size_t k = 0; k < reports.size(); ++k) {
    std::fprintf(stderr, "%s: %.3f s\n", problems[k].label.c_str(), reports[k].seconds);
  }
  if (opt.table) {
    print_table(reports, problems);
    return;
  }
  if (payloads.size() == 1) {
    std::cout << dump(payloads.front());
  } else {
    std::cout << dump(Json(payloads));
  }
}

int cmd_anchors(const Options& opt, const char* command, bool want_cells, bool want_extremals, bool want_list) {
  const auto problems = load_problems(opt, true, true);
  std::vector<Report> reports;
  std::vector<Json> payloads;
  for (const auto& p : problems) {
    Clock clock;
    const auto anchors = compute_anchors(p, opt);
    Report r = base_report(command, p, anchors);
    const MetricGraph& g = *p.divisor.graph();
    Json payload = Json::object();
    if (want_extremals) {
      const auto generators = extremal_generators(p.divisor, anchors);
      r.extremals = generators.size();
      if (std::string(command) == "extremals") {
        Json list = Json::array();
        for (const auto& gen : generators) list.push_back(to_json(g, gen));
        payload["extremal_generators"] = std::move(list);
      }
    }
    if (want_cells) {
      Json list = Json::array();
      for (const auto& c : all_cells(p.divisor, anchors)) list.push_back(to_json(g, c));
      payload["cells"] = std::move(list);
    }
    if (want_list) {
      Json list = Json::array();
      for (const auto& a : anchors) list.push_back(to_json(g, a));
      payload["anchor_cells"] = std::move(list);
    }
    r.seconds = clock.seconds();
    finish_report(r);
    Json out = {{"report", r.json}};
    for (auto& [key, value] : payload.items()) out[key] = value;
    payloads.push_back(std::move(out));
    reports.push_back(std::move(r));
  }
  emit(opt, problems, reports, payloads);
  return 0;
}

int cmd_fvector(const Options& opt) {
  const auto problems = load_problems(opt, true, true);
  std::vector<Report> reports;
  std::vector<Json> payloads;
  for (const auto& p : problems) {
    Clock clock;
    Report r = base_report("fvector", p, compute_anchors(p, opt));
    r.seconds = clock.seconds();
    finish_report(r);
    Json out = to_json(r.fv);
    out["report"] = r.json;
    payloads.push_back(std::move(out));
    reports.push_back(std::move(r));
  }
  emit(opt, problems, reports, payloads);
  return 0;
}

int cmd_parametric(const Options& opt) {
  InputFile in = read_input(opt.input, false);
  const Divisor d = in.divisor ? *in.divisor : canonical_divisor(in.graph);
  if (!in.divisor) in.divisor = d;
  const MetricGraph& g = *in.graph;

  Clock clock;
  std::vector<ParametricCandidate> candidates;
  if (opt.cache.empty()) {
    candidates = parametric_candidates(d, opt.jobs);
  } else {
    auto result = cached_parametric_candidates(d, opt.cache, opt.jobs);
    std::fprintf(stderr, "cache %s (%s)\n", result.hit ? "hit" : "miss", cache_key(d).c_str());
    candidates = std::move(result.candidates);
  }
  std::fprintf(stderr, "candidates: %.3f s\n", clock.seconds());

  Json out = {{"key", cache_key(d)}, {"candidate_count", candidates.size()}};
  Json list = Json::array();
  for (const auto& c : candidates) list.push_back(to_json(g, c));
  out["candidates"] = std::move(list);

  if (!opt.metric.empty() || opt.seed_metrics > 0 || (in.has_lengths && opt.table)) {
    const auto problems = load_problems(opt, false, false);
    std::vector<Report> reports;
    Json instances = Json::array();
    for (const auto& p : problems) {
      Clock instance_clock;
      const auto anchors = instantiate(candidates, p.divisor);
      Report r = base_report("parametric", p, anchors);
      r.seconds = instance_clock.seconds();
      finish_report(r);
      Json cells = Json::array();
      for (const auto& a : anchors) cells.push_back(to_json(*p.divisor.graph(), a));
      instances.push_back({{"report", r.json}, {"anchor_cells", std::move(cells)}});
      reports.push_back(std::move(r));
    }
    if (opt.table) {
      print_table(reports, problems);
      return 0;
    }
    out["instances"] = std::move(instances);
  }
  std::cout << dump(out);
  return 0;
}

int cmd_canonical(const Options& opt) {
  InputFile in = read_input(opt.input, false);
  in.divisor = canonical_divisor(in.graph);
  std::cout << dump(input_to_json(in));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear systems of divisors on metric graphs"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("input", opt.input, "graph JSON file")->required();
    cmd->add_option("--metric", opt.metric, "edge lengths in file order, comma separated")->delimiter(',');
    cmd->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--table", opt.table, "print a human-readable table instead of JSON");
    cmd->add_flag("--check", opt.check, "re-verify every anchor cell through its representative");
    cmd->add_option("--seed-metrics", opt.seed_metrics, "also run K random integer metrics in [1, 100]");
    cmd->add_option("--seed", opt.seed, "random seed for --seed-metrics");
  };

  auto* anchors = app.add_subcommand("anchors", "anchor cells");
  add_common(anchors);
  anchors->add_option("--dump-systems", opt.dump_systems, "write every feasible configuration system to DIR");
  auto* fvector = app.add_subcommand("fvector", "f-vector and Euler characteristic");
  add_common(fvector);
  auto* cells = app.add_subcommand("cells", "all cells of the complex");
  add_common(cells);
  auto* extremals = app.add_subcommand("extremals", "extremal generators");
  add_common(extremals);
  auto* report = app.add_subcommand("report", "anchor, extremal and f-vector summary");
  add_common(report);
  auto* parametric = app.add_subcommand("parametric", "metric-free candidates, optionally instantiated");
  add_common(parametric);
  parametric->add_option("--cache", opt.cache, "cache directory");
  auto* canonical = app.add_subcommand("canonical", "write the canonical divisor into the input");
  canonical->add_option("input", opt.input, "graph JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*anchors) return cmd_anchors(opt, "anchors", false, false, true);
    if (*fvector) return cmd_fvector(opt);
    if (*cells) return cmd_anchors(opt, "cells", true, false, false);
    if (*extremals) return cmd_anchors(opt, "extremals", false, true, false);
    if (*report) return cmd_anchors(opt, "report", false, true, false);
    if (*parametric) return cmd_parametric(opt);
    if (*canonical) return cmd_canonical(opt);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const PreconditionError& e) {
    std::cerr << "unsupported input: " << e.what() << "\n";
    return kExitInput;
  } catch (const EulerViolation& e) {
    std::cerr << "Euler characteristic violation: " << e.what() << "\n";
    return kExitEuler;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return 0;
}
