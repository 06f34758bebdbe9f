#include "linsys/io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

#include "linsys/errors.hpp"

namespace linsys {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string require_string(const Json& j, const char* what) {
  if (!j.is_string()) throw InputError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

std::int64_t require_integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

Json slopes_to_json(const MetricGraph& g, const std::vector<SlopePair>& slopes) {
  Json out = Json::object();
  for (std::size_t j = 0; j < g.edge_count(); ++j) out[g.edge(j).id] = Json::array({slopes[j].first, slopes[j].second});
  return out;
}

Json config_to_json(const MetricGraph& g, const Configuration& cfg) {
  Json c = Json::object();
  for (std::size_t j = 0; j < g.edge_count(); ++j) c[g.edge(j).id] = cfg.c[j];
  Json d = Json::object();
  for (std::size_t i = 0; i < g.vertex_count(); ++i) d[g.vertices()[i]] = cfg.d_prime[i];
  return {{"c", std::move(c)}, {"d_prime", std::move(d)}};
}

}  // namespace

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(mpz_class(std::to_string(j.get<std::int64_t>())));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InputError("expected an integer or a \"p/q\" string");
}

Json rational_to_json(const Rational& q) {
  if (is_integer(q) && q.get_num().fits_slong_p()) return static_cast<std::int64_t>(q.get_num().get_si());
  return to_string(q);
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

InputFile parse_input(const Json& j, bool lengths_required) {
  try {
    InputFile in;
    std::vector<std::string> vertices;
    for (const auto& v : require(j, "vertices")) vertices.push_back(require_string(v, "vertex id"));
    std::vector<EdgeSpec> edges;
    std::vector<std::string> file_ids;
    for (const auto& e : require(j, "edges")) {
      EdgeSpec spec{require_string(require(e, "id"), "edge id"), require_string(require(e, "tail"), "edge tail"),
                    require_string(require(e, "head"), "edge head"), Rational(1)};
      if (e.contains("length")) {
        spec.length = rational_from_json(e.at("length"));
      } else if (lengths_required) {
        throw InputError("edge '" + spec.id + "' has no length");
      } else {
        in.has_lengths = false;
      }
      file_ids.push_back(spec.id);
      edges.push_back(std::move(spec));
    }
    in.graph = MetricGraph::create(std::move(vertices), std::move(edges));
    for (const auto& id : file_ids) in.file_edge_order.push_back(in.graph->edge_index(id));

    if (j.contains("divisor") && !j.at("divisor").is_null()) {
      const Json& d = j.at("divisor");
      std::vector<std::int64_t> values(in.graph->vertex_count(), 0);
      if (d.contains("vertices")) {
        for (const auto& [id, value] : d.at("vertices").items()) {
          values[in.graph->vertex_index(id)] = require_integer(value, "divisor value");
        }
      }
      std::vector<InteriorChip> chips;
      if (d.contains("interior")) {
        for (const auto& chip : d.at("interior")) {
          chips.push_back({in.graph->edge_index(require_string(require(chip, "edge"), "chip edge")),
                           rational_from_json(require(chip, "position")),
                           require_integer(require(chip, "value"), "chip value")});
        }
      }
      for (const auto& chip : chips) {
        const auto& e = in.graph->edge(chip.edge);
        if (chip.position <= 0 || chip.position >= e.length) {
          throw InputError("chip on '" + e.id + "' is not strictly inside the edge");
        }
      }
      in.divisor = Divisor(in.graph, std::move(values), std::move(chips));
    }
    return in;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed input: ") + e.what());
  } catch (const PreconditionError& e) {
    throw InputError(e.what());
  }
}

InputFile read_input(const std::filesystem::path& path, bool lengths_required) {
  std::ifstream file(path);
  if (!file) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << file.rdbuf();
  return parse_input(parse_json_text(text.str()), lengths_required);
}

Json to_json(const MetricGraph& g, bool with_lengths) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) {
    Json edge = {{"id", e.id}, {"tail", g.vertices()[e.tail]}, {"head", g.vertices()[e.head]}};
    if (with_lengths) edge["length"] = rational_to_json(e.length);
    edges.push_back(std::move(edge));
  }
  return {{"vertices", g.vertices()}, {"edges", std::move(edges)}};
}

Json to_json(const Divisor& d) {
  const MetricGraph& g = *d.graph();
  Json vertices = Json::object();
  for (std::size_t i = 0; i < g.vertex_count(); ++i) vertices[g.vertices()[i]] = d.at_vertex(i);
  Json interior = Json::array();
  for (const auto& chip : d.interior()) {
    interior.push_back({{"edge", g.edge(chip.edge).id}, {"position", rational_to_json(chip.position)}, {"value", chip.value}});
  }
  return {{"vertices", std::move(vertices)}, {"interior", std::move(interior)}};
}

Json input_to_json(const InputFile& in) {
  Json out = to_json(*in.graph, in.has_lengths);
  if (in.divisor) out["divisor"] = to_json(*in.divisor);
  return out;
}

Json to_json(const MetricGraph& g, const AnchorCell& a) {
  return {{"slopes", slopes_to_json(g, a.slopes)}, {"config", config_to_json(g, a.config)}, {"dim", a.dim}, {"s", a.s_value}};
}

Json to_json(const MetricGraph& g, const CellDescriptor& c) {
  Json d_v = Json::object();
  for (std::size_t i = 0; i < g.vertex_count(); ++i) d_v[g.vertices()[i]] = c.d_v[i];
  Json partitions = Json::object();
  Json m_e = Json::object();
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    if (!c.partitions[j].empty()) partitions[g.edge(j).id] = c.partitions[j];
    m_e[g.edge(j).id] = c.m_e[j];
  }
  return {{"d_v", std::move(d_v)}, {"partitions", std::move(partitions)}, {"m_e", std::move(m_e)}, {"dim", c.dim}};
}

Json to_json(const FVector& fv) {
  return {{"f_vector", fv.counts}, {"euler_characteristic", euler_characteristic(fv)}};
}

Json to_json(const RationalFunction& f) {
  const MetricGraph& g = *f.graph();
  Json values = Json::object();
  for (std::size_t i = 0; i < g.vertex_count(); ++i) values[g.vertices()[i]] = rational_to_json(f.vertex_values()[i]);
  Json edges = Json::object();
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    Json points = Json::array();
    for (const auto& bp : f.pieces(j)) points.push_back(Json::array({rational_to_json(bp.position), rational_to_json(bp.value)}));
    edges[g.edge(j).id] = std::move(points);
  }
  return {{"vertex_values", std::move(values)}, {"breakpoints", std::move(edges)}};
}

Json to_json(const MetricGraph& g, const Generator& gen) {
  return {{"cell", to_json(g, gen.cell)}, {"function", to_json(gen.function)}};
}

Json to_json(const MetricGraph& g, const ParametricCandidate& c) {
  Json witness = Json::object();
  for (std::size_t j = 0; j < g.edge_count(); ++j) witness[g.edge(j).id] = rational_to_json(c.witness[j]);
  return {{"slopes", slopes_to_json(g, c.slopes)}, {"config", config_to_json(g, c.config)}, {"witness", std::move(witness)}};
}

ParametricCandidate candidate_from_json(const Divisor& d, const Json& j) {
  const MetricGraph& g = *d.graph();
  try {
    ParametricCandidate c;
    c.slopes.resize(g.edge_count());
    c.witness.resize(g.edge_count());
    const Json& slopes = require(j, "slopes");
    const Json& witness = require(j, "witness");
    if (slopes.size() != g.edge_count() || witness.size() != g.edge_count()) throw InputError("candidate does not match the graph");
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const Json& pair = require(slopes, g.edge(e).id.c_str());
      if (!pair.is_array() || pair.size() != 2) throw InputError("slope entry must be a pair");
      c.slopes[e] = {require_integer(pair[0], "slope"), require_integer(pair[1], "slope")};
      c.witness[e] = rational_from_json(require(witness, g.edge(e).id.c_str()));
    }
    c.config = configuration_from_slopes(d, c.slopes);
    if (config_to_json(g, c.config) != require(j, "config")) throw InputError("candidate configuration does not match its slopes");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed candidate: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(std::string_view text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &size, EVP_sha256(), nullptr) != 1) {
    throw InvariantViolation("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < size; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

}  // namespace linsys
