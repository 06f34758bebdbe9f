#pragma once

// JSON input and output. Rationals are read from integers or "p/q"
// strings and written as integers when integral, strings otherwise. Object
// keys keep insertion order so that output is byte-stable.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "linsys/anchor.hpp"
#include "linsys/cell_complex.hpp"
#include "linsys/chip_firing.hpp"
#include "linsys/graph.hpp"
#include "linsys/parametric.hpp"

namespace linsys {

using Json = nlohmann::ordered_json;

struct InputFile {
  GraphPtr graph;
  std::optional<Divisor> divisor;
  bool has_lengths = true;  // false when any edge omitted its length (1 is substituted)
  std::vector<std::size_t> file_edge_order;  // edge index of the k-th edge in the file
};

/// Throws InputError on malformed or inconsistent input.
InputFile parse_input(const Json& j, bool lengths_required = true);
InputFile read_input(const std::filesystem::path& path, bool lengths_required = true);
Json parse_json_text(const std::string& text);

Rational rational_from_json(const Json& j);
Json rational_to_json(const Rational& q);

Json to_json(const MetricGraph& g, bool with_lengths = true);
Json to_json(const Divisor& d);
Json input_to_json(const InputFile& in);
Json to_json(const MetricGraph& g, const AnchorCell& a);
Json to_json(const MetricGraph& g, const CellDescriptor& c);
Json to_json(const FVector& fv);
Json to_json(const RationalFunction& f);
Json to_json(const MetricGraph& g, const Generator& gen);
Json to_json(const MetricGraph& g, const ParametricCandidate& c);

/// Inverse of to_json for a candidate; the configuration is rederived
/// from the slopes and must agree with the stored one.
ParametricCandidate candidate_from_json(const Divisor& d, const Json& j);

/// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view text);

}  // namespace linsys
