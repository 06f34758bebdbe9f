#pragma once

// Graph builders and data-file access shared by the test executables.

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "linsys/graph.hpp"
#include "linsys/io.hpp"

namespace fixtures {

using linsys::EdgeSpec;
using linsys::GraphPtr;
using linsys::MetricGraph;
using linsys::Rational;

inline std::filesystem::path data_dir() { return LINSYS_DATA_DIR; }

inline linsys::InputFile load(const std::string& name) { return linsys::read_input(data_dir() / (name + ".json")); }

template <class Length>
std::vector<Rational> to_metric(const std::vector<Length>& lengths) {
  return std::vector<Rational>(lengths.begin(), lengths.end());
}

// Edges e12, e13, e14, e23, e24, e34.
inline GraphPtr k4(const std::vector<Rational>& m) {
  std::vector<EdgeSpec> edges;
  std::size_t k = 0;
  for (int i = 1; i <= 4; ++i) {
    for (int j = i + 1; j <= 4; ++j) {
      edges.push_back({"e" + std::to_string(i) + std::to_string(j), "v" + std::to_string(i), "v" + std::to_string(j), m.at(k++)});
    }
  }
  return MetricGraph::create({"v1", "v2", "v3", "v4"}, std::move(edges));
}

// Two parallel pairs a1, a2 (v1v2) and d1, d2 (v3v4), joined by b (v1v3) and c (v2v4).
inline GraphPtr g020(const std::vector<Rational>& m) {
  return MetricGraph::create({"v1", "v2", "v3", "v4"}, {{"a1", "v1", "v2", m.at(0)},
                                                        {"a2", "v1", "v2", m.at(1)},
                                                        {"b", "v1", "v3", m.at(2)},
                                                        {"c", "v2", "v4", m.at(3)},
                                                        {"d1", "v3", "v4", m.at(4)},
                                                        {"d2", "v3", "v4", m.at(5)}});
}

// Edges aibj in row-major order of (i, j).
inline GraphPtr k33(const std::vector<Rational>& m) {
  std::vector<EdgeSpec> edges;
  std::size_t k = 0;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      edges.push_back({"a" + std::to_string(i) + "b" + std::to_string(j), "a" + std::to_string(i), "b" + std::to_string(j), m.at(k++)});
    }
  }
  return MetricGraph::create({"a1", "a2", "a3", "b1", "b2", "b3"}, std::move(edges));
}

inline GraphPtr loop(const Rational& length) { return MetricGraph::create({"v"}, {{"e", "v", "v", length}}); }

// Square P, Q, R, S with unit sides.
inline GraphPtr c4() {
  return MetricGraph::create({"P", "Q", "R", "S"},
                             {{"PQ", "P", "Q", 1}, {"QR", "Q", "R", 1}, {"RS", "R", "S", 1}, {"PS", "P", "S", 1}});
}

inline GraphPtr unit(GraphPtr (*build)(const std::vector<Rational>&), std::size_t edges) {
  return build(std::vector<Rational>(edges, Rational(1)));
}

// Positive rationals p/q with p in [1, 40] and q in [1, 6].
inline std::vector<Rational> random_metric(std::mt19937_64& rng, std::size_t edges) {
  std::uniform_int_distribution<int> num(1, 40);
  std::uniform_int_distribution<int> den(1, 6);
  std::vector<Rational> out;
  for (std::size_t j = 0; j < edges; ++j) {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

}  // namespace fixtures
