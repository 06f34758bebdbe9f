#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "linsys/errors.hpp"
#include "linsys/parametric.hpp"

using namespace linsys;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("linsys_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("zero divisor has one candidate") {
  const auto g = fixtures::unit(fixtures::k4, 6);
  const auto cands = parametric_candidates(Divisor::zero(g));
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].slopes == std::vector<SlopePair>(6, {0, 0}));
  CHECK(witness_holds(Divisor::zero(g), cands[0]));
}

TEST_CASE("loop candidates") {
  const Divisor d(fixtures::loop(3), {3});
  const auto cands = parametric_candidates(d);
  std::set<SlopePair> slopes;
  for (const auto& c : cands) {
    slopes.insert(c.slopes[0]);
    CHECK(witness_holds(d, c));
  }
  CHECK(slopes == std::set<SlopePair>{{-2, -1}, {-1, -2}, {-1, -1}, {0, 0}});
  for (int len = 1; len <= 5; ++len) {
    const std::vector<Rational> metric{len};
    CHECK(instantiate(cands, d, metric) == anchor_cells(Divisor(fixtures::loop(len), {3})));
  }
}

TEST_CASE("inputs are validated") {
  const auto g = fixtures::loop(3);
  CHECK_THROWS_AS(parametric_candidates(Divisor(g, {-1})), InputError);
  CHECK_THROWS_AS(parametric_candidates(Divisor(g, {1}, {{0, 1, 1}})), InputError);
  const Divisor d(g, {3});
  CHECK_THROWS_AS(instantiate(parametric_candidates(d), d, std::vector<Rational>{1, 2}), InputError);
}

TEST_CASE("partial systems") {
  const auto d = canonical_divisor(fixtures::unit(fixtures::k4, 6));
  const std::vector<std::size_t> order{0, 1, 2, 3, 4, 5};
  const std::vector<SlopePair> slopes(6, {0, 0});
  const auto base = parametric_system(d, slopes, order, 0);
  CHECK(base.variable_count() == 10);
  CHECK(is_strictly_feasible(base));
  CHECK(is_strictly_feasible(parametric_system(d, slopes, order, 6)));
  std::vector<SlopePair> bad = slopes;
  bad[0] = {1, -1};
  bad[1] = {-1, 1};
  bad[3] = {1, -1};
  // a_1 - a_2 = -M, a_1 - a_3 = M, a_2 - a_3 = -M is inconsistent with M > 0.
  CHECK_FALSE(is_strictly_feasible(parametric_system(d, bad, order, 4)));
}

TEST_CASE("parallel search is deterministic") {
  const auto d = canonical_divisor(fixtures::unit(fixtures::g020, 6));
  CHECK(parametric_candidates(d, 1) == parametric_candidates(d, 3));
}

TEST_CASE("cache key ignores lengths") {
  const auto a = canonical_divisor(fixtures::unit(fixtures::k4, 6));
  const auto b = canonical_divisor(fixtures::k4(fixtures::to_metric<int>({4, 9, 7, 8, 6, 10})));
  CHECK(cache_key(a) == cache_key(b));
  CHECK(cache_key(a).size() == 64);
  CHECK(cache_key(a) != cache_key(Divisor(a.graph(), {2, 1, 1, 0})));
  CHECK(cache_key(a) != cache_key(canonical_divisor(fixtures::unit(fixtures::g020, 6))));
}

TEST_CASE("cache round trip") {
  const auto dir = fresh_dir("cache");
  const Divisor d(fixtures::loop(3), {3});
  const auto first = cached_parametric_candidates(d, dir);
  CHECK_FALSE(first.hit);
  const auto path = dir / (cache_key(d) + ".json");
  REQUIRE(std::filesystem::exists(path));

  const auto second = cached_parametric_candidates(Divisor(fixtures::loop(7), {3}), dir);
  CHECK(second.hit);
  CHECK(second.candidates == first.candidates);

  // A witness that is not a metric forces a recomputation.
  auto j = parse_json_text([&] {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }());
  for (auto& c : j.at("candidates")) {
    if (c.at("slopes").at("e") == Json::array({-2, -1})) c.at("witness").at("e") = 0;
  }
  {
    std::ofstream out(path);
    out << dump(j);
  }
  const auto third = cached_parametric_candidates(d, dir);
  CHECK_FALSE(third.hit);
  CHECK(third.candidates == first.candidates);
  CHECK(cached_parametric_candidates(d, dir).hit);

  {
    std::ofstream out(path);
    out << "{ not json";
  }
  const auto fourth = cached_parametric_candidates(d, dir);
  CHECK_FALSE(fourth.hit);
  CHECK(fourth.candidates == first.candidates);
  std::filesystem::remove_all(dir);
}

TEST_CASE("instantiation matches direct computation on random K4 metrics") {
  const auto g = fixtures::unit(fixtures::k4, 6);
  const auto d = canonical_divisor(g);
  const auto cands = parametric_candidates(d, 4);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 4; ++trial) {
    const auto metric = fixtures::random_metric(rng, 6);
    CHECK(instantiate(cands, d, metric) == anchor_cells(Divisor(g->with_lengths(metric), d.vertex_values())));
  }
}
