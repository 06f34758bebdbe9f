#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "linsys/errors.hpp"
#include "linsys/exact_lp.hpp"
#include "small_rational.hpp"

using namespace linsys;
using detail::SmallOverflow;
using detail::SmallRational;

namespace {

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

struct BoxCase {
  ConstraintSystem system;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

// Random rows over `vars` integer variables in [lo, hi]; the box itself is
// part of the system so the search is bounded.
BoxCase random_box_case(std::mt19937_64& rng, std::size_t vars, std::int64_t lo, std::int64_t hi) {
  BoxCase c{{}, lo, hi};
  for (std::size_t v = 0; v < vars; ++v) {
    c.system.add_variable("x" + std::to_string(v), true);
    c.system.add_greater_equal({{v, 1}}, lo);
    c.system.add_less_equal({{v, 1}}, hi);
  }
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> rows(1, 4);
  std::uniform_int_distribution<int> relation(0, 5);
  std::uniform_int_distribution<int> rhs(-4, 6);
  std::uniform_int_distribution<int> den(1, 3);
  const int count = rows(rng);
  for (int r = 0; r < count; ++r) {
    std::vector<Term> terms;
    for (std::size_t v = 0; v < vars; ++v) terms.push_back({v, coeff(rng)});
    const int kind = relation(rng);
    const Rational b = q(rhs(rng), den(rng));
    if (kind == 0) {
      c.system.add_equal(std::move(terms), b);
    } else if (kind <= 2) {
      c.system.add_less(std::move(terms), b);
    } else {
      c.system.add_less_equal(std::move(terms), b);
    }
  }
  return c;
}

bool box_has_point(const BoxCase& c, std::size_t vars) {
  std::vector<Rational> point(vars, Rational(c.lo));
  while (true) {
    if (c.system.satisfied_by(point)) return true;
    std::size_t k = 0;
    while (k < vars && point[k] == c.hi) point[k++] = c.lo;
    if (k == vars) return false;
    point[k] += 1;
  }
}

}  // namespace

TEST_CASE("strict feasibility") {
  ConstraintSystem s;
  const auto x = s.add_variable("x");
  s.add_less({{x, 1}}, 1);
  s.add_greater({{x, 1}}, 0);
  CHECK(is_strictly_feasible(s));
  const auto p = find_point(s);
  REQUIRE(p);
  CHECK(s.satisfied_by(*p));

  ConstraintSystem t;
  const auto y = t.add_variable("y");
  t.add_less({{y, 1}}, 1);
  t.add_greater_equal({{y, 1}}, 1);
  CHECK_FALSE(is_strictly_feasible(t));
  CHECK_FALSE(find_point(t));

  ConstraintSystem u;
  const auto a = u.add_variable("a");
  const auto b = u.add_variable("b");
  u.add_equal({{a, 1}, {b, 1}}, 2);
  u.add_less_equal({{a, 1}, {b, -1}}, 0);
  u.add_greater_equal({{a, 1}, {b, -1}}, 0);
  const auto w = find_point(u);
  REQUIRE(w);
  CHECK((*w)[a] == 1);
  CHECK((*w)[b] == 1);
}

TEST_CASE("constraints merge repeated variables") {
  ConstraintSystem s;
  const auto x = s.add_variable("x");
  const auto y = s.add_variable("y");
  s.add_less_equal({{x, 1}, {y, 2}, {x, -1}}, 3);
  REQUIRE(s.constraints().size() == 1);
  CHECK(s.constraints()[0].terms.size() == 1);
  CHECK(s.constraints()[0].terms[0].var == y);
  CHECK(s.coefficients(0) == std::vector<Rational>{0, 2});
  CHECK(s.find("y") == y);
  CHECK_FALSE(s.find("z"));
  s.truncate(0);
  CHECK(s.constraints().empty());
}

TEST_CASE("extremize: attained, unattained, unbounded, infeasible") {
  ConstraintSystem s;
  const auto x = s.add_variable("x");
  const auto y = s.add_variable("y");
  s.add_less({{x, 1}, {y, 1}}, 4);
  s.add_less_equal({{x, 1}}, 3);
  s.add_greater_equal({{y, 1}}, 0);

  const auto max_x = extremize(s, x, Direction::Maximize);
  REQUIRE(max_x.bounded());
  CHECK(*max_x.value == 3);
  CHECK(max_x.attained);

  const auto max_y = extremize(s, y, Direction::Maximize);
  CHECK(max_y.status == OptResult::Status::Unbounded);

  s.add_greater_equal({{x, 1}}, 0);
  const auto max_y2 = extremize(s, y, Direction::Maximize);
  REQUIRE(max_y2.bounded());
  CHECK(*max_y2.value == 4);
  CHECK_FALSE(max_y2.attained);
  CHECK_FALSE(extremize(s, y, Direction::Maximize, false).attained);

  const auto min_y = extremize(s, y, Direction::Minimize);
  REQUIRE(min_y.bounded());
  CHECK(*min_y.value == 0);
  CHECK(min_y.attained);

  s.add_greater({{x, 1}, {y, 1}}, 4);
  CHECK(extremize(s, x, Direction::Maximize).status == OptResult::Status::Infeasible);
}

TEST_CASE("integer search") {
  ConstraintSystem s;
  const auto x = s.add_variable("x", true);
  const auto y = s.add_variable("y", true);
  s.add_greater({{x, 2}, {y, -2}}, 0);
  s.add_less({{x, 2}, {y, -2}}, 2);
  s.add_greater_equal({{x, 1}}, 0);
  s.add_less_equal({{x, 1}}, 5);
  CHECK(is_strictly_feasible(s));
  CHECK_FALSE(has_integer_point(s));

  ConstraintSystem t;
  const auto a = t.add_variable("a", true);
  const auto b = t.add_variable("b");
  t.add_greater({{a, 3}}, 1);
  t.add_less({{a, 3}}, 5);
  t.add_less({{b, 2}}, 1);
  t.add_greater({{b, 1}}, 0);
  const auto p = find_integer_point(t);
  REQUIRE(p);
  CHECK((*p)[a] == 1);
  CHECK(t.satisfied_by(*p));

  ConstraintSystem u;
  const auto z = u.add_variable("z", true);
  const auto w = u.add_variable("w", true);
  u.add_equal({{z, 2}, {w, -2}}, 1);
  CHECK_THROWS_AS(find_integer_point(u), PreconditionError);
}

TEST_CASE("integer search agrees with exhaustive enumeration of small boxes") {
  std::mt19937_64 rng(2024);
  int feasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t vars = 1 + trial % 3;
    const auto c = random_box_case(rng, vars, -3, 3);
    const bool expected = box_has_point(c, vars);
    const auto p = find_integer_point(c.system);
    REQUIRE(p.has_value() == expected);
    if (p) {
      ++feasible;
      CHECK(c.system.satisfied_by(*p));
      for (std::size_t v = 0; v < vars; ++v) CHECK(is_integer((*p)[v]));
      CHECK(is_strictly_feasible(c.system));
    }
    if (is_strictly_feasible(c.system)) {
      const auto w = find_point(c.system);
      REQUIRE(w);
      CHECK(c.system.satisfied_by(*w));
    }
  }
  CHECK(feasible > 40);
  CHECK(feasible < 360);
}

TEST_CASE("integer search on twelve binary variables") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = random_box_case(rng, 12, 0, 1);
    const auto p = find_integer_point(c.system);
    REQUIRE(p.has_value() == box_has_point(c, 12));
    if (p) CHECK(c.system.satisfied_by(*p));
  }
}

TEST_CASE("machine-word fractions report overflow") {
  const SmallRational big(std::int64_t{1} << 62);
  CHECK_THROWS_AS(big * big, SmallOverflow);
  CHECK_THROWS_AS(SmallRational(big) += big, SmallOverflow);
  CHECK((SmallRational(6) / SmallRational(4)).to_rational() == q(3, 2));
  CHECK_THROWS_AS(SmallRational::from(Rational(mpz_class("100000000000000000000"))), SmallOverflow);
}

TEST_CASE("huge coefficients fall back to exact arithmetic") {
  const Rational a(mpz_class("4611686018427387903"));  // 2^62 - 1
  const Rational b(mpz_class("4611686018427387901"));  // 2^62 - 3
  const Rational c(mpz_class("4611686018427387899"));  // 2^62 - 5
  ConstraintSystem s;
  const auto x = s.add_variable("x");
  const auto y = s.add_variable("y");
  s.add_less_equal({{x, a}, {y, b}}, c);
  s.add_less_equal({{x, 1}, {y, -1}}, 0);
  const auto r = extremize(s, x, Direction::Maximize);
  REQUIRE(r.bounded());
  Rational expected = c / (a + b);
  expected.canonicalize();
  CHECK(*r.value == expected);

  ConstraintSystem t;
  const auto z = t.add_variable("z");
  const Rational huge(mpz_class("123456789012345678901234567890"));
  t.add_less({{z, huge}}, huge + 1);
  t.add_greater({{z, huge}}, huge - 1);
  const auto p = find_point(t);
  REQUIRE(p);
  CHECK(t.satisfied_by(*p));
}
