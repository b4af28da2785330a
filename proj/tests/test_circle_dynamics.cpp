#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "wco/circle_dynamics.hpp"
#include "wco/errors.hpp"

using namespace wco;

namespace {

Angle q(std::int64_t p, std::int64_t r) { return Angle(Rational(p, r)); }

std::int64_t ipow(int d, int m) {
  std::int64_t p = 1;
  for (int i = 0; i < m; ++i) p *= d;
  return p;
}

}  // namespace

TEST_CASE("rational angles reduce and order") {
  CHECK(Rational(2, 6) == Rational(1, 3));
  CHECK(Rational(-1, 3) == Rational(2, 3));
  CHECK(Rational(7, 3) == Rational(1, 3));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK_THROWS_AS(Rational(1, 0), Error);
  CHECK(Angle::parse("4/6") == q(2, 3));
  CHECK(Angle::parse("0.25").to_double() == 0.25);
  CHECK(circle_distance(q(1, 10), q(9, 10)) == doctest::Approx(0.2));
}

TEST_CASE("doubling step") {
  CHECK(doubling_step(q(1, 3), 2) == q(2, 3));
  CHECK(doubling_step(q(2, 3), 2) == q(1, 3));
  CHECK(doubling_power(q(1, 7), 2, 3) == q(1, 7));
  CHECK(doubling_power(q(1, 7), 2, 1) == q(2, 7));
  CHECK(doubling_step(Angle::from_double(0.75), 2).to_double() == 0.5);
}

TEST_CASE("periodic orbit enumeration") {
  const auto two = periodic_orbits(2, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].period == 1);
  CHECK(two[0].points == std::vector<Rational>{Rational(0, 1)});
  CHECK(two[1].period == 2);
  CHECK(two[1].points == std::vector<Rational>{Rational(1, 3), Rational(2, 3)});

  const auto three = periodic_orbits(3, 1);
  REQUIRE(three.size() == 2);
  CHECK(three[0].base() == Rational(0, 1));
  CHECK(three[1].base() == Rational(1, 2));

  CHECK_THROWS_AS(periodic_orbits(2, 0), Error);
  CHECK_THROWS_AS(periodic_orbits(2, 21), Error);
  OrbitEnumerationLimits tight;
  tight.max_points = 100;
  try {
    (void)periodic_orbits(2, 10, tight);
    FAIL("expected LimitExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LimitExceeded);
  }
}

TEST_CASE("orbit counting matches a brute-force fixed-point count") {
  for (auto [d, max_m] : {std::pair{2, 8}, std::pair{3, 6}}) {
    const auto orbits = periodic_orbits(d, max_m);
    for (int m = 1; m <= max_m; ++m) {
      // oracle: apply phi^m exactly to every j/(d^m - 1)
      const std::int64_t n = ipow(d, m) - 1;
      std::int64_t brute = 0;
      for (std::int64_t j = 0; j < n; ++j)
        brute += doubling_power(q(j, n), d, m) == q(j, n) ? 1 : 0;
      std::int64_t enumerated = 0;
      for (const auto& o : orbits)
        if (m % o.period == 0) enumerated += o.period;
      CHECK(brute == n);
      CHECK(enumerated == n);
    }
    // every enumerated orbit is exactly periodic with its smallest period
    std::set<Rational> seen;
    for (const auto& o : orbits) {
      CHECK(doubling_power(Angle(o.base()), d, o.period) == Angle(o.base()));
      for (int p = 1; p < o.period; ++p)
        CHECK_FALSE(doubling_power(Angle(o.base()), d, p) == Angle(o.base()));
      for (const auto& pt : o.points) CHECK(seen.insert(pt).second);
    }
  }
}

TEST_CASE("default max period keeps the point budget") {
  CHECK(default_max_period(2) == 12);
  CHECK(default_max_period(4) == 9);
  CHECK(default_max_period(8) == 6);
}

TEST_CASE("preimages form a section of the doubling map") {
  const auto p0 = preimages(q(0, 1), 2);
  CHECK(p0 == std::vector<Angle>{q(0, 1), q(1, 2)});
  const auto p13 = preimages(q(1, 3), 2);
  CHECK(p13 == std::vector<Angle>{q(1, 6), q(2, 3)});
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 4);
    const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 5000);
    const Angle t = q(static_cast<std::int64_t>(rng() % den), den);
    const auto pre = preimages(t, d);
    REQUIRE(pre.size() == static_cast<std::size_t>(d));
    for (const auto& s : pre) CHECK(doubling_step(s, d) == t);
  }
}

TEST_CASE("backward orbits approach their target") {
  // u = 1/2, v = 1/7, n = 12
  const auto chain = backward_orbit_to(q(1, 2), q(1, 7), 2, 12);
  REQUIRE(chain.size() == 12);
  CHECK(chain.front() == q(1, 2));
  for (std::size_t k = 1; k < chain.size(); ++k)
    CHECK(doubling_step(chain[k], 2) == chain[k - 1]);
  CHECK(circle_distance(chain.back(), q(1, 7)) <= std::ldexp(1.0, -11));

  for (int n = 1; n <= 30; ++n) {
    const auto c = backward_orbit_to(q(0, 1), q(1, 3), 2, n);
    CHECK(circle_distance(c.back(), q(1, 3)) <= std::ldexp(1.0, -(n - 1)));
    // v == u: the chain of length n ends within d^{-(n-1)} of u
    const auto self = backward_orbit_to(q(2, 9), q(2, 9), 3, std::min(n, 20));
    CHECK(circle_distance(self.back(), q(2, 9)) <=
          std::pow(3.0, -(std::min(n, 20) - 1)));
  }

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const int n = 1 + static_cast<int>(rng() % 14);
    const Angle u = q(static_cast<std::int64_t>(rng() % 97), 97);
    const Angle v = q(static_cast<std::int64_t>(rng() % 101), 101);
    const auto c = backward_orbit_to(u, v, d, n);
    CHECK(c.front() == u);
    for (std::size_t k = 1; k < c.size(); ++k) CHECK(doubling_step(c[k], d) == c[k - 1]);
    CHECK(circle_distance(c.back(), v) <= std::pow(d, -(n - 1)));
  }
}

TEST_CASE("cyclic order tests") {
  CHECK(cyclic_orientation(q(1, 5), q(2, 5), q(4, 5)) == 1);
  CHECK(cyclic_orientation(q(2, 5), q(4, 5), q(3, 5)) == -1);
  CHECK(cyclic_orientation(q(1, 5), q(1, 5), q(4, 5)) == 0);

  CHECK(is_order_preserving(periodic_orbits(2, 2)[1]).preserving);

  const auto o7 = periodic_orbits(2, 3);
  const auto it = std::find_if(o7.begin(), o7.end(),
                               [](const PeriodicOrbit& o) { return o.base() == Rational(1, 7); });
  REQUIRE(it != o7.end());
  CHECK(is_order_preserving(*it).preserving);

  // brute-force oracle on the orbit of 1/7
  const std::vector<Angle> pts{q(1, 7), q(2, 7), q(4, 7)};
  const std::vector<Angle> img{q(2, 7), q(4, 7), q(1, 7)};
  CHECK(cyclic_orientation(pts[0], pts[1], pts[2]) == cyclic_orientation(img[0], img[1], img[2]));

  const std::vector<Angle> five{q(1, 5), q(2, 5), q(4, 5), q(3, 5)};
  std::vector<Angle> five_img;
  for (const auto& a : five) five_img.push_back(doubling_step(a, 2));
  const auto res = is_order_preserving(five, five_img);
  CHECK_FALSE(res.preserving);
  REQUIRE(res.witness_image.has_value());
  CHECK((*res.witness_image)[0] == q(2, 5));
  CHECK((*res.witness_image)[1] == q(4, 5));
  CHECK((*res.witness_image)[2] == q(3, 5));
}

TEST_CASE("order-preserving orbit search") {
  const auto one = find_order_preserving_orbits(2, 1, 1);
  REQUIRE(one.preserving.size() == 1);
  CHECK(one.preserving[0].points == std::vector<Rational>{Rational(0, 1)});

  const auto two = find_order_preserving_orbits(2, 2, 4);
  REQUIRE(two.preserving.size() == 2);
  REQUIRE(two.failing.has_value());
  CHECK(two.failing->base() == Rational(1, 5));

  for (auto [d, count, max_period] : {std::tuple{2, 3, 6}, std::tuple{3, 2, 4}}) {
    const auto sel = find_order_preserving_orbits(d, count, max_period);
    REQUIRE(static_cast<int>(sel.preserving.size()) == count);
    std::set<Rational> seen;
    for (const auto& o : sel.preserving) {
      CHECK(o.period <= max_period);
      CHECK(is_order_preserving(o).preserving);
      for (const auto& p : o.points) CHECK(seen.insert(p).second);
    }
    REQUIRE(sel.failing.has_value());
    CHECK_FALSE(is_order_preserving(*sel.failing).preserving);
    for (const auto& p : sel.failing->points) CHECK(seen.count(p) == 0);
  }

  try {
    (void)find_order_preserving_orbits(2, 5, 2);
    FAIL("expected NotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotFound);
  }
}

TEST_CASE("Shub semiconjugacy") {
  const auto id = shub_semiconjugacy(BlaschkeProduct::power(2), 1024, 20);
  CHECK(id.residual < 1e-12);
  for (int i = 0; i < 1024; ++i) CHECK(std::abs(id.values[i] - i / 1024.0) < 1e-12);

  const BlaschkeProduct b({0.0, 0.3});
  const auto table = shub_semiconjugacy(b, 4096, 40);
  CHECK(table.residual <= 1e-6);
  CHECK(table.monotone());
  CHECK(table.values[0] == 0.0);
  // total increase 1: the wrap-around step is no larger than the others
  double max_step = 0.0;
  for (std::size_t i = 1; i < table.values.size(); ++i)
    max_step = std::max(max_step, table.values[i] - table.values[i - 1]);
  CHECK(max_step < 0.01);
  CHECK(1.0 - table.values.back() > 0.0);
  CHECK(1.0 - table.values.back() <= 1.5 * max_step);
  // inverse of the model coordinate
  for (double t : {0.05, 0.3, 0.61, 0.97}) {
    CHECK(circle_distance(table.inverse_model_angle(table.model_angle(t)), t) < 1e-9);
  }

  // residual shrinks by about 1/d per extra iteration
  const double r5 = shub_semiconjugacy(b, 4096, 5).residual;
  const double r6 = shub_semiconjugacy(b, 4096, 6).residual;
  const double r7 = shub_semiconjugacy(b, 4096, 7).residual;
  CHECK(r6 / r5 == doctest::Approx(0.5).epsilon(0.25));
  CHECK(r7 / r6 == doctest::Approx(0.5).epsilon(0.25));
}
