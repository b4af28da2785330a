#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "wco/blaschke.hpp"
#include "wco/errors.hpp"
#include "wco/fourier.hpp"
#include "wco/outer_function.hpp"

using namespace wco;

namespace {

std::vector<double> grid(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t j = 0; j < n; ++j) t[j] = static_cast<double>(j) / static_cast<double>(n);
  return t;
}

ModulusProfile half_chord_profile(int m) {
  const std::size_t n = std::size_t{1} << m;
  ModulusProfile p;
  p.prescribed_zeros = {CircleZero{Angle{Rational{0, 1}}, 1}};
  for (double t : grid(n)) p.samples.push_back(std::abs(std::sin(kPi * t)));
  return p;
}

/// Rotates c so that c[0] is real positive.
std::vector<cplx> normalize_phase(std::vector<cplx> c) {
  const cplx u = std::abs(c[0]) > 0 ? std::conj(c[0]) / std::abs(c[0]) : cplx{1};
  for (auto& v : c) v *= u;
  return c;
}

}  // namespace

TEST_CASE("fourier round trip and grid evaluation") {
  std::vector<cplx> x(64);
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = {std::cos(0.3 * j), std::sin(0.7 * j * j)};
  const auto back = fourier::inverse(fourier::forward(x));
  for (std::size_t j = 0; j < x.size(); ++j) CHECK(std::abs(back[j] - x[j]) < 1e-13);

  const std::vector<cplx> c{1.0, {0, 2}, -0.5};
  const auto v = fourier::evaluate_on_grid(c, 16);
  for (std::size_t j = 0; j < 16; ++j) {
    const cplx z = std::polar(1.0, kTwoPi * j / 16.0);
    CHECK(std::abs(v[j] - (c[0] + c[1] * z + c[2] * z * z)) < 1e-13);
  }
  CHECK(fourier::is_power_of_two(4096));
  CHECK_FALSE(fourier::is_power_of_two(96));
}

TEST_CASE("conjugate function on simple modes") {
  const std::size_t n = 4096;
  const auto t = grid(n);
  std::vector<double> flat(n, -0.7);
  for (double v : conjugate_function(flat)) CHECK(std::abs(v) < 1e-14);

  std::vector<double> c(n);
  for (std::size_t j = 0; j < n; ++j) c[j] = std::cos(kTwoPi * t[j]);
  const auto s = conjugate_function(c);
  double err = 0.0;
  for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(s[j] - std::sin(kTwoPi * t[j])));
  CHECK(err <= 1e-10);

  std::vector<double> bad(n, 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(conjugate_function(bad), Error);
}

TEST_CASE("conjugate of a mollified log chord") {
  // log|1 - e^{i theta}| with the sample on the singularity replaced by its
  // cell average log(pi h) - 1; the conjugate is (theta - pi)/2 on (0, 2 pi).
  // The discrete transform carries an O(h cot(pi t)) bias next to the jump.
  auto worst_error = [](int m, double keep_out) {
    const std::size_t n = std::size_t{1} << m;
    const auto t = grid(n);
    std::vector<double> lp(n);
    const double h = 1.0 / static_cast<double>(n);
    lp[0] = std::log(kPi * h) - 1.0;
    for (std::size_t j = 1; j < n; ++j) lp[j] = std::log(2.0 * std::sin(kPi * t[j]));
    const auto conj = conjugate_function(lp);
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (circle_distance(t[j], 0.0) < keep_out) continue;
      err = std::max(err, std::abs(conj[j] - (kTwoPi * t[j] - kPi) / 2));
    }
    return err;
  };
  CHECK(worst_error(12, 0.125) <= 1e-3);
  CHECK(worst_error(14, 0.05) <= 1e-3);
  CHECK(worst_error(14, 0.05) < 0.3 * worst_error(12, 0.05));
}

TEST_CASE("outer_from_modulus recovers a half chord") {
  const auto w = outer_from_modulus(half_chord_profile(12));
  CHECK(w.analyticity_ratio <= 1e-8);
  const auto c = normalize_phase(w.taylor_coefficients);
  REQUIRE(c.size() >= 2);
  CHECK(std::abs(c[0] - cplx{0.5}) <= 1e-6);
  CHECK(std::abs(c[1] - cplx{-0.5}) <= 1e-6);
  for (std::size_t k = 2; k < c.size(); ++k) CHECK(std::abs(c[k]) <= 1e-8);
  CHECK(w.weight().modulus(Angle{Rational{0, 1}}) == 0.0);
}

TEST_CASE("constant profile gives a unimodular constant") {
  ModulusProfile p;
  p.samples.assign(1024, 1.0);
  const auto w = outer_from_modulus(p);
  CHECK(std::abs(std::abs(w.taylor_coefficients[0]) - 1.0) < 1e-12);
  for (std::size_t k = 1; k < w.taylor_coefficients.size(); ++k)
    CHECK(std::abs(w.taylor_coefficients[k]) < 1e-12);
}

TEST_CASE("outer_from_modulus is idempotent in modulus") {
  const std::size_t n = 4096;
  ModulusProfile p;
  p.prescribed_zeros = {CircleZero{Angle{Rational{1, 4}}, 1}};
  for (double t : grid(n))
    p.samples.push_back(std::abs(std::sin(kPi * (t - 0.25))) * (1.2 + 0.5 * std::cos(kTwoPi * t)));
  const auto first = outer_from_modulus(p);
  CHECK(first.fidelity <= 1e-3);

  ModulusProfile again = p;
  for (std::size_t j = 0; j < n; ++j) again.samples[j] = std::abs(first.boundary_values[j]);
  const auto second = outer_from_modulus(again);
  const auto a = normalize_phase(first.taylor_coefficients);
  const auto b = normalize_phase(second.taylor_coefficients);
  const std::size_t k = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < k; ++i) {
    const cplx x = i < a.size() ? a[i] : cplx{};
    const cplx y = i < b.size() ? b[i] : cplx{};
    CHECK(std::abs(x - y) <= 1e-6);
  }
}

TEST_CASE("profile validation") {
  ModulusProfile p;
  p.samples.assign(100, 1.0);
  CHECK_THROWS_AS(p.validate(), Error);
  p.samples.assign(64, 1.0);
  p.samples[10] = 0.0;
  CHECK_THROWS_AS(outer_from_modulus(p), Error);
  p.samples[10] = -1.0;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("rough profile is flagged as non-analytic") {
  ModulusProfile p;
  for (std::size_t j = 0; j < 64; ++j) p.samples.push_back(j % 2 ? 1e-6 : 1e6);
  try {
    outer_from_modulus(p);
    FAIL("expected NonAnalytic");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonAnalytic);
  }
}

TEST_CASE("peaked profile with circle zeros") {
  // value 1/2 at 0, 1 on the orbit {1/3, 2/3}, zeros at the other preimages
  const std::vector<PointTarget> targets{{Angle{Rational{0, 1}}, 0.5},
                                         {Angle{Rational{1, 3}}, 1.0},
                                         {Angle{Rational{2, 3}}, 1.0}};
  const std::vector<CircleZero> zeros{{Angle{Rational{1, 2}}, 1},
                                      {Angle{Rational{1, 6}}, 1},
                                      {Angle{Rational{5, 6}}, 1}};
  const auto profile = peaked_profile(12, targets, zeros);
  double top = 0.0;
  for (double v : profile.samples) top = std::max(top, v);
  CHECK(top <= 1.0 + 1e-9);

  const auto w = outer_from_modulus(profile).weight();
  CHECK(std::abs(w.modulus(Angle{Rational{0, 1}}) - 0.5) <= 1e-3);
  CHECK(std::abs(w.modulus(Angle{Rational{1, 3}}) - 1.0) <= 1e-3);
  CHECK(std::abs(w.modulus(Angle{Rational{2, 3}}) - 1.0) <= 1e-3);
  CHECK(w.modulus(Angle{Rational{1, 2}}) <= 1e-3);
  CHECK(w.modulus(Angle::from_double(0.5)) <= 1e-6);
  CHECK(w.sup_modulus() <= 1.0 + 1e-3);

  const std::vector<PointTarget> on_zero{{Angle{Rational{1, 2}}, 1.0}};
  CHECK_THROWS_AS(peaked_profile(12, on_zero, zeros), Error);
}

TEST_CASE("layered sum") {
  LayerTargets lt;
  lt.points = {{Angle{Rational{1, 3}}, 1.0}, {Angle{Rational{2, 3}}, 1.0},
               {Angle{Rational{1, 7}}, 0.5}, {Angle{Rational{2, 7}}, 0.5},
               {Angle{Rational{4, 7}}, 0.5}};
  lt.zeros = {{Angle{Rational{1, 6}}, 1}, {Angle{Rational{5, 6}}, 1}};
  lt.lambda0 = 1.0;
  lt.grid_m = 13;

  SUBCASE("one layer matches the direct construction") {
    const auto one = layered_sum_synthesis(lt, 1);
    const auto direct = outer_from_modulus(peaked_profile(lt.grid_m, lt.points, lt.zeros));
    REQUIRE(one.weight.outer_coefficients.size() == direct.outer_coefficients.size());
    for (std::size_t k = 0; k < direct.outer_coefficients.size(); ++k)
      CHECK(std::abs(one.weight.outer_coefficients[k] - direct.outer_coefficients[k]) <= 1e-10);
    CHECK(one.caps.size() == 1);
    CHECK(one.caps[0] == doctest::Approx(1.0));
  }

  SUBCASE("several layers keep targets, caps and decay") {
    const int layers = 4;
    const auto res = layered_sum_synthesis(lt, layers);
    CHECK(res.max_target_error <= 2e-3);
    CHECK(res.weight.analyticity_ratio <= 1e-8);
    double total = 0.0;
    for (int n = 0; n < layers; ++n) {
      const double expected = (n + 1 < layers) ? 3.0 * std::pow(4.0, -(n + 1)) : std::pow(4.0, -n);
      CHECK(res.caps[n] == doctest::Approx(expected));
      CHECK(std::abs(res.layer_sup[n] - res.caps[n]) <= 1e-6);
      total += res.caps[n];
    }
    CHECK(total == doctest::Approx(1.0));
    CHECK(res.decay_property);
    CHECK(res.min_modulus_off_f > 0.0);
    CHECK(res.truncation_bound == doctest::Approx(std::pow(4.0, -layers) * 4.0 / 3.0));
    const Weight w = res.weight.weight();
    CHECK(w.modulus(Angle{Rational{1, 6}}) == 0.0);
  }

  CHECK_THROWS_AS(layered_sum_synthesis(lt, 13), Error);
  CHECK_THROWS_AS(layered_sum_synthesis(lt, 0), Error);
}
