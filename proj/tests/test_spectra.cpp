#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>

#include "wco/errors.hpp"
#include "wco/spectra.hpp"

using namespace wco;

namespace {

Angle q(std::int64_t p, std::int64_t r) { return Angle(Rational(p, r)); }

std::optional<ErrorCode> code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// |w| = 1/2 at 1, 0 at -1, 1 on the 1/3-orbit, 0 at its other preimages
const BuiltWeight& two_circle() {
  static const BuiltWeight built = theorem6_build_weight(2, {0.5, 1.0}, 4);
  return built;
}

WcoSpec two_circle_spec() { return WcoSpec::model(2, two_circle().weight); }

Weight half_chord() { return Weight::polynomial({0.5, -0.5}); }

PeriodicOrbit orbit_of(std::vector<Rational> pts) {
  PeriodicOrbit o;
  o.degree = 2;
  o.period = static_cast<int>(pts.size());
  o.points = std::move(pts);
  return o;
}

// every accept must survive a fresh Birkhoff recomputation at the anchor
void check_orbit_certificate(const WcoSpec& spec, const Certificate& c) {
  REQUIRE(c.kind == CertificateKind::Corollary1Orbit);
  REQUIRE(c.anchor);
  REQUIRE(c.orbit);
  for (int n = 1; n <= 3 * c.orbit->period; ++n) {
    const double lhs = log_birkhoff_modulus(spec.weight, *c.anchor, n, spec.degree);
    CHECK(lhs >= n * std::log(c.radius) - 1e-9);
  }
}

}  // namespace

TEST_CASE("two-circle weight matches its design") {
  const auto& w = two_circle().weight;
  CHECK(w.modulus(q(0, 1)) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(w.modulus(q(1, 3)) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(w.modulus(q(2, 3)) == doctest::Approx(1.0).epsilon(1e-3));
  for (auto z : {q(1, 2), q(1, 6), q(5, 6)}) CHECK(w.modulus(z) <= 1e-10);
  CHECK(w.sup_modulus() <= 1.0 + 1e-6);
}

TEST_CASE("preimage tree search") {
  const auto spec = two_circle_spec();
  const auto acc = lemma1_criterion(spec, 0.5, q(0, 1), 8);
  CHECK(acc.kind == CertificateKind::Lemma1Point);
  CHECK(acc.margin >= 0.0);
  CHECK(acc.depth == 8);

  const auto one = WcoSpec::model(2, Weight::constant(1.0));
  for (auto k : {q(0, 1), q(1, 7), q(3, 10)}) {
    const auto c = lemma1_criterion(one, 1.0, k, 6);
    CHECK(c.accepts());
    CHECK(c.margin == doctest::Approx(0.0).epsilon(1e-12));
  }

  const auto sys = CircleSystem::model(spec);
  int anchors = 0;
  for (const auto& k : rejection_anchors(63, {})) {
    const auto c = lemma1_criterion(spec, 0.75, k, 10);
    REQUIRE(c.kind == CertificateKind::RejectionTree);
    REQUIRE(c.violation);
    CHECK(violation_holds(sys, 0.75, k, *c.violation));
    CHECK(c.violation->lhs_log > c.violation->rhs_log);
    ++anchors;
  }
  // reduced p/q in [0,1) with q <= 63: sum of phi(q)
  CHECK(anchors == 1228);

  CHECK(code_of([&] { (void)lemma1_criterion(spec, 0.0, q(0, 1), 4); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { (void)lemma1_criterion(spec, 0.5, q(0, 1), 0); }) ==
        ErrorCode::InvalidArgument);
  TreeSearchOptions tight;
  tight.node_cap = 100;
  CHECK(code_of([&] { (void)lemma1_criterion(one, 1.0, q(1, 5), 12, tight); }) ==
        ErrorCode::DepthExceeded);
}

TEST_CASE("violation re-verification catches forged triples") {
  const auto spec = two_circle_spec();
  const auto sys = CircleSystem::model(spec);
  const auto c = lemma1_criterion(spec, 0.75, q(1, 5), 10);
  REQUIRE(c.violation);
  auto forged = *c.violation;
  forged.m += 1;  // e no longer maps onto phi^n(k) in m steps
  CHECK_FALSE(violation_holds(sys, 0.75, q(1, 5), forged));
}

TEST_CASE("periodic orbit certificates") {
  const auto spec = two_circle_spec();
  const auto fixed = corollary1_certificate(spec, 0.5, orbit_of({Rational(0, 1)}));
  REQUIRE(fixed);
  CHECK(fixed->radius == doctest::Approx(0.5).epsilon(2e-3));
  check_orbit_certificate(spec, *fixed);

  const auto third = corollary1_certificate(spec, 1.0, orbit_of({Rational(1, 3), Rational(2, 3)}));
  REQUIRE(third);
  CHECK(third->radius == doctest::Approx(1.0).epsilon(2e-3));
  check_orbit_certificate(spec, *third);

  // lambda away from the orbit mean is not certified
  CHECK_FALSE(corollary1_certificate(spec, 0.3, orbit_of({Rational(0, 1)})));

  const auto flat = WcoSpec::model(2, Weight::polynomial({2.0, 0.5}));
  for (const auto& o : periodic_orbits(2, 4))
    CHECK_FALSE(corollary1_certificate(flat, orbit_geometric_mean(flat.weight, o) * 0.9, o));
}

TEST_CASE("fiber of zeros puts 0 in the spectrum") {
  // (z^2 + 1)/2 vanishes at 1/4 and 3/4, the whole fiber over 1/2
  const auto spec = WcoSpec::model(2, Weight::polynomial({0.5, 0.0, 0.5}));
  const auto c = lemma3_zero_check(spec);
  REQUIRE(c);
  CHECK(c->kind == CertificateKind::Lemma3Fiber);
  REQUIRE(c->anchor);
  CHECK(*c->anchor == q(1, 2));

  CHECK_FALSE(lemma3_zero_check(two_circle_spec()));
  CHECK_FALSE(lemma3_zero_check(WcoSpec::model(2, Weight::polynomial({2.0, 1.0}))));
}

TEST_CASE("backward reachability") {
  const auto ex6 = backward_reachability(2, {q(0, 1)}, 10);
  CHECK(ex6.holds);
  CHECK(ex6.exact);

  // 0 has the zero 1/2 as its only other preimage and 0 is hit by the zero's orbit
  const auto ex7 = backward_reachability(2, {q(1, 2), q(1, 6), q(5, 6)}, 10);
  CHECK_FALSE(ex7.holds);
  CHECK_FALSE(ex7.blocked.empty());

  CHECK(backward_reachability(3, {}, 4).holds);
}

TEST_CASE("assemble spectrum") {
  const auto odd = assemble_spectrum(WcoSpec::model(3, half_chord()));
  REQUIRE(odd.usf_radii.size() == 1);
  CHECK(odd.usf_radii[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(odd.full_spectrum_radius == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(odd.lsf_equals_spectrum);
  CHECK(odd.path == "reachability");

  const auto even = assemble_spectrum(WcoSpec::model(2, half_chord()));
  REQUIRE(even.usf_radii.size() == 1);
  CHECK(even.usf_radii[0] == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
  CHECK(even.rho == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
  CHECK_FALSE(even.includes_zero);

  const auto spec = two_circle_spec();
  const auto ex7 = assemble_spectrum(spec);
  CHECK(ex7.path == "scan");
  REQUIRE(ex7.usf_radii.size() == 2);
  CHECK(ex7.usf_radii[0] == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(ex7.usf_radii[1] == doctest::Approx(1.0).epsilon(2e-3));
  CHECK_FALSE(ex7.includes_zero);
  CHECK(ex7.lsf_equals_spectrum);
  CHECK(ex7.full_spectrum_radius == doctest::Approx(1.0).epsilon(2e-3));
  bool has_orbit = false, has_point = false;
  for (const auto& c : ex7.certificates) {
    has_orbit |= c.kind == CertificateKind::Corollary1Orbit;
    has_point |= c.kind == CertificateKind::Lemma1Point;
    if (c.kind == CertificateKind::Corollary1Orbit) check_orbit_certificate(spec, c);
  }
  CHECK(has_orbit);
  CHECK(has_point);
  for (const auto& p : ex7.probes) CHECK(p.verdict == Verdict::Reject);

  const auto nonvanishing = assemble_spectrum(WcoSpec::model(2, Weight::polynomial({2.0, 1.0})));
  CHECK(nonvanishing.path == "no-circle-zeros");
  REQUIRE(nonvanishing.usf_radii.size() == 1);
  CHECK(nonvanishing.usf_radii[0] == nonvanishing.rho);
}

TEST_CASE("spectrum depends on |w| only") {
  for (double alpha : {0.3, 1.7, -2.9}) {
    const auto a = assemble_spectrum(WcoSpec::model(2, half_chord()));
    const auto b = assemble_spectrum(WcoSpec::model(2, half_chord().rotated(alpha)));
    CHECK(a == b);
    const auto t = assemble_spectrum(two_circle_spec());
    const auto tr = assemble_spectrum(WcoSpec::model(2, two_circle().weight.rotated(alpha)));
    CHECK(t == tr);
  }
}

TEST_CASE("boundary-attracting products are routed elsewhere") {
  const auto hyper = BlaschkeProduct({-0.5, -0.5});
  CHECK(code_of([&] { (void)WcoSpec::from_blaschke(hyper, half_chord()); }) ==
        ErrorCode::Unsupported);
}

TEST_CASE("sine product brute force") {
  const auto k1 = verify_example6(1, 1, 1 << 16);
  REQUIRE(k1.products.size() == 1);
  CHECK(k1.products[0].brute_max == doctest::Approx(4.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-10));
  CHECK(k1.products[0].bound == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-14));
  CHECK(k1.step_a_max == doctest::Approx(3.0 * std::sqrt(3.0) / 8).epsilon(1e-10));
  CHECK(k1.step_a_ok);
  CHECK(k1.all_ok());

  const auto k2 = verify_example6(2, 4, 1 << 14);
  CHECK(k2.products.size() == 4);
  const double s = std::sin(2.0 * kPi / 5.0);
  for (const auto& row : k2.products) {
    CHECK(row.brute_max <= std::pow(s, row.n) + 1e-9);
    CHECK(row.ok);
  }
  CHECK(k2.all_ok());

  for (int k = 3; k <= 4; ++k) CHECK(verify_example6(k, 3, 1 << 12).all_ok());
}

TEST_CASE("weights with increasing prescribed circles") {
  const auto three = theorem6_build_weight(2, {0.3, 0.6, 0.9}, 4);
  const auto& r = three.spectrum;
  REQUIRE(r.usf_radii.size() == 3);
  CHECK(r.usf_radii[0] == doctest::Approx(0.3).epsilon(2e-3));
  CHECK(r.usf_radii[1] == doctest::Approx(0.6).epsilon(2e-3));
  CHECK(r.usf_radii[2] == doctest::Approx(0.9).epsilon(2e-3));
  int rejected_between = 0;
  for (const auto& p : r.probes) {
    CHECK(p.verdict == Verdict::Reject);
    if (p.radius > 0.3 && p.radius < 0.9) ++rejected_between;
  }
  CHECK(rejected_between >= 2);

  // the orbits are disjoint and their zero sets avoid every orbit
  for (const auto& z : three.zeros)
    for (const auto& o : three.orbits) CHECK_FALSE(o.contains(z.angle.exact()));

  const auto single = theorem6_build_weight(2, {1.0}, 4);
  REQUIRE(single.spectrum.usf_radii.size() == 1);
  CHECK(single.spectrum.usf_radii[0] == doctest::Approx(1.0).epsilon(2e-3));
  const auto direct = corollary1_certificate(WcoSpec::model(2, single.weight), 1.0, single.orbits[0]);
  REQUIRE(direct);
  CHECK(direct->radius == doctest::Approx(single.spectrum.usf_radii[0]).epsilon(1e-12));

  CHECK(code_of([] { (void)theorem6_build_weight(2, {0.6, 0.3}, 4); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { (void)theorem6_build_weight(2, {0.1, 0.2, 0.3, 0.4}, 1); }) ==
        ErrorCode::OrbitShortage);
}

TEST_CASE("layered weights with decreasing circles") {
  const auto two = theorem11_build_weight(2, {1.0, 0.5}, 1);
  REQUIRE(two.certified.size() == 2);
  for (const auto& c : two.certified) CHECK(c.has_value());
  CHECK(*two.certified[0] == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(*two.certified[1] == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(two.built.spectrum.rho == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(two.positive_off_f);

  const auto three = theorem11_build_weight(2, {1.0, 0.5, 0.25}, 2);
  REQUIRE(three.certified.size() == 3);
  for (const auto& c : three.certified) CHECK(c.has_value());
  const auto spec = WcoSpec::model(2, three.built.weight);
  const auto scan = conjecture1_scan(spec, {0.7, 0.35}, 10);
  REQUIRE(scan.rows.size() == 2);
  for (const auto& row : scan.rows) CHECK(row.verdict == Verdict::Reject);

  const auto zero = theorem11_build_weight(2, {1.0}, 0);
  REQUIRE(zero.certified.size() == 1);
  CHECK(*zero.certified[0] == doctest::Approx(1.0).epsilon(2e-3));

  CHECK(code_of([] { (void)theorem11_build_weight(2, {0.5, 1.0}, 1); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("annulus for a boundary attractor") {
  // attractor at 1 with derivative 2/3; repelling fixed points at 1/3 and 2/3
  const auto b = BlaschkeProduct({-0.5, -0.5});
  const auto w = Weight::polynomial({0.75, 0.25});
  const auto rep = proposition1_annulus(b, w);
  CHECK(circle_distance(rep.attractor.to_double(), 0.0) < 1e-9);
  for (int i = 0; i < 2; ++i) {
    CHECK(rep.endpoint_residuals[static_cast<std::size_t>(i)] <= 1e-8);
    CHECK(rep.endpoint_periods[static_cast<std::size_t>(i)] == 1);
  }
  const double e0 = rep.basin_endpoints[0], e1 = rep.basin_endpoints[1];
  CHECK(std::min(std::abs(e0 - 2.0 / 3), std::abs(e0 - 1.0 / 3)) < 1e-8);
  CHECK(std::min(std::abs(e1 - 2.0 / 3), std::abs(e1 - 1.0 / 3)) < 1e-8);
  CHECK(rep.basin_length == doctest::Approx(2.0 / 3).epsilon(1e-8));
  // |w| at the endpoints: |0.75 + 0.25 e^{2 pi i/3}|
  CHECK(rep.r_inner == doctest::Approx(std::sqrt(0.4375)).epsilon(1e-9));
  CHECK(rep.r_inner < 1.0);
  CHECK_FALSE(rep.spot_checks.empty());

  CHECK(code_of([&] { (void)proposition1_annulus(b, Weight::constant(1.0)); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { (void)proposition1_annulus(BlaschkeProduct::power(2), w); }) ==
        ErrorCode::InvalidArgument);
  // multiplicity three: the circle is repelled from both sides
  CHECK(code_of([&] { (void)proposition1_annulus(BlaschkeProduct({-1.0 / 3, -1.0 / 3}), w); }) ==
        ErrorCode::BasinUnresolved);
}

TEST_CASE("radius scan") {
  const auto spec = two_circle_spec();
  const auto scan = conjecture1_scan(spec, {0.25, 0.5, 0.75, 1.0, 1.2}, 12);
  REQUIRE(scan.rows.size() == 5);
  REQUIRE(scan.accepted.size() == 2);
  CHECK(scan.accepted[0] == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(scan.accepted[1] == doctest::Approx(1.0).epsilon(2e-3));
  for (const auto& row : scan.rows) {
    const bool on_circle = std::abs(row.radius - 0.5) < 1e-9 || std::abs(row.radius - 1.0) < 1e-9;
    CHECK(row.verdict == (on_circle ? Verdict::Accept : Verdict::Reject));
  }
  REQUIRE(scan.rows[4].certificate);
  CHECK_FALSE(scan.rows[4].certificate->note.empty());
  CHECK(scan.csv().rfind("radius,verdict,certificate_kind,depth,margin\n", 0) == 0);

  const auto flat = WcoSpec::model(2, Weight::polynomial({2.0, 1.0}));
  const auto rho = spectral_radius(flat, 8).rho_lower;
  const auto s2 = conjecture1_scan(flat, {0.5 * rho, rho, 1.5 * rho}, 8);
  REQUIRE(s2.accepted.size() == 1);
  CHECK(s2.accepted[0] == doctest::Approx(rho).epsilon(1e-12));
  CHECK(s2.rows[2].verdict == Verdict::Reject);
}
