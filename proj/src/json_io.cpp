#include "wco/json_io.hpp"

#include <cmath>
#include <limits>

#include "wco/errors.hpp"

namespace wco::json_io {

namespace {

json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double get_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  fail(ErrorCode::InvalidArgument, "expected a number, got " + j.dump());
}

json cnum(cplx z) { return json::array({z.real(), z.imag()}); }

cplx get_cnum(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_array() || j.size() != 2)
    fail(ErrorCode::InvalidArgument, "complex numbers are [re, im], got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>()};
}

json cvec(const std::vector<cplx>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(cnum(z));
  return out;
}

std::vector<cplx> get_cvec(const json& j) {
  std::vector<cplx> out;
  for (const auto& e : j) out.push_back(get_cnum(e));
  return out;
}

json angle(const Angle& a) {
  if (a.is_exact()) return a.str();
  return a.to_double();
}

Angle get_angle(const json& j) {
  if (j.is_string()) return Angle::parse(j.get<std::string>());
  return Angle::from_double(j.get<double>());
}

json zeros_json(const std::vector<CircleZero>& zs) {
  json out = json::array();
  for (const auto& z : zs) out.push_back({{"angle", angle(z.angle)}, {"order", z.order}});
  return out;
}

std::vector<CircleZero> get_zeros(const json& j) {
  std::vector<CircleZero> out;
  for (const auto& e : j) out.push_back({get_angle(e.at("angle")), e.value("order", 1)});
  return out;
}

template <class E>
E enum_from(const std::string& s, std::initializer_list<E> all, const char* what) {
  for (E e : all)
    if (s == to_string(e)) return e;
  fail(ErrorCode::InvalidArgument, std::string("unknown ") + what + " '" + s + "'");
}

}  // namespace

json to_json(const BlaschkeProduct& b) {
  return {{"zeros", cvec(b.zeros())}, {"rotation", b.rotation()}};
}

BlaschkeProduct blaschke_from_json(const json& j) {
  if (j.contains("power")) return BlaschkeProduct::power(j.at("power").get<int>());
  return BlaschkeProduct(get_cvec(j.at("zeros")), j.value("rotation", 0.0));
}

json to_json(const Classification& c) {
  return {{"kind", to_string(c.kind)},
          {"z0", cnum(c.wolff_denjoy_point)},
          {"deriv_mod", c.derivative_modulus},
          {"multiplicity", c.multiplicity ? json(*c.multiplicity) : json(nullptr)}};
}

Classification classification_from_json(const json& j) {
  Classification c;
  c.kind = enum_from(j.at("kind").get<std::string>(),
                     {DynamicsKind::Elliptic, DynamicsKind::Hyperbolic,
                      DynamicsKind::SingleParabolic, DynamicsKind::DoublyParabolic},
                     "kind");
  c.wolff_denjoy_point = get_cnum(j.at("z0"));
  c.derivative_modulus = j.at("deriv_mod").get<double>();
  if (!j.at("multiplicity").is_null()) c.multiplicity = j.at("multiplicity").get<int>();
  return c;
}

json to_json(const PeriodicOrbit& o) {
  json pts = json::array();
  for (const auto& p : o.points) pts.push_back(p.str());
  return {{"period", o.period}, {"points", pts}};
}

PeriodicOrbit orbit_from_json(const json& j, int degree) {
  PeriodicOrbit o;
  o.degree = degree;
  o.period = j.at("period").get<int>();
  for (const auto& p : j.at("points")) o.points.push_back(Rational::parse(p.get<std::string>()));
  if (static_cast<int>(o.points.size()) != o.period)
    fail(ErrorCode::InvalidArgument, "orbit period does not match its point count");
  return o;
}

json to_json(const SemiconjugacyTable& t) {
  return {{"N", t.grid_size}, {"h", t.values},          {"residual", t.residual},
          {"degree", t.degree}, {"iterations", t.iterations}, {"offset", t.offset}};
}

SemiconjugacyTable semiconjugacy_from_json(const json& j) {
  SemiconjugacyTable t;
  t.grid_size = j.at("N").get<int>();
  t.values = j.at("h").get<std::vector<double>>();
  t.residual = j.at("residual").get<double>();
  t.degree = j.value("degree", 2);
  t.iterations = j.value("iterations", 0);
  t.offset = j.value("offset", 0.0);
  return t;
}

json to_json(const Weight& w) {
  const auto kind = w.kind();
  if (kind == "constant") return {{"kind", kind}, {"value", cnum(w.on_circle(0.0))}};
  if (kind == "polynomial") return {{"kind", kind}, {"coeffs", cvec(*w.taylor_coefficients())}};
  if (kind == "factored")
    return {{"kind", kind},
            {"zeros", zeros_json(w.prescribed_zeros())},
            {"outer_coeffs", cvec(*w.outer_coefficients())},
            {"coeffs", cvec(*w.taylor_coefficients())}};
  return {{"kind", "sampled"}, {"samples", cvec(w.boundary_samples(4096))}};
}

Weight weight_from_json(const json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "constant") return Weight::constant(get_cnum(j.at("value")));
  if (kind == "sampled") return Weight::sampled(get_cvec(j.at("samples")));
  if (kind == "factored" || (kind.empty() && j.contains("outer_coeffs")))
    return Weight::factored(get_zeros(j.at("zeros")), get_cvec(j.at("outer_coeffs")));
  if (kind == "polynomial" || (kind.empty() && j.contains("coeffs")))
    return Weight::polynomial(get_cvec(j.at("coeffs")));
  fail(ErrorCode::InvalidArgument, "unrecognized weight document");
}

json to_json(const AnalyticWeight& a) {
  return {{"kind", "factored"},
          {"coeffs", cvec(a.taylor_coefficients)},
          {"grid_M", a.grid_m},
          {"zeros", zeros_json(a.zeros)},
          {"outer_coeffs", cvec(a.outer_coefficients)},
          {"analyticity_ratio", a.analyticity_ratio},
          {"fidelity", a.fidelity}};
}

json to_json(const SpectralRadiusEstimate& e) {
  return {{"rho_lower", e.rho_lower},
          {"rho_upper_est", e.rho_grid_upper},
          {"gap", e.gap()},
          {"orbit", to_json(e.argmax_orbit)},
          {"max_period", e.max_period},
          {"grid_size", e.grid_size}};
}

json to_json(const Certificate& c) {
  json j = {{"kind", to_string(c.kind)},
            {"radius", num(c.radius)},
            {"depth", c.depth},
            {"margin", num(c.margin)},
            {"anchor", c.anchor ? angle(*c.anchor) : json(nullptr)},
            {"orbit", nullptr},
            {"violation", nullptr},
            {"note", c.note}};
  if (c.orbit) {
    j["orbit"] = to_json(*c.orbit);
    j["orbit"]["degree"] = c.orbit->degree;
  }
  if (c.violation) {
    const auto& v = *c.violation;
    j["violation"] = {{"e", angle(v.e)},
                      {"m", v.m},
                      {"n", v.n},
                      {"lhs_log", num(v.lhs_log)},
                      {"rhs_log", num(v.rhs_log)}};
  }
  return j;
}

Certificate certificate_from_json(const json& j) {
  Certificate c;
  c.kind = enum_from(j.at("kind").get<std::string>(),
                     {CertificateKind::Lemma1Point, CertificateKind::Corollary1Orbit,
                      CertificateKind::Lemma3Fiber, CertificateKind::RejectionTree},
                     "certificate kind");
  c.radius = get_num(j.at("radius"));
  c.depth = j.at("depth").get<int>();
  c.margin = get_num(j.at("margin"));
  if (!j.at("anchor").is_null()) c.anchor = get_angle(j.at("anchor"));
  if (!j.at("orbit").is_null()) c.orbit = orbit_from_json(j.at("orbit"), j["orbit"].value("degree", 2));
  if (!j.at("violation").is_null()) {
    const auto& v = j.at("violation");
    c.violation = ViolationTriple{get_angle(v.at("e")), v.at("m").get<int>(), v.at("n").get<int>(),
                                  get_num(v.at("lhs_log")), get_num(v.at("rhs_log"))};
  }
  c.note = j.value("note", "");
  return c;
}

json to_json(const RadiusVerdict& v) {
  return {{"radius", num(v.radius)},
          {"verdict", to_string(v.verdict)},
          {"depth", v.depth},
          {"certificate", v.certificate ? to_json(*v.certificate) : json(nullptr)}};
}

RadiusVerdict verdict_from_json(const json& j) {
  RadiusVerdict v;
  v.radius = get_num(j.at("radius"));
  v.verdict = enum_from(j.at("verdict").get<std::string>(),
                        {Verdict::Accept, Verdict::Reject, Verdict::Undecided}, "verdict");
  v.depth = j.at("depth").get<int>();
  if (!j.at("certificate").is_null()) v.certificate = certificate_from_json(j.at("certificate"));
  return v;
}

json to_json(const SpectrumResult& r) {
  json certs = json::array(), probes = json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  for (const auto& p : r.probes) probes.push_back(to_json(p));
  return {{"rho", r.rho},
          {"rho_upper_est", r.rho_upper_est},
          {"usf_radii", r.usf_radii},
          {"includes_zero", r.includes_zero},
          {"full_spectrum", {{"shape", "closed_disc"}, {"radius", r.full_spectrum_radius}}},
          {"lsf_equals_spectrum", r.lsf_equals_spectrum},
          {"path", r.path},
          {"certificates", certs},
          {"probes", probes}};
}

SpectrumResult spectrum_from_json(const json& j) {
  SpectrumResult r;
  r.rho = j.at("rho").get<double>();
  r.rho_upper_est = j.at("rho_upper_est").get<double>();
  r.usf_radii = j.at("usf_radii").get<std::vector<double>>();
  r.includes_zero = j.at("includes_zero").get<bool>();
  r.full_spectrum_radius = j.at("full_spectrum").at("radius").get<double>();
  r.lsf_equals_spectrum = j.at("lsf_equals_spectrum").get<bool>();
  r.path = j.at("path").get<std::string>();
  for (const auto& c : j.at("certificates")) r.certificates.push_back(certificate_from_json(c));
  for (const auto& p : j.at("probes")) r.probes.push_back(verdict_from_json(p));
  return r;
}

json to_json(const ScanReport& s) {
  json rows = json::array();
  for (const auto& r : s.rows) rows.push_back(to_json(r));
  return {{"rows", rows}, {"accepted", s.accepted}};
}

json to_json(const Example6Report& r) {
  json products = json::array(), step_b = json::array();
  for (const auto& p : r.products)
    products.push_back({{"n", p.n},
                        {"grid_points", p.grid_points},
                        {"brute_max", p.brute_max},
                        {"bound", p.bound},
                        {"slack", p.bound - p.brute_max},
                        {"ok", p.ok}});
  for (const auto& s : r.step_b)
    step_b.push_back({{"n", s.n},
                      {"brute_max", s.brute_max},
                      {"at_star", s.at_star},
                      {"expected", s.expected},
                      {"ok", s.ok}});
  return {{"k", r.k},
          {"tol", r.tol},
          {"products", products},
          {"step_a", {{"max", r.step_a_max}, {"expected", r.step_a_expected}, {"ok", r.step_a_ok}}},
          {"step_b", step_b},
          {"pass", r.all_ok()}};
}

json to_json(const LayeredSynthesis& l) {
  return {{"weight", to_json(l.weight)},
          {"caps", l.caps},
          {"layer_sup", l.layer_sup},
          {"max_target_error", l.max_target_error},
          {"min_modulus_off_f", l.min_modulus_off_f},
          {"decay_property", l.decay_property},
          {"truncation_bound", l.truncation_bound}};
}

json to_json(const BuiltWeight& b) {
  json orbits = json::array();
  for (const auto& o : b.orbits) orbits.push_back(to_json(o));
  return {{"weight", to_json(b.synthesis)},
          {"orbits", orbits},
          {"zeros", zeros_json(b.zeros)},
          {"spectrum", to_json(b.spectrum)}};
}

json to_json(const Theorem11Report& r) {
  json certified = json::array();
  for (const auto& c : r.certified) certified.push_back(c ? json(*c) : json(nullptr));
  json j = to_json(r.built);
  j["layers"] = to_json(r.layers);
  j["layers"].erase("weight");
  j["n_layers"] = r.n_layers;
  j["certified"] = certified;
  j["positive_off_f"] = r.positive_off_f;
  return j;
}

json to_json(const AnnulusReport& r) {
  json spots = json::array();
  for (const auto& s : r.spot_checks) spots.push_back(to_json(s));
  return {{"r_inner", r.r_inner},
          {"annulus", {r.r_inner, 1.0}},
          {"containment_only", true},
          {"attractor", angle(r.attractor)},
          {"basin_endpoints", r.basin_endpoints},
          {"endpoint_residuals", r.endpoint_residuals},
          {"endpoint_periods", r.endpoint_periods},
          {"basin_length", r.basin_length},
          {"spot_checks", spots}};
}

}  // namespace wco::json_io
