#include "wco/spectral_radius.hpp"

#include <cmath>
#include <limits>

#include "wco/errors.hpp"
#include "wco/fourier.hpp"

namespace wco {

namespace {

constexpr double kLogFloor = -745.0;

double safe_log(double m) {
  if (m == 0.0) return -std::numeric_limits<double>::infinity();
  return std::max(std::log(m), kLogFloor);
}

}  // namespace

WcoSpec WcoSpec::model(int d, Weight w) {
  WcoSpec s;
  s.degree = d;
  s.weight = std::move(w);
  s.validate();
  return s;
}

WcoSpec WcoSpec::from_blaschke(const BlaschkeProduct& b, Weight w, int grid_size,
                               int iterations) {
  const int d = b.degree();
  if (b.is_power_map() && b.rotation() == 0.0) return model(d, std::move(w));
  const auto c = classify(b);
  if (c.kind == DynamicsKind::Hyperbolic || c.kind == DynamicsKind::SingleParabolic) {
    fail(ErrorCode::Unsupported, std::string("boundary dynamics of a ") + to_string(c.kind) +
                                     " product is not conjugate to z^d");
  }
  WcoSpec s;
  s.degree = d;
  s.original_blaschke = b;
  s.semiconjugacy = shub_semiconjugacy(b, grid_size, iterations);
  s.weight = Weight::transported(w, *s.semiconjugacy);
  s.validate();
  return s;
}

void WcoSpec::validate() const {
  if (degree < 2) fail(ErrorCode::InvalidArgument, "degree must be >= 2");
  if (original_blaschke && original_blaschke->degree() != degree) {
    fail(ErrorCode::InvalidArgument, "model degree differs from the Blaschke degree");
  }
}

double log_birkhoff_modulus(const Weight& w, const Angle& t, int n, int d) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "n must be >= 0");
  double acc = 0.0;
  Angle x = t;
  for (int i = 0; i < n; ++i) {
    const double m = w.modulus(x);
    if (m == 0.0) return -std::numeric_limits<double>::infinity();
    acc += safe_log(m);
    x = x.times(d);
  }
  return acc;
}

cplx birkhoff_product(const Weight& w, const Angle& t, int n, int d) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  double log_mod = 0.0, phase = 0.0;
  Angle x = t;
  for (int i = 0; i < n; ++i) {
    const cplx v = w.on_circle(x);
    if (v == cplx{}) return {};
    log_mod += safe_log(std::abs(v));
    phase += std::arg(v);
    x = x.times(d);
  }
  return std::polar(std::exp(log_mod), phase);
}

double orbit_geometric_mean(const Weight& w, const PeriodicOrbit& orbit) {
  double acc = 0.0;
  for (const auto& p : orbit.points) {
    const double m = w.modulus(Angle(p));
    if (m == 0.0) return 0.0;
    acc += safe_log(m);
  }
  return std::exp(acc / static_cast<double>(orbit.points.size()));
}

SpectralRadiusEstimate spectral_radius(const WcoSpec& spec, int max_period, int grid_size) {
  if (max_period < 1) fail(ErrorCode::InvalidArgument, "max_period must be >= 1");
  if (grid_size < 2 || !fourier::is_power_of_two(static_cast<std::size_t>(grid_size))) {
    fail(ErrorCode::InvalidArgument, "grid size must be a power of two");
  }
  const int d = spec.degree;
  SpectralRadiusEstimate out;
  out.max_period = max_period;
  out.grid_size = grid_size;

  const auto orbits = periodic_orbits(d, max_period);
  double best = -1.0;
  for (const auto& orbit : orbits) {
    const double g = orbit_geometric_mean(spec.weight, orbit);
    // rounding-level ties keep the earlier orbit
    if (g > best * (1.0 + 1e-12) || best < 0.0) {
      best = g;
      out.argmax_orbit = orbit;
    }
  }
  out.rho_lower = best;

  // d*j mod N stays on the grid, so |w_n| is a sum of table lookups
  const auto n = static_cast<std::size_t>(grid_size);
  std::vector<double> log_w(n), acc(n, 0.0), next(n);
  for (std::size_t j = 0; j < n; ++j)
    log_w[j] = safe_log(spec.weight.modulus(Angle(Rational(static_cast<std::int64_t>(j),
                                                           static_cast<std::int64_t>(n)))));
  for (int step = 0; step < max_period; ++step) {
    for (std::size_t j = 0; j < n; ++j)
      next[j] = log_w[j] + acc[(j * static_cast<std::size_t>(d)) % n];
    acc.swap(next);
  }
  double top = -std::numeric_limits<double>::infinity();
  for (double v : acc) top = std::max(top, v);
  // a dyadic grid can miss narrow peaks on non-dyadic orbits; the estimate
  // never drops below the certified lower bound
  out.rho_grid_upper = std::max(std::exp(top / max_period), out.rho_lower);
  return out;
}

}  // namespace wco
