#pragma once

#include <optional>

#include "wco/angle.hpp"
#include "wco/blaschke.hpp"
#include "wco/circle_dynamics.hpp"
#include "wco/weight.hpp"

namespace wco {

/// T f = w * f o B, stored in the z^d model: `weight` is already expressed in
/// the model angle coordinate.
struct WcoSpec {
  int degree = 2;
  Weight weight;
  std::optional<BlaschkeProduct> original_blaschke;
  std::optional<SemiconjugacyTable> semiconjugacy;

  static WcoSpec model(int d, Weight w);
  /// Moves w through the Shub semiconjugacy of B onto z^d. Plain z^d passes
  /// through untouched; boundary-attracting B throws Unsupported.
  static WcoSpec from_blaschke(const BlaschkeProduct& b, Weight w, int grid_size = 4096,
                               int iterations = 40);
  void validate() const;
};

/// w(t) w(dt) ... w(d^{n-1} t). Moduli are combined in log space; any exactly
/// vanishing factor gives 0.
cplx birkhoff_product(const Weight& w, const Angle& t, int n, int d);

/// Sum of log|w| along the first n points of the orbit of t; -inf on a zero.
double log_birkhoff_modulus(const Weight& w, const Angle& t, int n, int d);

/// (prod over the orbit of |w|)^(1/period); 0 if w vanishes on the orbit.
double orbit_geometric_mean(const Weight& w, const PeriodicOrbit& orbit);

struct SpectralRadiusEstimate {
  /// max of orbit_geometric_mean over orbits of period <= max_period.
  double rho_lower = 0.0;
  /// max over a uniform grid of |w_n|^{1/n}, n = max_period (heuristic),
  /// floored at rho_lower.
  double rho_grid_upper = 0.0;
  PeriodicOrbit argmax_orbit;
  int max_period = 0;
  int grid_size = 0;
  double gap() const { return rho_grid_upper - rho_lower; }
};

/// Ties between orbits resolve to the first one in (period, base) order.
SpectralRadiusEstimate spectral_radius(const WcoSpec& spec, int max_period,
                                       int grid_size = 1 << 16);

}  // namespace wco
