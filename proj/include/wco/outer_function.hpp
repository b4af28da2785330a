#pragma once

#include <span>
#include <vector>

#include "wco/angle.hpp"
#include "wco/weight.hpp"

namespace wco {

/// Target boundary modulus on a uniform 2^M grid, with prescribed circle zeros.
struct ModulusProfile {
  std::vector<double> samples;
  std::vector<CircleZero> prescribed_zeros;
  bool smooth_off_zeros = true;

  int grid_m() const;
  /// Throws InvalidArgument when a structural invariant fails.
  void validate() const;
};

/// Synthesized disc-algebra weight: zero factors times an outer part.
struct AnalyticWeight {
  std::vector<cplx> taylor_coefficients;
  std::vector<cplx> boundary_values;
  std::vector<CircleZero> zeros;
  std::vector<cplx> outer_coefficients;
  int grid_m = 12;
  double analyticity_ratio = 0.0;
  /// Worst relative modulus error of the truncated series on the grid, away
  /// from prescribed zeros.
  double fidelity = 0.0;

  Weight weight() const { return Weight::factored(zeros, outer_coefficients); }
};

struct OuterOptions {
  double analyticity_tol = 1e-8;
  double truncation = 1e-12;
  /// Grid cells around each zero excluded from the fidelity measurement.
  int fidelity_margin_cells = 4;
};

/// Harmonic conjugate of log-modulus samples (zero-mean result).
std::vector<double> conjugate_function(std::span<const double> log_samples);

/// prod ((z - e^{2 pi i a})/2)^alpha * exp(log q + i conj(log q)), with q the
/// profile divided by the zero factors. Throws NonAnalytic when the
/// negative-frequency energy exceeds the configured tolerance.
AnalyticWeight outer_from_modulus(const ModulusProfile& profile, const OuterOptions& opts = {});

struct PointTarget {
  Angle angle;
  double modulus = 0.0;
};

struct PeakedProfileOptions {
  /// Outer-part floor, as a fraction of the smallest positive target.
  double background = 0.1;
  double kappa = 200.0;
  int max_refinements = 6;
};

/// Modulus profile Z(t) * (floor + sum of von Mises peaks) where Z is the
/// product of |sin(pi (t - a))|^alpha over the zeros. Each target angle is a
/// stationary point attaining its target value exactly, and the profile
/// never exceeds the largest target on the grid (peaks are narrowed until it
/// does not).
ModulusProfile peaked_profile(int grid_m, std::span<const PointTarget> targets,
                              std::vector<CircleZero> zeros,
                              const PeakedProfileOptions& opts = {});

/// Interpolation data for the layered sum: targets on the order-preserving
/// orbits and on the distinguished top orbit, zero set, and the top value.
struct LayerTargets {
  std::vector<PointTarget> points;
  std::vector<CircleZero> zeros;
  double lambda0 = 1.0;
  int grid_m = 14;
  /// Radius (in angle units) of the neighborhood V of the target set.
  double neighborhood = 0.0;  // 0 selects half the smallest gap
};

struct LayeredSynthesis {
  AnalyticWeight weight;
  /// Per layer: prescribed cap and measured sup |f_n| on the grid.
  std::vector<double> caps;
  std::vector<double> layer_sup;
  /// Max over target points of | |w| - target |.
  double max_target_error = 0.0;
  /// Min |w| over grid points farther than the neighborhood from the zeros.
  double min_modulus_off_f = 0.0;
  /// Whether |f_{n+1}| <= |f_n|/4 off V held at every grid point.
  bool decay_property = true;
  /// Bound on the discarded tail of the infinite sum.
  double truncation_bound = 0.0;
};

/// Finite layered sum: layer n has cap 3 * 4^{-(n+1)} lambda0 (the final one
/// absorbs the tail so caps sum to lambda0), modulus cap * P * exp(-(n)(1 - chi))
/// with chi a cutoff equal to 1 on V, and a per-layer rotation so all layers
/// agree in phase on the target points. Throws LayerBudgetExceeded past 12 layers.
LayeredSynthesis layered_sum_synthesis(const LayerTargets& targets, int n_layers,
                                       const PeakedProfileOptions& profile_opts = {},
                                       const OuterOptions& opts = {});

}  // namespace wco
