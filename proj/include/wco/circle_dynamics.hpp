#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wco/angle.hpp"
#include "wco/blaschke.hpp"

namespace wco {

/// Finite trajectory of a periodic angle under t -> d t mod 1, listed in
/// dynamical order starting at its smallest point.
struct PeriodicOrbit {
  int degree = 2;
  int period = 1;
  std::vector<Rational> points;

  const Rational& base() const { return points.front(); }
  bool contains(const Rational& t) const;
  friend bool operator==(const PeriodicOrbit&, const PeriodicOrbit&) = default;
};

/// d*t mod 1; exact on rationals.
Angle doubling_step(const Angle& t, int d);
/// n-fold doubling_step.
Angle doubling_power(const Angle& t, int d, int n);

struct OrbitEnumerationLimits {
  int max_period_cap = 20;
  std::int64_t max_points = std::int64_t{1} << 22;
};

/// Every periodic orbit of t -> d t with smallest period <= max_period, ordered
/// by (period, base). Throws LimitExceeded past the configured caps.
std::vector<PeriodicOrbit> periodic_orbits(int d, int max_period,
                                           const OrbitEnumerationLimits& limits = {});

/// Largest max_period keeping the enumeration at or below `point_budget` points.
int default_max_period(int d, std::int64_t point_budget = 1'000'000);

/// The d preimages (t + j)/d, j = 0..d-1.
std::vector<Angle> preimages(const Angle& t, int d);

/// Backward chain w_1 = u, d*w_k = w_{k-1}, whose last element sits within
/// d^{-(n-1)} of v: w_n carries the first n-1 base-d digits of v followed by
/// the digits of u.
std::vector<Angle> backward_orbit_to(const Angle& u, const Angle& v, int d, int n);

/// +1 counterclockwise, -1 clockwise, 0 when two of the points coincide.
int cyclic_orientation(const Angle& a, const Angle& b, const Angle& c);

struct OrderCheck {
  bool preserving = true;
  /// Violating domain triple and its image, when preserving is false.
  std::optional<std::array<Angle, 3>> witness;
  std::optional<std::array<Angle, 3>> witness_image;
};

OrderCheck is_order_preserving(std::span<const Angle> points,
                               std::span<const Angle> images);
OrderCheck is_order_preserving(const PeriodicOrbit& orbit);

struct OrderPreservingSelection {
  std::vector<PeriodicOrbit> preserving;
  /// First enumerated orbit on which the map is not order preserving.
  std::optional<PeriodicOrbit> failing;
};

/// Throws NotFound (message carries the achieved count) when max_period is
/// too small for `count` order-preserving orbits.
OrderPreservingSelection find_order_preserving_orbits(int d, int count, int max_period);

/// Sampled Shub semiconjugacy h with h(F(t)) = d h(t) mod 1.
struct SemiconjugacyTable {
  int degree = 2;
  int grid_size = 0;
  int iterations = 0;
  /// h on t_j = j/N, normalized so values[0] == 0 and nondecreasing.
  std::vector<double> values;
  /// Raw limit value at t = 0; h + offset is the semiconjugacy onto d*t itself.
  double offset = 0.0;
  double residual = 0.0;

  /// Model coordinate (h + offset mod 1) of an arbitrary angle, linear interpolation.
  double model_angle(double t) const;
  /// Monotone inverse of model_angle, linear interpolation.
  double inverse_model_angle(double s) const;
  bool monotone() const;
};

SemiconjugacyTable shub_semiconjugacy(const BlaschkeProduct& b, int grid_size = 4096,
                                      int iterations = 40);

}  // namespace wco
