#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wco {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383279;

/// Finite Blaschke product exp(i*rotation) * prod (z - a_j)/(1 - conj(a_j) z).
class BlaschkeProduct {
 public:
  /// Throws InvalidArgument unless every |a_j| < 1 and there are >= 2 zeros.
  BlaschkeProduct(std::vector<cplx> zeros, double rotation = 0.0);

  /// z^d.
  static BlaschkeProduct power(int d);

  const std::vector<cplx>& zeros() const noexcept { return zeros_; }
  double rotation() const noexcept { return rotation_; }
  int degree() const noexcept { return static_cast<int>(zeros_.size()); }

  cplx operator()(cplx z) const { return evaluate(z); }
  cplx evaluate(cplx z) const;
  cplx derivative(cplx z) const;
  /// B, B', B'', B''' at z by logarithmic differentiation.
  std::array<cplx, 4> jet(cplx z) const;
  cplx iterate(cplx z, int n) const;

  /// Angle-space lift t -> arg B(e^{2 pi i t}) / 2pi reduced to [0,1).
  double circle_map(double t) const;
  /// Derivative of the lift: the angular derivative z B'(z)/B(z) at z = e^{2 pi i t}.
  double circle_map_derivative(double t) const;

  bool is_power_map() const noexcept;

 private:
  std::vector<cplx> zeros_;
  double rotation_;
  cplx prefactor_;
};

enum class DynamicsKind { Elliptic, Hyperbolic, SingleParabolic, DoublyParabolic };

const char* to_string(DynamicsKind kind);
DynamicsKind dynamics_kind_from_string(const std::string& name);

struct Classification {
  DynamicsKind kind = DynamicsKind::Elliptic;
  cplx wolff_denjoy_point{};
  double derivative_modulus = 0.0;
  std::optional<int> multiplicity;
};

struct ClassifyOptions {
  int max_iterations = 500;
  double cauchy_tol = 1e-12;
  double boundary_band = 1e-6;
  int boundary_grid = 1 << 12;
  double bisection_tol = 1e-13;
  double parabolic_band = 1e-9;
  double deriv_zero_tol = 1e-8;
};

/// Locates the Wolff-Denjoy point and sorts B into the four dynamical kinds.
/// Throws ClassificationAmbiguous when |B'(z0)| is within parabolic_band of 1
/// but the order of vanishing of B(z) - z cannot be resolved.
Classification classify(const BlaschkeProduct& b, const ClassifyOptions& opts = {});

/// Fixed points of the circle map, as angles in [0,1), found by bracketing
/// the lifted map on a uniform grid plus tangency detection.
std::vector<double> boundary_fixed_points(const BlaschkeProduct& b,
                                          const ClassifyOptions& opts = {});

}  // namespace wco
