#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wco/angle.hpp"

namespace wco {

using cplx = std::complex<double>;

struct SemiconjugacyTable;

/// Prescribed boundary zero exp(2 pi i angle) of the given order.
struct CircleZero {
  Angle angle;
  int order = 1;
};

/// A disc-algebra weight, evaluated on the boundary circle through the angle
/// coordinate t (the point exp(2 pi i t)). Cheap to copy.
class Weight {
 public:
  class Impl;

  Weight();  // the constant 1

  static Weight constant(cplx c);
  /// sum_k c_k z^k.
  static Weight polynomial(std::vector<cplx> coeffs);
  /// prod ((z - e^{2 pi i a_i})/2)^{alpha_i} times the Taylor series
  /// `outer_coeffs`. Boundary values of the series come from an upsampled
  /// table with local cubic interpolation.
  static Weight factored(std::vector<CircleZero> zeros, std::vector<cplx> outer_coeffs);
  /// Boundary-only weight from values on a uniform power-of-two grid.
  static Weight sampled(std::vector<cplx> boundary_values);
  /// t -> base(h^{-1}(t)): a weight moved to the z^d model coordinate.
  static Weight transported(const Weight& base, const SemiconjugacyTable& table);

  cplx on_circle(double t) const;
  cplx on_circle(const Angle& t) const;
  double modulus(const Angle& t) const;
  double modulus(double t) const;
  /// Value in the closed disc; nullopt for boundary-only weights.
  std::optional<cplx> in_disc(cplx z) const;

  /// e^{i alpha} w.
  Weight rotated(double alpha) const;

  /// Taylor coefficients when the weight has an analytic presentation.
  std::optional<std::vector<cplx>> taylor_coefficients() const;
  /// Boundary zeros known by construction (factored weights).
  std::vector<CircleZero> prescribed_zeros() const;
  /// Taylor series left after removing the prescribed zero factors.
  std::optional<std::vector<cplx>> outer_coefficients() const;

  /// Points where |w| <= zero_tol: prescribed zeros plus a grid scan with
  /// golden-section refinement; angles near small-denominator rationals are
  /// snapped to them.
  std::vector<Angle> circle_zeros(double zero_tol = 1e-10, int scan_grid = 1 << 14) const;

  /// Samples w(exp(2 pi i j/n)).
  std::vector<cplx> boundary_samples(std::size_t n) const;
  double sup_modulus(std::size_t n = 1 << 14) const;

  std::string kind() const;
  const Impl& impl() const { return *impl_; }

 private:
  explicit Weight(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Closest p/q with q <= max_den when |t - p/q| <= tol.
std::optional<Rational> snap_to_rational(double t, std::int64_t max_den = 10000,
                                         double tol = 1e-11);

}  // namespace wco
