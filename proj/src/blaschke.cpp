#include "wco/blaschke.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wco/angle.hpp"
#include "wco/errors.hpp"

namespace wco {

namespace {

constexpr double kPoleTol = 1e-14;
constexpr double kDomainSlack = 1e-6;

cplx unit(double t) { return std::polar(1.0, kTwoPi * t); }

}  // namespace

BlaschkeProduct::BlaschkeProduct(std::vector<cplx> zeros, double rotation)
    : zeros_(std::move(zeros)) {
  if (zeros_.size() < 2) {
    fail(ErrorCode::InvalidArgument, "Blaschke product needs degree >= 2");
  }
  for (const cplx& a : zeros_) {
    if (!(std::abs(a) < 1.0)) {
      fail(ErrorCode::InvalidArgument, "Blaschke zero outside the open disc");
    }
  }
  rotation_ = std::fmod(rotation, kTwoPi);
  if (rotation_ < 0) rotation_ += kTwoPi;
  prefactor_ = std::polar(1.0, rotation_);
}

BlaschkeProduct BlaschkeProduct::power(int d) {
  if (d < 2) fail(ErrorCode::InvalidArgument, "degree must be >= 2");
  return BlaschkeProduct(std::vector<cplx>(static_cast<std::size_t>(d)), 0.0);
}

bool BlaschkeProduct::is_power_map() const noexcept {
  return rotation_ == 0.0 &&
         std::all_of(zeros_.begin(), zeros_.end(),
                     [](const cplx& a) { return a == cplx{}; });
}

cplx BlaschkeProduct::evaluate(cplx z) const {
  if (std::abs(z) > 1.0 + kDomainSlack) {
    fail(ErrorCode::InvalidArgument, "evaluation point outside the closed disc");
  }
  cplx acc = prefactor_;
  for (const cplx& a : zeros_) {
    const cplx den = 1.0 - std::conj(a) * z;
    if (std::abs(den) < kPoleTol) {
      fail(ErrorCode::PoleProximity, "Blaschke denominator vanishes");
    }
    acc *= (z - a) / den;
  }
  return acc;
}

std::array<cplx, 4> BlaschkeProduct::jet(cplx z) const {
  const cplx value = evaluate(z);
  // L = B'/B and its derivatives, summed over factors. Each factor is
  // (z - a)/(1 - conj(a) z); its log-derivative is 1/(z-a) + conj(a)/(1-conj(a) z).
  // A zero at z itself is handled by expanding the product directly.
  bool hits_zero = false;
  for (const cplx& a : zeros_) hits_zero |= (std::abs(z - a) < 1e-300);
  if (!hits_zero) {
    cplx l0{}, l1{}, l2{};
    for (const cplx& a : zeros_) {
      const cplx u = 1.0 / (z - a);
      const cplx v = std::conj(a) / (1.0 - std::conj(a) * z);
      l0 += u + v;
      l1 += -u * u + v * v;
      l2 += 2.0 * u * u * u + 2.0 * v * v * v;
    }
    const cplx d1 = value * l0;
    const cplx d2 = value * (l1 + l0 * l0);
    const cplx d3 = value * (l2 + 3.0 * l0 * l1 + l0 * l0 * l0);
    return {value, d1, d2, d3};
  }
  // Truncated power-series product in the local variable h = z' - z.
  std::array<cplx, 4> series{prefactor_, 0.0, 0.0, 0.0};
  for (const cplx& a : zeros_) {
    const cplx ca = std::conj(a);
    const cplx den = 1.0 - ca * z;
    // (z - a + h) / (den - ca h) = (z - a + h)/den * sum (ca h/den)^k
    const cplx r = ca / den;
    std::array<cplx, 4> geo{1.0, r, r * r, r * r * r};
    std::array<cplx, 4> num{(z - a) / den, 1.0 / den, 0.0, 0.0};
    std::array<cplx, 4> factor{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; i + j < 4; ++j) factor[i + j] += num[i] * geo[j];
    std::array<cplx, 4> next{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; i + j < 4; ++j) next[i + j] += series[i] * factor[j];
    series = next;
  }
  return {series[0], series[1], 2.0 * series[2], 6.0 * series[3]};
}

cplx BlaschkeProduct::derivative(cplx z) const { return jet(z)[1]; }

cplx BlaschkeProduct::iterate(cplx z, int n) const {
  if (n < 0) fail(ErrorCode::InvalidArgument, "iteration count must be >= 0");
  for (int i = 0; i < n; ++i) z = evaluate(z);
  return z;
}

double BlaschkeProduct::circle_map(double t) const {
  return wrap_unit(std::arg(evaluate(unit(t))) / kTwoPi);
}

double BlaschkeProduct::circle_map_derivative(double t) const {
  const cplx z = unit(t);
  double s = 0.0;
  for (const cplx& a : zeros_) s += (1.0 - std::norm(a)) / std::norm(z - a);
  return s;
}

const char* to_string(DynamicsKind kind) {
  switch (kind) {
    case DynamicsKind::Elliptic: return "Elliptic";
    case DynamicsKind::Hyperbolic: return "Hyperbolic";
    case DynamicsKind::SingleParabolic: return "SingleParabolic";
    case DynamicsKind::DoublyParabolic: return "DoublyParabolic";
  }
  return "Unknown";
}

DynamicsKind dynamics_kind_from_string(const std::string& name) {
  for (auto k : {DynamicsKind::Elliptic, DynamicsKind::Hyperbolic,
                 DynamicsKind::SingleParabolic, DynamicsKind::DoublyParabolic}) {
    if (name == to_string(k)) return k;
  }
  fail(ErrorCode::InvalidArgument, "unknown classification kind: " + name);
}

namespace {

/// Unwrapped lift value near a reference value.
double lift_near(const BlaschkeProduct& b, double t, double reference) {
  const double raw = b.circle_map(t);
  return reference + std::remainder(raw - reference, 1.0);
}

struct LiftGrid {
  std::vector<double> t, lift;
};

LiftGrid sample_lift(const BlaschkeProduct& b, int n) {
  LiftGrid g;
  g.t.resize(static_cast<std::size_t>(n) + 1);
  g.lift.resize(g.t.size());
  double prev = b.circle_map(0.0);
  if (prev > 0.5) prev -= 1.0;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    g.t[i] = t;
    prev = lift_near(b, t, prev);
    g.lift[i] = prev;
  }
  return g;
}

template <class F>
double bisect(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm <= 0) == (flo <= 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> boundary_fixed_points(const BlaschkeProduct& b,
                                          const ClassifyOptions& opts) {
  const int n = opts.boundary_grid;
  const LiftGrid g = sample_lift(b, n);
  std::vector<double> found;
  auto add = [&](double t) {
    t = wrap_unit(t);
    for (double s : found)
      if (circle_distance(s, t) < 1e-9) return;
    found.push_back(t);
  };
  for (int i = 0; i < n; ++i) {
    const double g0 = g.lift[i] - g.t[i];
    const double g1 = g.lift[i + 1] - g.t[i + 1];
    // transversal crossings of an integer level
    const double k0 = std::floor(g0), k1 = std::floor(g1);
    if (g0 == k0) add(g.t[i]);
    const double level = std::max(k0, k1);
    // a level hit exactly at a node is handled by the node check
    if (k0 != k1 && g0 != level && g1 != level) {
      const double ref = g.lift[i];
      auto f = [&](double t) { return lift_near(b, t, ref) - t - level; };
      add(bisect(f, g.t[i], g.t[i + 1], opts.bisection_tol));
    }
    // tangential contacts: g' changes sign close to an integer level
    const double d0 = b.circle_map_derivative(g.t[i]) - 1.0;
    const double d1 = b.circle_map_derivative(g.t[i + 1]) - 1.0;
    if ((d0 <= 0) != (d1 <= 0)) {
      auto fd = [&](double t) { return b.circle_map_derivative(t) - 1.0; };
      const double tc = bisect(fd, g.t[i], g.t[i + 1], opts.bisection_tol);
      const double gc = lift_near(b, tc, g.lift[i]) - tc;
      if (std::abs(gc - std::round(gc)) < 1e-10) add(tc);
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

Classification classify(const BlaschkeProduct& b, const ClassifyOptions& opts) {
  Classification out;
  if (b.is_power_map()) {
    out.kind = DynamicsKind::Elliptic;
    out.wolff_denjoy_point = 0.0;
    out.derivative_modulus = 0.0;
    return out;
  }

  auto newton = [&](cplx z) -> std::optional<cplx> {
    for (int i = 0; i < 60; ++i) {
      const auto j = b.jet(z);
      const cplx denom = j[1] - 1.0;
      if (std::abs(denom) < 1e-300) return std::nullopt;
      const cplx step = (j[0] - z) / denom;
      z -= step;
      if (!(std::abs(z) < 1.0 + 1e-9)) return std::nullopt;
      if (std::abs(step) < 1e-15) break;
    }
    if (std::abs(b.evaluate(z) - z) > 1e-10) return std::nullopt;
    return z;
  };

  cplx z = 0.0;
  bool converged = false;
  for (int i = 0; i < opts.max_iterations; ++i) {
    const cplx next = b.evaluate(z);
    const double step = std::abs(next - z);
    z = next;
    if (step < opts.cauchy_tol) {
      converged = true;
      break;
    }
  }
  if (std::abs(z) < 1.0 - opts.boundary_band) {
    // interior candidate: polish and confirm attraction
    if (auto polished = newton(z)) {
      const double dm = std::abs(b.derivative(*polished));
      if (std::abs(*polished) < 1.0 - opts.boundary_band && dm < 1.0 &&
          (converged || dm < 1.0 - opts.parabolic_band)) {
        out.kind = DynamicsKind::Elliptic;
        out.wolff_denjoy_point = *polished;
        out.derivative_modulus = dm;
        return out;
      }
    }
  }

  const std::vector<double> fixed = boundary_fixed_points(b, opts);
  if (fixed.empty()) {
    fail(ErrorCode::ClassificationAmbiguous,
         "no interior attractor and no boundary fixed point located");
  }
  double best_t = fixed.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (double t : fixed) {
    const double d = b.circle_map_derivative(t);
    if (d < best_d) {
      best_d = d;
      best_t = t;
    }
  }
  if (best_d > 1.0 + opts.parabolic_band) {
    fail(ErrorCode::ClassificationAmbiguous,
         "all boundary fixed points repel but no interior attractor converged");
  }
  const cplx z0 = std::polar(1.0, kTwoPi * best_t);
  out.wolff_denjoy_point = z0;
  const auto j = b.jet(z0);
  out.derivative_modulus = std::abs(j[1]);
  if (best_d < 1.0 - opts.parabolic_band) {
    out.kind = DynamicsKind::Hyperbolic;
    return out;
  }
  if (std::abs(j[2]) > opts.deriv_zero_tol) {
    out.kind = DynamicsKind::DoublyParabolic;
    out.multiplicity = 2;
  } else if (std::abs(j[3]) > opts.deriv_zero_tol) {
    out.kind = DynamicsKind::SingleParabolic;
    out.multiplicity = 3;
  } else {
    fail(ErrorCode::ClassificationAmbiguous,
         "parabolic boundary point with unresolved multiplicity");
  }
  return out;
}

}  // namespace wco
