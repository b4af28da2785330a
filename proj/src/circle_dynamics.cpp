#include "wco/circle_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wco/errors.hpp"

namespace wco {

namespace {

void require_degree(int d) {
  if (d < 2) fail(ErrorCode::InvalidArgument, "degree must be >= 2");
}

/// d^m, or -1 if it exceeds `limit`.
std::int64_t bounded_power(int d, int m, std::int64_t limit) {
  __int128 p = 1;
  for (int i = 0; i < m; ++i) {
    p *= d;
    if (p > limit) return -1;
  }
  return static_cast<std::int64_t>(p);
}

/// (y - x) mod 1 compared exactly when both are rational.
struct Offset {
  __int128 num;
  __int128 den;
};

Offset exact_offset(const Rational& x, const Rational& y) {
  __int128 num = static_cast<__int128>(y.num()) * x.den() -
                 static_cast<__int128>(x.num()) * y.den();
  const __int128 den = static_cast<__int128>(x.den()) * y.den();
  num %= den;
  if (num < 0) num += den;
  return {num, den};
}

}  // namespace

bool PeriodicOrbit::contains(const Rational& t) const {
  return std::find(points.begin(), points.end(), t) != points.end();
}

Angle doubling_step(const Angle& t, int d) {
  require_degree(d);
  return t.times(d);
}

Angle doubling_power(const Angle& t, int d, int n) {
  Angle x = t;
  for (int i = 0; i < n; ++i) x = doubling_step(x, d);
  return x;
}

int default_max_period(int d, std::int64_t point_budget) {
  require_degree(d);
  std::int64_t total = 0;
  int m = 0;
  while (m < 12) {
    const std::int64_t p = bounded_power(d, m + 1, point_budget + 1);
    if (p < 0 || total + (p - 1) > point_budget) break;
    total += p - 1;
    ++m;
  }
  return std::max(m, 1);
}

std::vector<PeriodicOrbit> periodic_orbits(int d, int max_period,
                                           const OrbitEnumerationLimits& limits) {
  require_degree(d);
  if (max_period < 1 || max_period > limits.max_period_cap) {
    fail(ErrorCode::InvalidArgument,
         "max_period must lie in [1, " + std::to_string(limits.max_period_cap) + "]");
  }
  std::int64_t total = 0;
  for (int m = 1; m <= max_period; ++m) {
    const std::int64_t p = bounded_power(d, m, limits.max_points + 1);
    if (p < 0 || (total += p - 1) > limits.max_points) {
      fail(ErrorCode::LimitExceeded,
           "periodic orbit enumeration exceeds " + std::to_string(limits.max_points) +
               " points");
    }
  }

  std::vector<PeriodicOrbit> orbits;
  for (int m = 1; m <= max_period; ++m) {
    const std::int64_t n = bounded_power(d, m, limits.max_points + 1) - 1;
    for (std::int64_t j = 0; j < n; ++j) {
      // walk the cycle of j under x -> d x mod n; keep j only if it is the
      // smallest element and its cycle has length exactly m
      std::int64_t x = j;
      int period = 0;
      bool minimal = true;
      for (int step = 1; step <= m; ++step) {
        x = static_cast<std::int64_t>((static_cast<__int128>(x) * d) % n);
        if (x == j) {
          period = step;
          break;
        }
        if (x < j) {
          minimal = false;
          break;
        }
      }
      if (!minimal || period != m) continue;
      PeriodicOrbit orbit{d, m, {}};
      orbit.points.reserve(static_cast<std::size_t>(m));
      x = j;
      for (int step = 0; step < m; ++step) {
        orbit.points.emplace_back(x, n);
        x = static_cast<std::int64_t>((static_cast<__int128>(x) * d) % n);
      }
      orbits.push_back(std::move(orbit));
    }
  }
  return orbits;
}

std::vector<Angle> preimages(const Angle& t, int d) {
  require_degree(d);
  std::vector<Angle> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) out.push_back(t.shifted_div(j, d));
  return out;
}

std::vector<Angle> backward_orbit_to(const Angle& u, const Angle& v, int d, int n) {
  require_degree(d);
  if (n < 1) fail(ErrorCode::InvalidArgument, "backward orbit length must be >= 1");
  Angle last;
  if (u.is_exact() && v.is_exact()) {
    const std::int64_t scale = bounded_power(d, n - 1, std::int64_t{1} << 62);
    if (scale < 0) fail(ErrorCode::LimitExceeded, "backward orbit too long for exact arithmetic");
    const Rational& vr = v.exact();
    const __int128 prefix = static_cast<__int128>(vr.num()) * scale / vr.den();
    const Rational& ur = u.exact();
    const __int128 num = prefix * ur.den() + ur.num();
    const __int128 den = static_cast<__int128>(ur.den()) * scale;
    if (num > INT64_MAX || den > INT64_MAX) {
      fail(ErrorCode::LimitExceeded, "backward orbit too long for exact arithmetic");
    }
    last = Angle(Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)));
  } else {
    const double scale = std::pow(static_cast<double>(d), n - 1);
    const double prefix = std::floor(v.to_double() * scale);
    last = Angle::from_double((prefix + u.to_double()) / scale);
  }
  std::vector<Angle> chain(static_cast<std::size_t>(n));
  chain[static_cast<std::size_t>(n - 1)] = last;
  for (int k = n - 2; k >= 0; --k) chain[k] = doubling_step(chain[k + 1], d);
  // the forward images of the exact construction land on u; for float input
  // pin the first element to u itself
  chain[0] = u;
  return chain;
}

int cyclic_orientation(const Angle& a, const Angle& b, const Angle& c) {
  if (a == b || b == c || a == c) return 0;
  if (a.is_exact() && b.is_exact() && c.is_exact()) {
    const Offset x = exact_offset(a.exact(), b.exact());
    const Offset y = exact_offset(a.exact(), c.exact());
    return x.num * y.den < y.num * x.den ? 1 : -1;
  }
  const double x = wrap_unit(b.to_double() - a.to_double());
  const double y = wrap_unit(c.to_double() - a.to_double());
  if (x == y) return 0;
  return x < y ? 1 : -1;
}

OrderCheck is_order_preserving(std::span<const Angle> points,
                               std::span<const Angle> images) {
  if (points.size() != images.size()) {
    fail(ErrorCode::InvalidArgument, "points and images differ in length");
  }
  OrderCheck out;
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const int img = cyclic_orientation(images[i], images[j], images[k]);
        if (img == 0) continue;
        if (img != cyclic_orientation(points[i], points[j], points[k])) {
          out.preserving = false;
          out.witness = {points[i], points[j], points[k]};
          out.witness_image = {images[i], images[j], images[k]};
          return out;
        }
      }
  return out;
}

OrderCheck is_order_preserving(const PeriodicOrbit& orbit) {
  std::vector<Angle> pts, imgs;
  for (const Rational& r : orbit.points) {
    pts.emplace_back(r);
    imgs.emplace_back(r.times(orbit.degree));
  }
  return is_order_preserving(pts, imgs);
}

OrderPreservingSelection find_order_preserving_orbits(int d, int count, int max_period) {
  require_degree(d);
  if (count < 1) fail(ErrorCode::InvalidArgument, "count must be >= 1");
  OrderPreservingSelection out;
  for (PeriodicOrbit& orbit : periodic_orbits(d, max_period)) {
    const bool ok = is_order_preserving(orbit).preserving;
    if (ok && static_cast<int>(out.preserving.size()) < count) {
      out.preserving.push_back(std::move(orbit));
    } else if (!ok && !out.failing) {
      out.failing = std::move(orbit);
    }
  }
  if (static_cast<int>(out.preserving.size()) < count) {
    fail(ErrorCode::NotFound,
         "found only " + std::to_string(out.preserving.size()) +
             " order-preserving orbits with period <= " + std::to_string(max_period));
  }
  if (!out.failing) {
    // look past max_period for the non-order-preserving orbit
    const int extended = std::max(max_period, default_max_period(d, 100'000));
    for (int m = max_period + 1; m <= extended && !out.failing; ++m) {
      for (PeriodicOrbit& orbit : periodic_orbits(d, m)) {
        if (orbit.period == m && !is_order_preserving(orbit).preserving) {
          out.failing = std::move(orbit);
          break;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shub semiconjugacy

namespace {

/// Degree-d lift of the boundary map, continuous on [0,1) via a sampled table.
class CircleLift {
 public:
  CircleLift(const BlaschkeProduct& b, int n) : b_(b), n_(n), table_(n + 1) {
    double prev = b.circle_map(0.0);
    if (prev > 0.5) prev -= 1.0;
    for (int i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      const double raw = b.circle_map(t);
      prev += std::remainder(raw - prev, 1.0);
      table_[i] = prev;
    }
    const double increase = table_[n] - table_[0];
    if (std::abs(increase - b.degree()) > 0.25) {
      fail(ErrorCode::LiftDiscontinuity,
           "argument unwrapping failed; increase the grid size");
    }
  }

  /// F(x) for x in [0,1).
  double on_unit(double x) const {
    const int i = std::clamp(static_cast<int>(x * n_), 0, n_ - 1);
    return table_[i] + std::remainder(b_.circle_map(x) - table_[i], 1.0);
  }

 private:
  const BlaschkeProduct& b_;
  int n_;
  std::vector<double> table_;
};

/// lim F^n(t)/d^n. Writing F^k(t) = K_k + theta_k, K_n/d^n is accumulated as
/// the sum of floor(F(theta_k))/d^{k+1}.
double lift_limit(const CircleLift& lift, int d, double t, int iters) {
  double frac = t;
  double scale = 1.0;
  double acc = 0.0;
  for (int k = 0; k < iters; ++k) {
    const double y = lift.on_unit(frac);
    const double fl = std::floor(y);
    scale /= d;
    acc += fl * scale;
    frac = y - fl;
  }
  return acc + frac * scale;
}

}  // namespace

SemiconjugacyTable shub_semiconjugacy(const BlaschkeProduct& b, int grid_size,
                                      int iterations) {
  if (grid_size < 8) fail(ErrorCode::InvalidArgument, "grid size too small");
  if (iterations < 1) fail(ErrorCode::InvalidArgument, "iterations must be >= 1");
  const int d = b.degree();
  const CircleLift lift(b, std::max(grid_size, 1 << 12));

  SemiconjugacyTable table;
  table.degree = d;
  table.grid_size = grid_size;
  table.iterations = iterations;
  table.values.resize(static_cast<std::size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) {
    table.values[i] = lift_limit(lift, d, static_cast<double>(i) / grid_size, iterations);
  }
  table.offset = table.values[0];
  for (double& v : table.values) v -= table.offset;

  double residual = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    const double t = static_cast<double>(i) / grid_size;
    const double ft = lift.on_unit(t);
    const double h_ft =
        lift_limit(lift, d, ft - std::floor(ft), iterations) + std::floor(ft);
    const double lhs = d * (table.values[i] + table.offset);
    residual = std::max(residual, circle_distance(lhs, h_ft));
  }
  table.residual = residual;
  return table;
}

double SemiconjugacyTable::model_angle(double t) const {
  const double x = wrap_unit(t) * grid_size;
  const int i = static_cast<int>(x);
  const double frac = x - i;
  const double lo = values[static_cast<std::size_t>(i)];
  const double hi = (i + 1 < grid_size) ? values[static_cast<std::size_t>(i) + 1] : 1.0;
  return wrap_unit(lo + frac * (hi - lo) + offset);
}

double SemiconjugacyTable::inverse_model_angle(double s) const {
  const double target = wrap_unit(s - offset);
  // values is nondecreasing on [0,1) with an implicit endpoint value 1 at t = 1
  const auto it = std::upper_bound(values.begin(), values.end(), target);
  const std::size_t i = static_cast<std::size_t>(std::distance(values.begin(), it)) - 1;
  const double lo = values[i];
  const double hi = (i + 1 < values.size()) ? values[i + 1] : 1.0;
  const double frac = hi > lo ? (target - lo) / (hi - lo) : 0.0;
  return wrap_unit((static_cast<double>(i) + frac) / grid_size);
}

bool SemiconjugacyTable::monotone() const {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[i - 1]) return false;
  return values.empty() || values.back() <= 1.0;
}

}  // namespace wco
