#include <algorithm>
#include <cmath>
#include <functional>

#include "wco/errors.hpp"
#include "wco/spectra.hpp"

namespace wco {

namespace {

double signed_wrap(double x) { return x - std::round(x); }

/// First zero of disp(t0 + dir * s), s in (0, 1), after which disp stops
/// pointing back toward t0; nullopt if none on the grid.
std::optional<double> first_crossing(const std::function<double(double)>& disp, double t0, int dir,
                                     int grid) {
  auto sample = [&](double s) { return dir * disp(t0 + dir * s); };
  const double h = 1.0 / grid;
  double prev_s = 0.5 * h, prev = sample(prev_s);
  for (int i = 1; i < grid; ++i) {
    const double s = (i + 0.5) * h;
    const double v = sample(s);
    if (prev < 0 && v >= 0) {
      double lo = prev_s, hi = s;
      for (int it = 0; it < 100 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sample(mid) < 0) lo = mid;
        else hi = mid;
      }
      return wrap_unit(t0 + dir * 0.5 * (lo + hi));
    }
    prev = v;
    prev_s = s;
  }
  return std::nullopt;
}

/// Arc from a (counterclockwise) to b contains t.
bool in_arc(double a, double b, double t) { return wrap_unit(t - a) <= wrap_unit(b - a); }

}  // namespace

AnnulusReport proposition1_annulus(const BlaschkeProduct& b, const Weight& w, int grid,
                                   int spot_depth) {
  if (grid < 64) fail(ErrorCode::InvalidArgument, "grid too small");
  const auto cls = classify(b);
  if (cls.kind != DynamicsKind::Hyperbolic && cls.kind != DynamicsKind::SingleParabolic) {
    fail(ErrorCode::InvalidArgument, "the annulus needs a hyperbolic or single parabolic product");
  }
  const double t0 = wrap_unit(std::arg(cls.wolff_denjoy_point) / kTwoPi);
  if (std::abs(w.modulus(t0) - 1.0) > 1e-9) fail(ErrorCode::InvalidArgument, "|w(z0)| must be 1");
  const int scan = 4 * grid;
  for (int j = 0; j < scan; ++j) {
    const double t = static_cast<double>(j) / scan;
    const double m = w.modulus(t);
    if (m <= 1e-10) fail(ErrorCode::InvalidArgument, "w vanishes on the circle");
    if (circle_distance(t, t0) >= 1.0 / grid && !(m < 1.0)) {
      fail(ErrorCode::InvalidArgument, "|w| must stay below 1 away from z0");
    }
  }

  auto f = [&](double t) { return b.circle_map(t); };
  auto disp1 = [&](double t) { return signed_wrap(f(t) - t); };
  auto disp2 = [&](double t) { return signed_wrap(f(f(t)) - t); };

  // sampled check that the arc maps into itself and its points move toward t0
  auto invariant = [&](double a, double c) {
    const double len = wrap_unit(c - a);
    for (int j = 1; j < 256; ++j) {
      const double t = wrap_unit(a + len * j / 256.0);
      if (!in_arc(a, c, f(t))) return false;
    }
    return true;
  };

  AnnulusReport rep;
  rep.attractor = Angle::from_double(t0);
  std::optional<double> left, right;
  for (int pass = 0; pass < 2; ++pass) {
    const std::function<double(double)> disp = pass == 0 ? std::function<double(double)>(disp1)
                                                         : std::function<double(double)>(disp2);
    right = first_crossing(disp, t0, +1, grid);
    left = first_crossing(disp, t0, -1, grid);
    if (left && right && invariant(*left, *right)) break;
    left.reset();
    right.reset();
  }
  if (!left || !right) {
    fail(ErrorCode::BasinUnresolved, "no invariant attracting arc around z0 on the grid");
  }
  rep.basin_endpoints = {*left, *right};
  rep.basin_length = wrap_unit(*right - *left);
  for (int i = 0; i < 2; ++i) {
    const double e = rep.basin_endpoints[static_cast<std::size_t>(i)];
    const double r1 = circle_distance(f(e), e), r2 = circle_distance(f(f(e)), e);
    rep.endpoint_residuals[static_cast<std::size_t>(i)] = std::min(r1, r2);
    rep.endpoint_periods[static_cast<std::size_t>(i)] = r1 <= 1e-8 ? 1 : (r2 <= 1e-8 ? 2 : 0);
  }
  rep.r_inner = std::max(w.modulus(*left), w.modulus(*right));

  // supporting evidence only: finite-depth tree checks at a few radii
  const CircleSystem sys = CircleSystem::blaschke(b, w);
  const std::vector<Angle> anchors{
      Angle::from_double(*left), Angle::from_double(*right), Angle::from_double(t0),
      Angle::from_double(wrap_unit(*left + 0.25 * rep.basin_length)),
      Angle::from_double(wrap_unit(*left + 0.75 * rep.basin_length))};
  for (double frac : {0.25, 0.5, 0.75}) {
    RadiusVerdict rv;
    rv.radius = rep.r_inner + frac * (1.0 - rep.r_inner);
    rv.depth = spot_depth;
    rv.verdict = Verdict::Reject;
    for (const auto& a : anchors) {
      auto c = lemma1_criterion(sys, rv.radius, a, spot_depth);
      if (c.accepts()) {
        rv.verdict = Verdict::Accept;
        rv.certificate = c;
        break;
      }
      if (!rv.certificate) rv.certificate = c;
    }
    rep.spot_checks.push_back(rv);
  }
  return rep;
}

}  // namespace wco
