#include "wco/outer_function.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "wco/blaschke.hpp"
#include "wco/errors.hpp"
#include "wco/fourier.hpp"

namespace wco {

namespace {

constexpr double kLogFloor = -745.0;

double grid_t(std::size_t j, std::size_t n) {
  return static_cast<double>(j) / static_cast<double>(n);
}

/// log prod |sin(pi (t - a))|^alpha, -inf exactly on a zero.
double log_zero_factor(double t, const std::vector<CircleZero>& zeros) {
  double acc = 0.0;
  for (const auto& z : zeros) {
    const double s = std::abs(std::sin(kPi * (t - z.angle.to_double())));
    if (s == 0.0) return -std::numeric_limits<double>::infinity();
    acc += z.order * std::log(s);
  }
  return acc;
}

double log_zero_factor_slope(double t, const std::vector<CircleZero>& zeros) {
  double acc = 0.0;
  for (const auto& z : zeros) acc += z.order * kPi / std::tan(kPi * (t - z.angle.to_double()));
  return acc;
}

cplx zero_factor(double t, const std::vector<CircleZero>& zeros) {
  cplx acc = 1.0;
  for (const auto& z : zeros) {
    const double a = z.angle.to_double();
    const cplx f = cplx{0, 1} * std::polar(1.0, kPi * (t + a)) * std::sin(kPi * (t - a));
    for (int k = 0; k < z.order; ++k) acc *= f;
  }
  return acc;
}

double min_distance_to(double t, const std::vector<double>& set) {
  double d = 1.0;
  for (double s : set) d = std::min(d, circle_distance(t, s));
  return d;
}

/// Cubic periodic interpolation of real samples.
double interpolate_real(const std::vector<double>& v, double t) {
  const std::size_t n = v.size();
  const double x = wrap_unit(t) * static_cast<double>(n);
  const auto i = static_cast<std::ptrdiff_t>(std::floor(x));
  const double s = x - static_cast<double>(i);
  auto at = [&](std::ptrdiff_t k) {
    const auto m = static_cast<std::ptrdiff_t>(n);
    return v[static_cast<std::size_t>(((k % m) + m) % m)];
  };
  const double w0 = -s * (s - 1) * (s - 2) / 6.0;
  const double w1 = (s + 1) * (s - 1) * (s - 2) / 2.0;
  const double w2 = -(s + 1) * s * (s - 2) / 2.0;
  const double w3 = (s + 1) * s * (s - 1) / 6.0;
  return w0 * at(i - 1) + w1 * at(i) + w2 * at(i + 1) + w3 * at(i + 2);
}

std::vector<cplx> truncate_series(const std::vector<cplx>& full, double tol) {
  std::vector<cplx> c(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(full.size() / 2));
  while (c.size() > 1 && std::abs(c.back()) < tol) c.pop_back();
  return c;
}

/// Packs boundary values of zero factors times an outer part into an AnalyticWeight.
AnalyticWeight assemble(const std::vector<cplx>& outer_values, const std::vector<CircleZero>& zeros,
                        int grid_m, const OuterOptions& opts) {
  const std::size_t n = outer_values.size();
  AnalyticWeight out;
  out.grid_m = grid_m;
  out.zeros = zeros;
  out.outer_coefficients = truncate_series(fourier::forward(outer_values), opts.truncation);
  out.boundary_values.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    out.boundary_values[j] = zero_factor(grid_t(j, n), zeros) * outer_values[j];
  out.analyticity_ratio = fourier::negative_frequency_ratio(fourier::forward(out.boundary_values));
  if (out.analyticity_ratio > opts.analyticity_tol) {
    fail(ErrorCode::NonAnalytic,
         "negative-frequency energy ratio " + std::to_string(out.analyticity_ratio) +
             " exceeds tolerance; the profile is too rough for the grid");
  }
  out.taylor_coefficients = *out.weight().taylor_coefficients();
  return out;
}

}  // namespace

int ModulusProfile::grid_m() const {
  return static_cast<int>(std::lround(std::log2(static_cast<double>(samples.size()))));
}

void ModulusProfile::validate() const {
  if (!fourier::is_power_of_two(samples.size()) || samples.size() < 16) {
    fail(ErrorCode::InvalidArgument, "profile grid must be a power of two >= 16");
  }
  const std::size_t n = samples.size();
  std::vector<double> zero_angles;
  for (const auto& z : prescribed_zeros) {
    if (z.order < 1) fail(ErrorCode::InvalidArgument, "zero order must be >= 1");
    zero_angles.push_back(z.angle.to_double());
  }
  double log_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double p = samples[j];
    if (!std::isfinite(p) || p < 0.0) {
      fail(ErrorCode::InvalidArgument, "profile samples must be finite and nonnegative");
    }
    const bool near_zero =
        min_distance_to(grid_t(j, n), zero_angles) <= 2.0 / static_cast<double>(n);
    if (p == 0.0 && !near_zero) {
      fail(ErrorCode::InvalidArgument, "profile vanishes away from the prescribed zeros");
    }
    log_sum += std::max(p > 0 ? std::log(p) : kLogFloor, kLogFloor);
  }
  if (!(log_sum / static_cast<double>(n) > -1e6)) {
    fail(ErrorCode::InvalidArgument, "log-modulus is not integrable on the grid");
  }
}

std::vector<double> conjugate_function(std::span<const double> log_samples) {
  for (double v : log_samples)
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "non-finite log-modulus sample");
  return fourier::conjugate_function(log_samples);
}

AnalyticWeight outer_from_modulus(const ModulusProfile& profile, const OuterOptions& opts) {
  profile.validate();
  const std::size_t n = profile.samples.size();
  const auto& zeros = profile.prescribed_zeros;

  // log of the residual modulus q = p / |zero factors|; samples on a zero are
  // filled by interpolation from their neighbors
  std::vector<double> log_q(n);
  std::vector<bool> good(n, true);
  for (std::size_t j = 0; j < n; ++j) {
    const double lz = log_zero_factor(grid_t(j, n), zeros);
    const double p = profile.samples[j];
    if (!std::isfinite(lz) || p == 0.0) {
      good[j] = false;
      continue;
    }
    log_q[j] = std::max(std::log(p) - lz, kLogFloor);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (good[j]) continue;
    std::size_t lo = j, hi = j, steps_lo = 0, steps_hi = 0;
    do {
      lo = (lo + n - 1) % n;
      ++steps_lo;
    } while (!good[lo] && steps_lo < n);
    do {
      hi = (hi + 1) % n;
      ++steps_hi;
    } while (!good[hi] && steps_hi < n);
    if (!good[lo]) fail(ErrorCode::InvalidArgument, "profile has no usable samples");
    const double w = static_cast<double>(steps_lo) / static_cast<double>(steps_lo + steps_hi);
    log_q[j] = (1.0 - w) * log_q[lo] + w * log_q[hi];
  }

  const auto conj = conjugate_function(log_q);
  std::vector<cplx> outer(n);
  for (std::size_t j = 0; j < n; ++j) outer[j] = std::exp(cplx{log_q[j], conj[j]});

  AnalyticWeight out = assemble(outer, zeros, profile.grid_m(), opts);

  // fidelity of the truncated series, away from the zeros
  std::vector<double> zero_angles;
  for (const auto& z : zeros) zero_angles.push_back(z.angle.to_double());
  const auto recon = fourier::evaluate_on_grid(out.outer_coefficients, n);
  const double margin = static_cast<double>(opts.fidelity_margin_cells) / static_cast<double>(n);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = grid_t(j, n);
    if (min_distance_to(t, zero_angles) <= margin) continue;
    const double p = profile.samples[j];
    const double got = std::abs(zero_factor(t, zeros) * recon[j]);
    worst = std::max(worst, std::abs(got - p) / p);
  }
  out.fidelity = worst;
  return out;
}

ModulusProfile peaked_profile(int grid_m, std::span<const PointTarget> targets,
                              std::vector<CircleZero> zeros, const PeakedProfileOptions& opts) {
  if (grid_m < 4 || grid_m > 20) fail(ErrorCode::InvalidArgument, "grid exponent out of range");
  if (targets.empty()) fail(ErrorCode::InvalidArgument, "peaked profile needs targets");
  const std::size_t n = std::size_t{1} << grid_m;
  double min_target = std::numeric_limits<double>::infinity(), max_target = 0.0;
  for (const auto& tg : targets) {
    if (!(tg.modulus > 0.0)) {
      fail(ErrorCode::InvalidArgument, "peak targets must be positive; put zeros in the zero list");
    }
    for (const auto& z : zeros)
      if (circle_distance(z.angle, tg.angle) == 0.0)
        fail(ErrorCode::InvalidArgument, "target coincides with a prescribed zero");
    min_target = std::min(min_target, tg.modulus);
    max_target = std::max(max_target, tg.modulus);
  }
  const double floor_level = opts.background * min_target;
  const std::size_t k = targets.size();

  std::vector<double> centers(k), needed(k), slope_z(k);
  for (std::size_t i = 0; i < k; ++i) {
    centers[i] = targets[i].angle.to_double();
    needed[i] = targets[i].modulus / std::exp(log_zero_factor(centers[i], zeros)) - floor_level;
    slope_z[i] = log_zero_factor_slope(centers[i], zeros);
  }

  double kappa = opts.kappa;
  for (int attempt = 0; attempt <= opts.max_refinements; ++attempt, kappa *= 2.0) {
    std::vector<double> amp(k, 0.0), tilt(k, 0.0);
    auto peak = [&](std::size_t i, double t) {
      const double x = kTwoPi * (t - centers[i]);
      return std::exp(kappa * (std::cos(x) - 1.0) + tilt[i] * std::sin(x));
    };
    auto peak_slope = [&](std::size_t i, double t) {
      const double x = kTwoPi * (t - centers[i]);
      return peak(i, t) * kTwoPi * (-kappa * std::sin(x) + tilt[i] * std::cos(x));
    };
    auto q_at = [&](double t) {
      double q = floor_level;
      for (std::size_t i = 0; i < k; ++i) q += amp[i] * peak(i, t);
      return q;
    };
    bool solved = true;
    for (int sweep = 0; sweep < 40; ++sweep) {
      Eigen::MatrixXd g(k, k);
      Eigen::VectorXd rhs(k);
      for (std::size_t r = 0; r < k; ++r) {
        rhs(r) = needed[r];
        for (std::size_t c = 0; c < k; ++c) g(r, c) = peak(c, centers[r]);
      }
      const Eigen::VectorXd a = g.colPivHouseholderQr().solve(rhs);
      for (std::size_t i = 0; i < k; ++i) amp[i] = a(i);
      // tilt each peak so that d/dt log(Z q) vanishes at its center
      for (std::size_t i = 0; i < k; ++i) {
        double others = 0.0;
        for (std::size_t c = 0; c < k; ++c)
          if (c != i) others += amp[c] * peak_slope(c, centers[i]);
        tilt[i] = -(slope_z[i] * q_at(centers[i]) + others) / (kTwoPi * amp[i]);
      }
    }
    for (double a : amp) solved &= (a > 0.0 && std::isfinite(a));
    if (!solved) continue;

    ModulusProfile profile;
    profile.prescribed_zeros = zeros;
    profile.samples.resize(n);
    double peak_value = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double t = grid_t(j, n);
      const double lz = log_zero_factor(t, zeros);
      profile.samples[j] = std::isfinite(lz) ? std::exp(lz) * q_at(t) : 0.0;
    }
    // check the bound on a finer mesh than the output grid
    const std::size_t fine = 8 * n;
    for (std::size_t j = 0; j < fine; ++j) {
      const double t = grid_t(j, fine);
      const double lz = log_zero_factor(t, zeros);
      if (std::isfinite(lz)) peak_value = std::max(peak_value, std::exp(lz) * q_at(t));
    }
    if (peak_value <= max_target * (1.0 + 1e-9)) return profile;
  }
  fail(ErrorCode::InvalidArgument,
       "could not shape a profile below the largest target; targets too close together");
}

LayeredSynthesis layered_sum_synthesis(const LayerTargets& targets, int n_layers,
                                       const PeakedProfileOptions& profile_opts,
                                       const OuterOptions& opts) {
  if (n_layers < 1) fail(ErrorCode::InvalidArgument, "need at least one layer");
  if (n_layers > 12) fail(ErrorCode::LayerBudgetExceeded, "at most 12 layers are supported");
  const int m = targets.grid_m;
  const std::size_t n = std::size_t{1} << m;

  const ModulusProfile base = peaked_profile(m, targets.points, targets.zeros, profile_opts);
  const AnalyticWeight core = outer_from_modulus(base, opts);

  // F: target points and zeros
  std::vector<double> f_set, phase_points;
  for (const auto& p : targets.points) {
    f_set.push_back(p.angle.to_double());
    phase_points.push_back(p.angle.to_double());
  }
  for (const auto& z : targets.zeros) f_set.push_back(z.angle.to_double());
  double gap = 1.0;
  for (std::size_t i = 0; i < f_set.size(); ++i)
    for (std::size_t j = i + 1; j < f_set.size(); ++j)
      gap = std::min(gap, circle_distance(f_set[i], f_set[j]));
  const double radius = targets.neighborhood > 0 ? targets.neighborhood : 0.5 * gap;

  auto cutoff = [&](double t) {
    const double x = min_distance_to(t, f_set) / radius;
    if (x <= 0.5) return 1.0;
    if (x >= 1.0) return 0.0;
    const double c = std::cos(kPi * (x - 0.5));
    return c * c;
  };

  // chi on the grid, plus one dip beside each phase point (inside V, on the
  // side that moves its conjugate the right way) so that the conjugate of the
  // modified cutoff takes a common value at all phase points
  std::vector<double> chi(n);
  for (std::size_t j = 0; j < n; ++j) chi[j] = cutoff(grid_t(j, n));
  const std::size_t np = phase_points.size();
  const double dip_offset = 0.75 * radius, dip_width = 0.2 * radius;
  if (dip_width < 4.0 / static_cast<double>(n)) {
    fail(ErrorCode::InvalidArgument, "target points too close for the layer grid; raise grid_m");
  }
  auto dip = [&](double center) {
    std::vector<double> v(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = circle_distance(grid_t(j, n), center) / dip_width;
      if (x < 1.0) v[j] = -(1 - x * x) * (1 - x * x);
    }
    return v;
  };
  const auto h_chi = fourier::conjugate_function(chi);
  std::vector<double> h_at(np);
  for (std::size_t i = 0; i < np; ++i) h_at[i] = interpolate_real(h_chi, phase_points[i]);
  // the common value is the largest one; dips only raise the others
  const double shared_phase = *std::max_element(h_at.begin(), h_at.end());
  std::vector<int> side(np, 1);
  std::vector<std::vector<double>> dip_conj(np);
  Eigen::VectorXd depth = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(np));
  bool settled = false;
  for (int pass = 0; pass < 8 && !settled; ++pass) {
    Eigen::MatrixXd a(np, np);
    Eigen::VectorXd rhs(np);
    for (std::size_t k = 0; k < np; ++k)
      dip_conj[k] = fourier::conjugate_function(dip(phase_points[k] + side[k] * dip_offset));
    for (std::size_t i = 0; i < np; ++i) {
      rhs(i) = shared_phase - h_at[i];
      for (std::size_t k = 0; k < np; ++k) a(i, k) = interpolate_real(dip_conj[k], phase_points[i]);
    }
    depth = a.colPivHouseholderQr().solve(rhs);
    settled = true;
    for (std::size_t k = 0; k < np; ++k)
      if (depth(k) < 0) {
        side[k] = -side[k];
        settled = false;
      }
  }
  if (!settled) fail(ErrorCode::InvalidArgument, "could not equalize layer phases");
  std::vector<double> chi_eq = chi;
  for (std::size_t k = 0; k < np; ++k) {
    const auto v = dip(phase_points[k] + side[k] * dip_offset);
    for (std::size_t j = 0; j < n; ++j) chi_eq[j] += depth(k) * v[j];
  }
  const auto h_chi_eq = fourier::conjugate_function(chi_eq);

  LayeredSynthesis out;
  const double lambda0 = targets.lambda0;
  std::vector<cplx> outer_sum(n, 0.0);
  std::vector<std::vector<double>> layer_mod(static_cast<std::size_t>(n_layers));
  std::vector<cplx> core_outer(n);
  for (std::size_t j = 0; j < n; ++j)
    core_outer[j] = core.boundary_values[j] / zero_factor(grid_t(j, n), core.zeros);
  // grid points on a zero: take the outer part from the truncated series
  {
    const auto series = fourier::evaluate_on_grid(core.outer_coefficients, n);
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(std::abs(core_outer[j]))) core_outer[j] = series[j];
  }
  constexpr double gamma = 1.0;
  for (int layer = 0; layer < n_layers; ++layer) {
    const double cap = (layer + 1 < n_layers) ? 3.0 * std::pow(4.0, -(layer + 1))
                                              : std::pow(4.0, -layer);
    out.caps.push_back(cap * lambda0);
    const double s = gamma * layer;
    const cplx turn = std::polar(1.0, -s * shared_phase);
    auto& mod = layer_mod[static_cast<std::size_t>(layer)];
    mod.resize(n);
    std::vector<cplx> layer_outer(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double u = -s * (1.0 - chi_eq[j]);
      const cplx h = std::exp(cplx{u, s * h_chi_eq[j]});
      layer_outer[j] = cap * turn * h * core_outer[j];
      outer_sum[j] += layer_outer[j];
      mod[j] = cap * base.samples[j] * std::exp(u);
    }
    // sup over the grid and at the target points of the synthesized layer
    const auto coeffs = truncate_series(fourier::forward(layer_outer), opts.truncation);
    const Weight lw = Weight::factored(core.zeros, coeffs);
    double sup = 0.0;
    for (std::size_t j = 0; j < n; ++j) sup = std::max(sup, lw.modulus(grid_t(j, n)));
    for (const auto& p : targets.points) sup = std::max(sup, lw.modulus(p.angle));
    out.layer_sup.push_back(sup);
  }

  out.weight = assemble(outer_sum, core.zeros, m, opts);
  out.weight.fidelity = core.fidelity;
  const Weight w = out.weight.weight();
  for (const auto& p : targets.points)
    out.max_target_error = std::max(out.max_target_error, std::abs(w.modulus(p.angle) - p.modulus));

  double min_off = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double t = grid_t(j, n);
    if (min_distance_to(t, f_set) <= radius) continue;
    min_off = std::min(min_off, w.modulus(t));
    for (int layer = 0; layer + 1 < n_layers; ++layer) {
      const auto& lo = layer_mod[static_cast<std::size_t>(layer)];
      const auto& hi = layer_mod[static_cast<std::size_t>(layer) + 1];
      if (hi[j] > 0.25 * lo[j] * (1.0 + 1e-12)) out.decay_property = false;
    }
  }
  out.min_modulus_off_f = std::isfinite(min_off) ? min_off : 0.0;
  out.truncation_bound = std::pow(4.0, -n_layers) * lambda0 * (4.0 / 3.0);
  return out;
}

}  // namespace wco
