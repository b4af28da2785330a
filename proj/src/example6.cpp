#include <algorithm>
#include <cmath>
#include <functional>

#include "wco/errors.hpp"
#include "wco/spectra.hpp"

namespace wco {

namespace {

/// |sin(pi y_i)| for y_0 = x, y_i = frac(m y_{i-1}); avoids the precision loss
/// of evaluating sin at (2k)^i pi x directly.
std::vector<double> sine_chain(double x, int m, int n) {
  std::vector<double> s(static_cast<std::size_t>(n) + 1);
  double y = x;
  for (int i = 0; i <= n; ++i) {
    s[static_cast<std::size_t>(i)] = std::abs(std::sin(kPi * y));
    y *= m;
    y -= std::floor(y);
  }
  return s;
}

/// Max over x in [0, 1) by grid search plus golden-section refinement of the
/// best local maxima.
double maximize(const std::function<double(double)>& f, std::size_t grid) {
  std::vector<double> v(grid);
  for (std::size_t j = 0; j < grid; ++j) v[j] = f(static_cast<double>(j) / static_cast<double>(grid));
  std::vector<std::size_t> peaks;
  for (std::size_t j = 0; j < grid; ++j) {
    const double l = v[(j + grid - 1) % grid], r = v[(j + 1) % grid];
    if (v[j] >= l && v[j] >= r) peaks.push_back(j);
  }
  const std::size_t keep = std::min<std::size_t>(peaks.size(), 32);
  std::partial_sort(peaks.begin(), peaks.begin() + static_cast<std::ptrdiff_t>(keep), peaks.end(),
                    [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  double best = peaks.empty() ? *std::max_element(v.begin(), v.end()) : v[peaks.front()];
  const double h = 1.0 / static_cast<double>(grid);
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (std::size_t i = 0; i < keep; ++i) {
    double a = static_cast<double>(peaks[i]) * h - h, b = a + 2 * h;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 120 && b - a > 1e-17; ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = f(d);
      }
    }
    best = std::max({best, fc, fd});
  }
  return best;
}

}  // namespace

bool Example6Report::all_ok() const {
  if (!step_a_ok) return false;
  for (const auto& r : products)
    if (!r.ok) return false;
  for (const auto& r : step_b)
    if (!r.ok) return false;
  return true;
}

Example6Report verify_example6(int k, int n_max, std::size_t grid, double tol) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
  if (n_max < 1 || n_max > 8) fail(ErrorCode::InvalidArgument, "n_max must lie in [1, 8]");
  if (grid < 16) fail(ErrorCode::InvalidArgument, "grid too small");
  const int m = 2 * k;
  const double s = std::sin(kPi * k / (2.0 * k + 1.0));
  const double x_star = static_cast<double>(k) / (2.0 * k + 1.0);
  Example6Report rep;
  rep.k = k;
  rep.tol = tol;

  auto grid_for = [&](int n) {
    return std::max(grid, static_cast<std::size_t>(32.0 * std::pow(m, n)));
  };

  for (int n = 1; n <= n_max; ++n) {
    auto f = [&](double x) {
      double p = 1.0;
      for (double v : sine_chain(x, m, n)) p *= v;
      return p;
    };
    SineProductRow row;
    row.n = n;
    row.grid_points = grid_for(n);
    row.brute_max = maximize(f, row.grid_points);
    row.bound = std::pow(s, n);
    row.ok = row.brute_max <= row.bound + tol;
    rep.products.push_back(row);
  }

  auto step_a = [&](double x) {
    const auto c = sine_chain(x, m, 1);
    return std::pow(c[0], 2 * k) * c[1];
  };
  rep.step_a_max = maximize(step_a, grid_for(1));
  rep.step_a_expected = std::pow(s, 2 * k + 1);
  rep.step_a_ok = std::abs(rep.step_a_max - rep.step_a_expected) <= tol &&
                  std::abs(step_a(x_star) - rep.step_a_expected) <= tol;

  for (int n = 1; n <= n_max; ++n) {
    auto p = [&](double x) {
      const auto c = sine_chain(x, m, n);
      double v = std::pow(c[0], 2 * k);
      for (int i = 1; i < n; ++i) v *= std::pow(c[static_cast<std::size_t>(i)], 2 * k + 1);
      return v * c[static_cast<std::size_t>(n)];
    };
    SineProductStepB row;
    row.n = n;
    row.brute_max = maximize(p, grid_for(n));
    row.at_star = p(x_star);
    row.expected = std::pow(s, (2 * k + 1) * n);
    row.ok = row.brute_max <= row.at_star + tol && std::abs(row.at_star - row.expected) <= tol;
    rep.step_b.push_back(row);
  }
  return rep;
}

}  // namespace wco
