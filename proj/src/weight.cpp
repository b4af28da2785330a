#include "wco/weight.hpp"

#include <algorithm>
#include <cmath>

#include "wco/blaschke.hpp"
#include "wco/circle_dynamics.hpp"
#include "wco/errors.hpp"
#include "wco/fourier.hpp"

namespace wco {

class Weight::Impl {
 public:
  virtual ~Impl() = default;
  virtual cplx circle(double t) const = 0;
  virtual cplx circle_exact(const Angle& t) const { return circle(t.to_double()); }
  virtual double abs_circle(double t) const { return std::abs(circle(t)); }
  virtual double abs_exact(const Angle& t) const { return std::abs(circle_exact(t)); }
  virtual std::optional<cplx> disc(cplx) const { return std::nullopt; }
  virtual std::optional<std::vector<cplx>> coeffs() const { return std::nullopt; }
  virtual std::vector<CircleZero> zeros() const { return {}; }
  virtual std::optional<std::vector<cplx>> outer() const { return coeffs(); }
  virtual std::string kind() const = 0;
};

namespace {

cplx unit(double t) { return std::polar(1.0, kTwoPi * t); }

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx acc{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

/// Periodic cubic Lagrange interpolation of uniformly spaced samples.
cplx interpolate(const std::vector<cplx>& table, double t) {
  const std::size_t n = table.size();
  const double x = wrap_unit(t) * static_cast<double>(n);
  const auto i = static_cast<std::ptrdiff_t>(std::floor(x));
  const double s = x - static_cast<double>(i);
  auto at = [&](std::ptrdiff_t k) {
    const auto m = static_cast<std::ptrdiff_t>(n);
    return table[static_cast<std::size_t>(((k % m) + m) % m)];
  };
  const cplx p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  const double w0 = -s * (s - 1) * (s - 2) / 6.0;
  const double w1 = (s + 1) * (s - 1) * (s - 2) / 2.0;
  const double w2 = -(s + 1) * s * (s - 2) / 2.0;
  const double w3 = (s + 1) * s * (s - 1) / 6.0;
  return w0 * p0 + w1 * p1 + w2 * p2 + w3 * p3;
}

class ConstantImpl final : public Weight::Impl {
 public:
  explicit ConstantImpl(cplx c) : c_(c) {}
  cplx circle(double) const override { return c_; }
  std::optional<cplx> disc(cplx) const override { return c_; }
  std::optional<std::vector<cplx>> coeffs() const override { return std::vector<cplx>{c_}; }
  std::string kind() const override { return "constant"; }

 private:
  cplx c_;
};

class PolynomialImpl final : public Weight::Impl {
 public:
  explicit PolynomialImpl(std::vector<cplx> c) : c_(std::move(c)) {}
  cplx circle(double t) const override { return horner(c_, unit(t)); }
  std::optional<cplx> disc(cplx z) const override { return horner(c_, z); }
  std::optional<std::vector<cplx>> coeffs() const override { return c_; }
  std::string kind() const override { return "polynomial"; }

 private:
  std::vector<cplx> c_;
};

class FactoredImpl final : public Weight::Impl {
 public:
  FactoredImpl(std::vector<CircleZero> zeros, std::vector<cplx> outer)
      : zeros_(std::move(zeros)), outer_(std::move(outer)) {
    std::size_t n = 1 << 16;
    while (n < 16 * outer_.size()) n <<= 1;
    table_ = fourier::evaluate_on_grid(outer_, n);
  }

  cplx circle(double t) const override {
    cplx acc = interpolate(table_, t);
    for (const auto& z : zeros_) {
      const double a = z.angle.to_double();
      // (e^{2 pi i t} - e^{2 pi i a})/2 = i e^{i pi (t + a)} sin(pi (t - a))
      const cplx f = cplx{0, 1} * std::polar(1.0, kPi * (t + a)) * std::sin(kPi * (t - a));
      for (int k = 0; k < z.order; ++k) acc *= f;
    }
    return acc;
  }

  cplx circle_exact(const Angle& t) const override {
    for (const auto& z : zeros_)
      if (z.angle == t) return 0.0;
    return circle(t.to_double());
  }

  std::optional<cplx> disc(cplx z) const override {
    cplx acc = horner(outer_, z);
    for (const auto& zero : zeros_) {
      const cplx f = (z - unit(zero.angle.to_double())) / 2.0;
      for (int k = 0; k < zero.order; ++k) acc *= f;
    }
    return acc;
  }

  std::optional<std::vector<cplx>> coeffs() const override {
    std::vector<cplx> c = outer_;
    for (const auto& zero : zeros_) {
      const cplx root = unit(zero.angle.to_double());
      for (int k = 0; k < zero.order; ++k) {
        std::vector<cplx> next(c.size() + 1);
        for (std::size_t i = 0; i < c.size(); ++i) {
          next[i] += -root / 2.0 * c[i];
          next[i + 1] += c[i] / 2.0;
        }
        c = std::move(next);
      }
    }
    return c;
  }

  std::vector<CircleZero> zeros() const override { return zeros_; }
  std::optional<std::vector<cplx>> outer() const override { return outer_; }
  std::string kind() const override { return "factored"; }

 private:
  std::vector<CircleZero> zeros_;
  std::vector<cplx> outer_;
  std::vector<cplx> table_;
};

class SampledImpl final : public Weight::Impl {
 public:
  explicit SampledImpl(std::vector<cplx> v) : values_(std::move(v)) {}
  cplx circle(double t) const override { return interpolate(values_, t); }
  std::string kind() const override { return "sampled"; }

 private:
  std::vector<cplx> values_;
};

class TransportedImpl final : public Weight::Impl {
 public:
  TransportedImpl(Weight base, SemiconjugacyTable table)
      : base_(std::move(base)), table_(std::move(table)) {}
  cplx circle(double s) const override {
    return base_.on_circle(table_.inverse_model_angle(s));
  }
  std::vector<CircleZero> zeros() const override {
    std::vector<CircleZero> out;
    for (const auto& z : base_.prescribed_zeros()) {
      out.push_back({Angle::from_double(table_.model_angle(z.angle.to_double())), z.order});
    }
    return out;
  }
  std::string kind() const override { return "transported"; }

 private:
  Weight base_;
  SemiconjugacyTable table_;
};

class RotatedImpl final : public Weight::Impl {
 public:
  RotatedImpl(std::shared_ptr<const Weight::Impl> base, double alpha)
      : base_(std::move(base)), phase_(std::polar(1.0, alpha)) {}
  cplx circle(double t) const override { return phase_ * base_->circle(t); }
  cplx circle_exact(const Angle& t) const override { return phase_ * base_->circle_exact(t); }
  // the modulus ignores the phase exactly, not just up to rounding
  double abs_circle(double t) const override { return base_->abs_circle(t); }
  double abs_exact(const Angle& t) const override { return base_->abs_exact(t); }
  std::optional<cplx> disc(cplx z) const override {
    if (auto v = base_->disc(z)) return phase_ * *v;
    return std::nullopt;
  }
  std::optional<std::vector<cplx>> coeffs() const override {
    auto c = base_->coeffs();
    if (c)
      for (auto& v : *c) v *= phase_;
    return c;
  }
  std::optional<std::vector<cplx>> outer() const override {
    auto c = base_->outer();
    if (c)
      for (auto& v : *c) v *= phase_;
    return c;
  }
  std::vector<CircleZero> zeros() const override { return base_->zeros(); }
  std::string kind() const override { return base_->kind(); }

 private:
  std::shared_ptr<const Weight::Impl> base_;
  cplx phase_;
};

}  // namespace

Weight::Weight() : impl_(std::make_shared<ConstantImpl>(1.0)) {}

Weight Weight::constant(cplx c) { return Weight(std::make_shared<ConstantImpl>(c)); }

Weight Weight::polynomial(std::vector<cplx> coeffs) {
  if (coeffs.empty()) fail(ErrorCode::InvalidArgument, "empty coefficient list");
  return Weight(std::make_shared<PolynomialImpl>(std::move(coeffs)));
}

Weight Weight::factored(std::vector<CircleZero> zeros, std::vector<cplx> outer_coeffs) {
  if (outer_coeffs.empty()) fail(ErrorCode::InvalidArgument, "empty outer coefficient list");
  for (const auto& z : zeros)
    if (z.order < 1) fail(ErrorCode::InvalidArgument, "zero order must be >= 1");
  return Weight(std::make_shared<FactoredImpl>(std::move(zeros), std::move(outer_coeffs)));
}

Weight Weight::sampled(std::vector<cplx> boundary_values) {
  if (!fourier::is_power_of_two(boundary_values.size()) || boundary_values.size() < 4) {
    fail(ErrorCode::InvalidArgument, "sample count must be a power of two >= 4");
  }
  return Weight(std::make_shared<SampledImpl>(std::move(boundary_values)));
}

Weight Weight::transported(const Weight& base, const SemiconjugacyTable& table) {
  return Weight(std::make_shared<TransportedImpl>(base, table));
}

cplx Weight::on_circle(double t) const { return impl_->circle(wrap_unit(t)); }
cplx Weight::on_circle(const Angle& t) const { return impl_->circle_exact(t); }
double Weight::modulus(const Angle& t) const { return impl_->abs_exact(t); }
double Weight::modulus(double t) const { return impl_->abs_circle(wrap_unit(t)); }
std::optional<cplx> Weight::in_disc(cplx z) const { return impl_->disc(z); }

Weight Weight::rotated(double alpha) const {
  return Weight(std::make_shared<RotatedImpl>(impl_, alpha));
}

std::optional<std::vector<cplx>> Weight::taylor_coefficients() const { return impl_->coeffs(); }
std::vector<CircleZero> Weight::prescribed_zeros() const { return impl_->zeros(); }
std::optional<std::vector<cplx>> Weight::outer_coefficients() const { return impl_->outer(); }
std::string Weight::kind() const { return impl_->kind(); }

std::vector<cplx> Weight::boundary_samples(std::size_t n) const {
  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j)
    out[j] = on_circle(Angle(Rational(static_cast<std::int64_t>(j), static_cast<std::int64_t>(n))));
  return out;
}

double Weight::sup_modulus(std::size_t n) const {
  double m = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    m = std::max(m, modulus(static_cast<double>(j) / static_cast<double>(n)));
  return m;
}

std::optional<Rational> snap_to_rational(double t, std::int64_t max_den, double tol) {
  t = wrap_unit(t);
  // continued-fraction convergents
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = t;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0;
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - t) <= tol) {
      return Rational(h1, k1);
    }
    const double frac = x - a;
    if (frac < 1e-300) break;
    x = 1.0 / frac;
  }
  if (circle_distance(t, 0.0) <= tol) return Rational(0, 1);
  return std::nullopt;
}

std::vector<Angle> Weight::circle_zeros(double zero_tol, int scan_grid) const {
  std::vector<Angle> out;
  auto add = [&](const Angle& a) {
    for (const auto& b : out)
      if (circle_distance(a, b) < 1e-9) return;
    out.push_back(a);
  };
  for (const auto& z : prescribed_zeros()) add(z.angle);

  const int n = scan_grid;
  std::vector<double> mod(static_cast<std::size_t>(n));
  double peak = 0.0;
  for (int j = 0; j < n; ++j) {
    mod[j] = modulus(static_cast<double>(j) / n);
    peak = std::max(peak, mod[j]);
  }
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int j = 0; j < n; ++j) {
    const double left = mod[(j + n - 1) % n];
    const double right = mod[(j + 1) % n];
    if (!(mod[j] <= left && mod[j] <= right && mod[j] < 1e-2 * std::max(peak, 1e-300))) continue;
    // golden section on [t_{j-1}, t_{j+1}]
    double a = static_cast<double>(j - 1) / n, b = static_cast<double>(j + 1) / n;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = modulus(c), fd = modulus(d);
    while (b - a > 1e-15) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = modulus(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = modulus(d);
      }
    }
    double best = 0.5 * (a + b);
    double best_val = modulus(best);
    if (mod[j] <= best_val) {
      best = static_cast<double>(j) / n;
      best_val = mod[j];
    }
    if (auto r = snap_to_rational(best, 10000, 1e-9)) {
      if (modulus(Angle(*r)) <= zero_tol) {
        add(Angle(*r));
        continue;
      }
    }
    if (best_val <= zero_tol) add(Angle::from_double(best));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace wco
