#include "wco/fourier.hpp"

#include <fftw3.h>

#include <mutex>

#include "wco/errors.hpp"

namespace wco::fourier {

namespace {

// The FFTW planner is not reentrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  Plan(std::size_t n, int sign) : n_(n) {
    in_ = fftw_alloc_complex(n);
    out_ = fftw_alloc_complex(n);
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_, sign, FFTW_ESTIMATE);
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  std::vector<cplx> run(std::span<const cplx> x) {
    for (std::size_t i = 0; i < n_; ++i) {
      in_[i][0] = x[i].real();
      in_[i][1] = x[i].imag();
    }
    fftw_execute(plan_);
    std::vector<cplx> y(n_);
    for (std::size_t i = 0; i < n_; ++i) y[i] = {out_[i][0], out_[i][1]};
    return y;
  }

 private:
  std::size_t n_;
  fftw_complex* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::vector<cplx> forward(std::span<const cplx> samples) {
  if (samples.empty()) return {};
  Plan plan(samples.size(), FFTW_FORWARD);
  auto c = plan.run(samples);
  const double scale = 1.0 / static_cast<double>(samples.size());
  for (auto& v : c) v *= scale;
  return c;
}

std::vector<cplx> inverse(std::span<const cplx> coeffs) {
  if (coeffs.empty()) return {};
  Plan plan(coeffs.size(), FFTW_BACKWARD);
  return plan.run(coeffs);
}

std::vector<cplx> evaluate_on_grid(std::span<const cplx> coeffs, std::size_t n) {
  if (coeffs.size() > n) {
    fail(ErrorCode::InvalidArgument, "grid smaller than the coefficient count");
  }
  std::vector<cplx> padded(n);
  std::copy(coeffs.begin(), coeffs.end(), padded.begin());
  return inverse(padded);
}

std::vector<double> conjugate_function(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n == 0) return {};
  std::vector<cplx> x(samples.begin(), samples.end());
  auto c = forward(x);
  c[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    if (2 * k == n) {
      c[k] = 0.0;
    } else if (2 * k < n) {
      c[k] *= cplx{0.0, -1.0};
    } else {
      c[k] *= cplx{0.0, 1.0};
    }
  }
  const auto y = inverse(c);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = y[j].real();
  return out;
}

double negative_frequency_ratio(std::span<const cplx> coeffs) {
  const std::size_t n = coeffs.size();
  double total = 0.0, negative = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = std::norm(coeffs[k]);
    total += e;
    if (2 * k >= n && k > 0) negative += e;
  }
  return total > 0 ? negative / total : 0.0;
}

}  // namespace wco::fourier
