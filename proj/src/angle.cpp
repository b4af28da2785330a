#include "wco/angle.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "wco/errors.hpp"

namespace wco {

namespace {

std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    fail(ErrorCode::LimitExceeded, "rational angle overflows 64-bit range");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorCode::InvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  num %= den;
  if (num < 0) num += den;
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::times(std::int64_t d) const {
  const __int128 p = static_cast<__int128>(num_) * d;
  return Rational(static_cast<std::int64_t>(p % den_), den_);
}

Rational Rational::shifted_div(std::int64_t j, std::int64_t d) const {
  const __int128 n = static_cast<__int128>(num_) + static_cast<__int128>(j) * den_;
  return Rational(checked(n), checked(static_cast<__int128>(den_) * d));
}

std::string Rational::str() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    return Rational(std::stoll(text), 1);
  }
  return Rational(std::stoll(text.substr(0, slash)),
                  std::stoll(text.substr(slash + 1)));
}

double wrap_unit(double t) noexcept {
  double r = t - std::floor(t);
  if (r >= 1.0) r = 0.0;
  return r;
}

Angle Angle::from_double(double t) { return Angle(wrap_unit(t)); }

double Angle::to_double() const noexcept {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->to_double();
  return std::get<double>(value_);
}

Angle Angle::times(std::int64_t d) const {
  if (const auto* r = std::get_if<Rational>(&value_)) return Angle(r->times(d));
  return from_double(std::get<double>(value_) * static_cast<double>(d));
}

Angle Angle::shifted_div(std::int64_t j, std::int64_t d) const {
  if (const auto* r = std::get_if<Rational>(&value_)) {
    return Angle(r->shifted_div(j, d));
  }
  return from_double((std::get<double>(value_) + static_cast<double>(j)) /
                     static_cast<double>(d));
}

std::string Angle::str() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->str();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value_));
  return buf;
}

Angle Angle::parse(const std::string& text) {
  if (text.find('/') != std::string::npos) return Angle(Rational::parse(text));
  if (text.find_first_of(".eE") == std::string::npos) {
    return Angle(Rational::parse(text));
  }
  return from_double(std::stod(text));
}

bool operator==(const Angle& a, const Angle& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
  if (a.is_exact() != b.is_exact()) return false;
  return a.to_double() == b.to_double();
}

bool operator<(const Angle& a, const Angle& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() < b.exact();
  const double x = a.to_double();
  const double y = b.to_double();
  if (x != y) return x < y;
  return a.is_exact() && !b.is_exact();
}

double circle_distance(double a, double b) noexcept {
  const double d = wrap_unit(a - b);
  return std::min(d, 1.0 - d);
}

double circle_distance(const Angle& a, const Angle& b) noexcept {
  if (a.is_exact() && b.is_exact()) {
    const Rational& x = a.exact();
    const Rational& y = b.exact();
    // exact difference first, then a single rounding
    const __int128 num = static_cast<__int128>(x.num()) * y.den() -
                         static_cast<__int128>(y.num()) * x.den();
    const __int128 den = static_cast<__int128>(x.den()) * y.den();
    __int128 r = num % den;
    if (r < 0) r += den;
    const double d = static_cast<double>(r) / static_cast<double>(den);
    return std::min(d, 1.0 - d);
  }
  return circle_distance(a.to_double(), b.to_double());
}

}  // namespace wco
