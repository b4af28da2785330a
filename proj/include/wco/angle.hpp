#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace wco {

/// Reduced fraction num/den with 0 <= num < den; a point of R/Z.
class Rational {
 public:
  Rational() = default;
  /// Reduces and wraps into [0,1). Throws InvalidArgument on den == 0 and
  /// LimitExceeded when a later product would leave the int64 range.
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /// d*t mod 1.
  Rational times(std::int64_t d) const;
  /// (t + j)/d mod 1.
  Rational shifted_div(std::int64_t j, std::int64_t d) const;

  std::string str() const;
  static Rational parse(const std::string& text);

  friend bool operator==(const Rational&, const Rational&) = default;
  friend auto operator<=>(const Rational& a, const Rational& b) {
    // cross-multiplication fits in 128 bits
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Circle coordinate: exact rational when periodic/preperiodic data is known,
/// floating otherwise. The boundary point is exp(2*pi*i*t).
class Angle {
 public:
  Angle() : value_(Rational{}) {}
  Angle(Rational r) : value_(r) {}  // NOLINT(implicit)
  /// Wraps into [0,1).
  static Angle from_double(double t);

  bool is_exact() const noexcept {
    return std::holds_alternative<Rational>(value_);
  }
  const Rational& exact() const { return std::get<Rational>(value_); }
  double to_double() const noexcept;

  Angle times(std::int64_t d) const;
  Angle shifted_div(std::int64_t j, std::int64_t d) const;

  std::string str() const;
  /// Accepts "p/q" or a decimal literal.
  static Angle parse(const std::string& text);

  friend bool operator==(const Angle& a, const Angle& b);
  /// Total order: by numeric value, exact before float on ties.
  friend bool operator<(const Angle& a, const Angle& b);

 private:
  explicit Angle(double t) : value_(t) {}
  std::variant<Rational, double> value_;
};

/// Distance on R/Z, in [0, 1/2].
double circle_distance(double a, double b) noexcept;
double circle_distance(const Angle& a, const Angle& b) noexcept;

/// Wraps into [0,1).
double wrap_unit(double t) noexcept;

}  // namespace wco

template <>
struct std::hash<wco::Rational> {
  std::size_t operator()(const wco::Rational& r) const noexcept {
    return std::hash<std::int64_t>{}(r.num()) * 1000003u ^
           std::hash<std::int64_t>{}(r.den());
  }
};
