#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace fostab {

/// Exact fraction num/den used for derivative orders and w-plane exponents.
/// Always kept in lowest terms with a positive denominator; zero is 0/1.
class RationalOrder {
 public:
  constexpr RationalOrder() = default;
  RationalOrder(std::int64_t num, std::int64_t den = 1);

  /// Exact reading of a plain decimal such as "2.2" (-> 11/5) or "13".
  static RationalOrder from_decimal(std::string_view text);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const noexcept { return den_ == 1; }
  bool is_zero() const noexcept { return num_ == 0; }
  bool is_negative() const noexcept { return num_ < 0; }

  RationalOrder operator+(const RationalOrder& o) const;
  RationalOrder operator-(const RationalOrder& o) const;
  RationalOrder operator-() const;
  RationalOrder operator*(std::int64_t k) const;

  bool operator==(const RationalOrder&) const = default;
  std::strong_ordering operator<=>(const RationalOrder& o) const;

  /// "p/q" or "p" when integral.
  std::string to_string() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace fostab
