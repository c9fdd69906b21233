#include "fostab/rational_order.hpp"

#include <cctype>
#include <limits>
#include <numeric>

#include "fostab/errors.hpp"

namespace fostab {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw InvalidInput("rational order overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw InvalidInput("rational order overflow");
  return r;
}

}  // namespace

RationalOrder::RationalOrder(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidInput("rational order with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) {
    num_ = 0;
    den_ = 1;
    return;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

RationalOrder RationalOrder::from_decimal(std::string_view text) {
  if (text.empty()) throw InvalidInput("empty decimal");
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    ++pos;
  }
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool seen_dot = false;
  bool seen_digit = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.') {
      if (seen_dot) throw InvalidInput("malformed decimal '" + std::string(text) + "'");
      seen_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw InvalidInput("malformed decimal '" + std::string(text) + "'");
    seen_digit = true;
    num = checked_add(checked_mul(num, 10), c - '0');
    if (seen_dot) den = checked_mul(den, 10);
  }
  if (!seen_digit) throw InvalidInput("malformed decimal '" + std::string(text) + "'");
  return {negative ? -num : num, den};
}

RationalOrder RationalOrder::operator+(const RationalOrder& o) const {
  const std::int64_t l = std::lcm(den_, o.den_);
  return {checked_add(checked_mul(num_, l / den_), checked_mul(o.num_, l / o.den_)), l};
}

RationalOrder RationalOrder::operator-(const RationalOrder& o) const { return *this + (-o); }

RationalOrder RationalOrder::operator-() const { return {-num_, den_}; }

RationalOrder RationalOrder::operator*(std::int64_t k) const { return {checked_mul(num_, k), den_}; }

std::strong_ordering RationalOrder::operator<=>(const RationalOrder& o) const {
  // Cross-multiplication in 128 bits cannot overflow.
  __extension__ typedef __int128 wide;
  const wide lhs = static_cast<wide>(num_) * o.den_;
  const wide rhs = static_cast<wide>(o.num_) * den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string RationalOrder::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace fostab
