#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fostab/rational_order.hpp"

namespace fostab {

/// Largest lifted degree accepted anywhere in the library.
inline constexpr int kMaxFdeg = 128;

struct Term {
  double coeff = 0.0;
  RationalOrder order;

  bool operator==(const Term&) const = default;
};

/// Sum of coeff * s^order terms with exact rational orders.
///
/// Construction canonicalizes: duplicate orders are merged by summing their
/// coefficients, zero coefficients are dropped and the remaining terms are
/// sorted by strictly descending order. The zero polynomial has no terms.
class PseudoPolynomial {
 public:
  PseudoPolynomial() = default;
  explicit PseudoPolynomial(std::vector<Term> terms);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Highest and lowest order; the polynomial must be nonempty.
  const Term& leading() const;
  const Term& trailing() const;

  /// Principal-branch evaluation, s^q = exp(q log s) with arg s in (-pi, pi].
  std::complex<double> evaluate(std::complex<double> s) const;

  bool operator==(const PseudoPolynomial&) const = default;

 private:
  std::vector<Term> terms_;
};

/// Ordinary polynomial in w = s^(1/m). coeffs[i] multiplies w^i.
class WPolynomial {
 public:
  WPolynomial(std::vector<double> coeffs, int m);

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  int m() const noexcept { return m_; }

  std::complex<double> evaluate(std::complex<double> w) const;

 private:
  std::vector<double> coeffs_;
  int m_;
};

/// Least common multiple of the (reduced) denominators.
std::int64_t lcm_of_orders(std::span<const RationalOrder> orders);

/// LCM over the orders of p's terms.
std::int64_t lcm_of_orders(const PseudoPolynomial& p);

/// Lift to the w-plane with m = LCM of denominators. Orders must be
/// nonnegative and the lifted degree at most kMaxFdeg.
WPolynomial to_w_polynomial(const PseudoPolynomial& p);

/// Largest lifted exponent, max(order * m).
int fdeg(const PseudoPolynomial& p);

/// True when the lift uses no redundant Riemann sheets: gcd of all lifted
/// exponents together with m equals 1.
bool is_minimal(const PseudoPolynomial& p);

/// Canonical text form, e.g. "0.8*s^(11/5) + 0.5*s^(9/10) + 1". The output is
/// accepted by parse_pseudo_polynomial and reproduces the same polynomial.
std::string to_string(const PseudoPolynomial& p, char var = 's');

/// Shortest decimal text that reads back to exactly `value`.
std::string format_double(double value);

}  // namespace fostab
