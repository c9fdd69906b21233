#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "fostab/rational_order.hpp"

namespace fostab {

/// coeff * x1^e1 * ... * xn^en
struct Monomial {
  double coeff = 0.0;
  std::vector<int> exponents;
};

/// Multivariate polynomial as a canonical list of monomials (merged, zero
/// coefficients dropped, exponent vectors in lexicographic order).
class MultiPolynomial {
 public:
  explicit MultiPolynomial(std::size_t nvars = 0) : nvars_(nvars) {}
  MultiPolynomial(std::size_t nvars, std::vector<Monomial> terms);

  static MultiPolynomial constant(std::size_t nvars, double c);
  static MultiPolynomial variable(std::size_t nvars, std::size_t index);

  std::size_t nvars() const noexcept { return nvars_; }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }

  MultiPolynomial operator+(const MultiPolynomial& o) const;
  MultiPolynomial operator-(const MultiPolynomial& o) const;
  MultiPolynomial operator*(const MultiPolynomial& o) const;
  MultiPolynomial operator-() const;
  MultiPolynomial pow(int k) const;

  double evaluate(std::span<const double> x) const;
  MultiPolynomial derivative(std::size_t var) const;

 private:
  std::size_t nvars_;
  std::vector<Monomial> terms_;
};

/// D^{q_i} x_i = f_i(x), i = 1..n, with polynomial f_i and 0 < q_i < 2.
class PolynomialVectorField {
 public:
  PolynomialVectorField(std::vector<RationalOrder> orders, std::vector<MultiPolynomial> components);

  std::size_t dimension() const noexcept { return components_.size(); }
  const std::vector<RationalOrder>& orders() const noexcept { return orders_; }
  const std::vector<MultiPolynomial>& components() const noexcept { return components_; }

  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const;
  void evaluate(std::span<const double> x, std::span<double> out) const;

  /// Exact partial derivatives evaluated at x.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

  /// Largest coefficient magnitude over all components.
  double scale() const;

 private:
  std::vector<RationalOrder> orders_;
  std::vector<MultiPolynomial> components_;
  std::vector<std::vector<MultiPolynomial>> partials_;
};

}  // namespace fostab
