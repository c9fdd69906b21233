#include "fostab/vector_field.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fostab/errors.hpp"

namespace fostab {

MultiPolynomial::MultiPolynomial(std::size_t nvars, std::vector<Monomial> terms) : nvars_(nvars) {
  std::map<std::vector<int>, double> merged;
  for (Monomial& t : terms) {
    if (t.exponents.size() != nvars_) throw InvalidInput("monomial exponent vector has wrong length");
    for (int e : t.exponents)
      if (e < 0) throw InvalidInput("negative exponent in polynomial");
    merged[t.exponents] += t.coeff;
  }
  for (auto& [exps, c] : merged)
    if (c != 0.0) terms_.push_back({c, exps});
}

MultiPolynomial MultiPolynomial::constant(std::size_t nvars, double c) {
  return MultiPolynomial(nvars, {Monomial{c, std::vector<int>(nvars, 0)}});
}

MultiPolynomial MultiPolynomial::variable(std::size_t nvars, std::size_t index) {
  std::vector<int> e(nvars, 0);
  e.at(index) = 1;
  return MultiPolynomial(nvars, {Monomial{1.0, e}});
}

MultiPolynomial MultiPolynomial::operator+(const MultiPolynomial& o) const {
  std::vector<Monomial> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return MultiPolynomial(nvars_, std::move(all));
}

MultiPolynomial MultiPolynomial::operator-() const {
  std::vector<Monomial> neg = terms_;
  for (Monomial& t : neg) t.coeff = -t.coeff;
  return MultiPolynomial(nvars_, std::move(neg));
}

MultiPolynomial MultiPolynomial::operator-(const MultiPolynomial& o) const { return *this + (-o); }

MultiPolynomial MultiPolynomial::operator*(const MultiPolynomial& o) const {
  std::vector<Monomial> prod;
  prod.reserve(terms_.size() * o.terms_.size());
  for (const Monomial& a : terms_) {
    for (const Monomial& b : o.terms_) {
      Monomial t{a.coeff * b.coeff, a.exponents};
      for (std::size_t i = 0; i < nvars_; ++i) t.exponents[i] += b.exponents[i];
      prod.push_back(std::move(t));
    }
  }
  return MultiPolynomial(nvars_, std::move(prod));
}

MultiPolynomial MultiPolynomial::pow(int k) const {
  if (k < 0) throw InvalidInput("negative power of a polynomial");
  MultiPolynomial result = constant(nvars_, 1.0);
  for (int i = 0; i < k; ++i) result = result * *this;
  return result;
}

double MultiPolynomial::evaluate(std::span<const double> x) const {
  double acc = 0.0;
  for (const Monomial& t : terms_) {
    double v = t.coeff;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (int e = 0; e < t.exponents[i]; ++e) v *= x[i];
    acc += v;
  }
  return acc;
}

MultiPolynomial MultiPolynomial::derivative(std::size_t var) const {
  std::vector<Monomial> d;
  for (const Monomial& t : terms_) {
    const int e = t.exponents.at(var);
    if (e == 0) continue;
    Monomial dt{t.coeff * e, t.exponents};
    dt.exponents[var] -= 1;
    d.push_back(std::move(dt));
  }
  return MultiPolynomial(nvars_, std::move(d));
}

PolynomialVectorField::PolynomialVectorField(std::vector<RationalOrder> orders, std::vector<MultiPolynomial> components)
    : orders_(std::move(orders)), components_(std::move(components)) {
  const std::size_t n = components_.size();
  if (n == 0) throw InvalidInput("vector field needs at least one component");
  if (orders_.size() != n)
    throw InvalidInput("vector field has " + std::to_string(n) + " components but " +
                       std::to_string(orders_.size()) + " orders");
  for (const RationalOrder& q : orders_)
    if (q <= RationalOrder(0) || q >= RationalOrder(2))
      throw DomainError("order " + q.to_string() + " outside (0, 2)");
  for (const MultiPolynomial& f : components_)
    if (f.nvars() != n) throw InvalidInput("component polynomial over the wrong number of variables");
  partials_.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) partials_[i].push_back(components_[i].derivative(j));
}

Eigen::VectorXd PolynomialVectorField::evaluate(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(dimension()));
  evaluate(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
           std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

void PolynomialVectorField::evaluate(std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i < components_.size(); ++i) out[i] = components_[i].evaluate(x);
}

Eigen::MatrixXd PolynomialVectorField::jacobian(const Eigen::VectorXd& x) const {
  const auto n = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd j(n, n);
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      j(r, c) = partials_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].evaluate(xs);
  return j;
}

double PolynomialVectorField::scale() const {
  double s = 0.0;
  for (const MultiPolynomial& f : components_)
    for (const Monomial& t : f.terms()) s = std::max(s, std::fabs(t.coeff));
  return s;
}

}  // namespace fostab
