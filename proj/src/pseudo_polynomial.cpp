#include "fostab/pseudo_polynomial.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

#include "fostab/errors.hpp"

namespace fostab {

PseudoPolynomial::PseudoPolynomial(std::vector<Term> terms) {
  std::map<RationalOrder, double, std::greater<>> merged;
  for (const Term& t : terms) {
    if (!std::isfinite(t.coeff)) throw InvalidInput("non-finite coefficient");
    merged[t.order] += t.coeff;
  }
  for (const auto& [order, coeff] : merged)
    if (coeff != 0.0) terms_.push_back({coeff, order});
}

const Term& PseudoPolynomial::leading() const {
  if (terms_.empty()) throw InvalidInput("empty pseudo-polynomial");
  return terms_.front();
}

const Term& PseudoPolynomial::trailing() const {
  if (terms_.empty()) throw InvalidInput("empty pseudo-polynomial");
  return terms_.back();
}

std::complex<double> PseudoPolynomial::evaluate(std::complex<double> s) const {
  std::complex<double> acc = 0.0;
  const bool at_origin = s == std::complex<double>(0.0, 0.0);
  const std::complex<double> log_s = at_origin ? std::complex<double>() : std::log(s);
  for (const Term& t : terms_) {
    if (t.order.is_zero()) {
      acc += t.coeff;
    } else if (!at_origin) {
      acc += t.coeff * std::exp(t.order.to_double() * log_s);
    } else if (t.order.is_negative()) {
      return {std::numeric_limits<double>::infinity(), 0.0};
    }
  }
  return acc;
}

WPolynomial::WPolynomial(std::vector<double> coeffs, int m) : coeffs_(std::move(coeffs)), m_(m) {
  if (m_ < 1) throw InvalidInput("w-polynomial requires m >= 1");
  if (coeffs_.empty() || coeffs_.back() == 0.0)
    throw InvalidInput("w-polynomial leading coefficient must be nonzero");
  if (degree() > kMaxFdeg)
    throw InvalidInput("fractional degree " + std::to_string(degree()) + " exceeds the supported maximum of " +
                       std::to_string(kMaxFdeg));
}

std::complex<double> WPolynomial::evaluate(std::complex<double> w) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * w + *it;
  return acc;
}

std::int64_t lcm_of_orders(std::span<const RationalOrder> orders) {
  if (orders.empty()) throw InvalidInput("lcm of an empty order list");
  std::int64_t l = 1;
  for (const RationalOrder& q : orders) {
    l = std::lcm(l, q.den());
    if (l > 1'000'000) throw InvalidInput("order denominators too large");
  }
  return l;
}

std::int64_t lcm_of_orders(const PseudoPolynomial& p) {
  std::vector<RationalOrder> orders;
  orders.reserve(p.size());
  for (const Term& t : p.terms()) orders.push_back(t.order);
  return lcm_of_orders(orders);
}

namespace {

std::int64_t lifted_exponent(const RationalOrder& q, std::int64_t m) { return q.num() * (m / q.den()); }

}  // namespace

WPolynomial to_w_polynomial(const PseudoPolynomial& p) {
  if (p.empty()) throw InvalidInput("cannot lift an empty pseudo-polynomial");
  for (const Term& t : p.terms())
    if (t.order.is_negative()) throw InvalidInput("negative order " + t.order.to_string() + " cannot be lifted");
  const std::int64_t m = lcm_of_orders(p);
  const std::int64_t degree = lifted_exponent(p.leading().order, m);
  if (degree > kMaxFdeg)
    throw InvalidInput("fractional degree " + std::to_string(degree) + " exceeds the supported maximum of " +
                       std::to_string(kMaxFdeg));
  std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1, 0.0);
  for (const Term& t : p.terms()) coeffs[static_cast<std::size_t>(lifted_exponent(t.order, m))] = t.coeff;
  return WPolynomial(std::move(coeffs), static_cast<int>(m));
}

int fdeg(const PseudoPolynomial& p) {
  if (p.empty()) throw InvalidInput("fdeg of an empty pseudo-polynomial");
  const std::int64_t m = lcm_of_orders(p);
  std::int64_t best = 0;
  for (const Term& t : p.terms()) best = std::max(best, lifted_exponent(t.order, m));
  return static_cast<int>(best);
}

bool is_minimal(const PseudoPolynomial& p) {
  if (p.empty()) throw InvalidInput("minimality of an empty pseudo-polynomial");
  const std::int64_t m = lcm_of_orders(p);
  std::int64_t g = m;
  for (const Term& t : p.terms()) g = std::gcd(g, lifted_exponent(t.order, m));
  return g == 1;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string to_string(const PseudoPolynomial& p, char var) {
  if (p.empty()) return "0";
  std::string out;
  bool first = true;
  for (const Term& t : p.terms()) {
    double c = t.coeff;
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    c = std::fabs(c);
    first = false;
    if (t.order.is_zero()) {
      out += format_double(c);
      continue;
    }
    if (c != 1.0) out += format_double(c) + "*";
    out += var;
    if (t.order == RationalOrder(1)) continue;
    if (t.order.is_integer())
      out += "^" + t.order.to_string();
    else
      out += "^(" + t.order.to_string() + ")";
  }
  return out;
}

}  // namespace fostab
