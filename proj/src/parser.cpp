#include "fostab/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "fostab/errors.hpp"

namespace fostab {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Cursor {
 public:
  Cursor(std::string_view text, std::size_t base = 0) : text_(text), base_(base) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  // Character after the next non-space one, without skipping further space.
  char peek_next_raw() const {
    std::size_t p = pos_;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    return p + 1 < text_.size() ? text_[p + 1] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) fail(what);
  }

  bool at_end() { return peek() == '\0'; }

  [[noreturn]] void fail(const std::string& expected) const {
    std::size_t p = pos_;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    throw ParseError(base_ + p, expected);
  }

  std::size_t offset() const { return base_ + pos_; }

  // digits ['.' digits], no sign, no exponent.
  std::string_view plain_number(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    }
    const std::string_view tok = text_.substr(start, pos_ - start);
    if (tok.empty() || tok == ".") {
      pos_ = start;
      fail(what);
    }
    return tok;
  }

  // Decimal with optional exponent; read as a double.
  double real_number(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    plain_number(what);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && is_digit(text_[p])) {
        while (p < text_.size() && is_digit(text_[p])) ++p;
        pos_ = p;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || !std::isfinite(value)) {
      pos_ = start;
      fail(what);
    }
    return value;
  }

  std::int64_t integer(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    std::int64_t value = 0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (start == pos_ || res.ec != std::errc()) {
      pos_ = start;
      fail(what);
    }
    return value;
  }

 private:
  std::string_view text_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- orders

RationalOrder parse_order_body(Cursor& cur, bool allow_fraction_slash, bool parenthesised = false) {
  const std::size_t at = cur.offset();
  bool negative = false;
  if (cur.accept('-'))
    negative = true;
  else
    cur.accept('+');
  RationalOrder q = RationalOrder::from_decimal(cur.plain_number("order (decimal, integer or p/q)"));
  if (allow_fraction_slash && cur.peek() == '/' && (parenthesised || is_digit(cur.peek_next_raw()))) {
    cur.accept('/');
    const std::int64_t den = cur.integer("denominator of order fraction");
    if (den == 0) throw DomainError("zero denominator in order at offset " + std::to_string(at));
    q = RationalOrder(q.num(), q.den() * den);
  }
  if (negative && !q.is_zero()) throw DomainError("negative order at offset " + std::to_string(at));
  return q;
}

RationalOrder parse_order(Cursor& cur) {
  if (cur.accept('(')) {
    RationalOrder q = parse_order_body(cur, true, true);
    cur.expect(')', "')' closing the order");
    return q;
  }
  return parse_order_body(cur, true);
}

// ---------------------------------------------------------------- pseudo-polynomials

bool starts_term(char c) { return is_digit(c) || c == '.' || c == 's'; }

Term parse_term(Cursor& cur, double sign) {
  double coeff = 1.0;
  const char c = cur.peek();
  if (!starts_term(c)) cur.fail("coefficient or 's'");
  bool have_coeff = false;
  if (c != 's') {
    coeff = cur.real_number("coefficient");
    have_coeff = true;
  }
  bool star = false;
  if (have_coeff) star = cur.accept('*');
  if (cur.peek() == 's') {
    cur.accept('s');
    RationalOrder order(1);
    if (cur.accept('^')) order = parse_order(cur);
    return {sign * coeff, order};
  }
  if (star) cur.fail("'s' after '*'");
  return {sign * coeff, RationalOrder(0)};
}

PseudoPolynomial parse_poly(Cursor& cur) {
  std::vector<Term> terms;
  double sign = 1.0;
  if (cur.accept('-'))
    sign = -1.0;
  else
    cur.accept('+');
  terms.push_back(parse_term(cur, sign));
  for (;;) {
    if (cur.accept('+')) {
      terms.push_back(parse_term(cur, 1.0));
    } else if (cur.accept('-')) {
      terms.push_back(parse_term(cur, -1.0));
    } else {
      break;
    }
  }
  return PseudoPolynomial(std::move(terms));
}

PseudoPolynomial parse_side(Cursor& cur) {
  if (cur.accept('(')) {
    PseudoPolynomial p = parse_poly(cur);
    cur.expect(')', "')'");
    return p;
  }
  return parse_poly(cur);
}

// ---------------------------------------------------------------- multivariate expressions

class FieldParser {
 public:
  FieldParser(Cursor& cur, std::size_t n) : cur_(cur), n_(n) {}

  MultiPolynomial expr() {
    MultiPolynomial acc = MultiPolynomial::constant(n_, 0.0);
    bool negate = false;
    if (cur_.accept('-'))
      negate = true;
    else
      cur_.accept('+');
    acc = negate ? -term() : term();
    for (;;) {
      if (cur_.accept('+'))
        acc = acc + term();
      else if (cur_.accept('-'))
        acc = acc - term();
      else
        return acc;
    }
  }

 private:
  static bool starts_primary(char c) { return is_digit(c) || c == '.' || c == 'x' || c == '('; }

  MultiPolynomial term() {
    MultiPolynomial acc = factor();
    for (;;) {
      if (cur_.accept('*')) {
        acc = acc * factor();
      } else if (starts_primary(cur_.peek())) {
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  MultiPolynomial factor() {
    if (cur_.accept('-')) return -factor();
    if (cur_.accept('+')) return factor();
    MultiPolynomial base = primary();
    if (cur_.accept('^')) {
      if (cur_.peek() == '-') cur_.fail("nonnegative integer power");
      const std::int64_t k = cur_.integer("nonnegative integer power");
      if (cur_.peek() == '.') cur_.fail("integer power (fractional powers are not polynomial)");
      if (k > 64) throw DomainError("power " + std::to_string(k) + " too large");
      return base.pow(static_cast<int>(k));
    }
    return base;
  }

  MultiPolynomial primary() {
    const char c = cur_.peek();
    if (c == '(') {
      cur_.accept('(');
      MultiPolynomial e = expr();
      cur_.expect(')', "')'");
      return e;
    }
    if (c == 'x') {
      const std::size_t at = cur_.offset();
      cur_.accept('x');
      if (!is_digit(cur_.peek())) cur_.fail("variable index after 'x'");
      const std::int64_t idx = cur_.integer("variable index");
      if (idx < 1 || static_cast<std::size_t>(idx) > n_)
        throw ParseError(at, "variable x1..x" + std::to_string(n_) + " (got x" + std::to_string(idx) + ")");
      return MultiPolynomial::variable(n_, static_cast<std::size_t>(idx - 1));
    }
    if (is_digit(c) || c == '.') return MultiPolynomial::constant(n_, cur_.real_number("number"));
    cur_.fail("number, variable or '('");
  }

  Cursor& cur_;
  std::size_t n_;
};

MultiPolynomial parse_component(std::string_view text, std::size_t n, std::size_t base = 0) {
  Cursor cur(text, base);
  FieldParser fp(cur, n);
  MultiPolynomial f = fp.expr();
  if (!cur.at_end()) cur.fail("operator or end of expression");
  return f;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

PseudoPolynomial parse_pseudo_polynomial(std::string_view text) {
  Cursor cur(text);
  PseudoPolynomial p = parse_poly(cur);
  if (!cur.at_end()) cur.fail("'+', '-' or end of input");
  return p;
}

TransferFunction parse_transfer_function(std::string_view text) {
  Cursor cur(text);
  PseudoPolynomial first = parse_side(cur);
  TransferFunction tf;
  if (cur.accept('/')) {
    tf.numerator = std::move(first);
    tf.denominator = parse_side(cur);
  } else {
    tf.numerator = PseudoPolynomial({Term{1.0, RationalOrder(0)}});
    tf.denominator = std::move(first);
  }
  if (!cur.at_end()) cur.fail("end of input");
  tf.validate();
  return tf;
}

std::vector<RationalOrder> parse_order_list(std::string_view text) {
  Cursor cur(text);
  std::vector<RationalOrder> orders;
  do {
    orders.push_back(parse_order_body(cur, true));
  } while (cur.accept(','));
  if (!cur.at_end()) cur.fail("',' or end of order list");
  return orders;
}

PolynomialVectorField parse_vector_field(std::string_view order_list, const std::vector<std::string>& components) {
  std::vector<RationalOrder> orders = parse_order_list(order_list);
  if (components.empty()) throw InvalidInput("vector field needs at least one component");
  if (orders.size() != components.size())
    throw InvalidInput("dimension mismatch: " + std::to_string(orders.size()) + " orders for " +
                       std::to_string(components.size()) + " components");
  std::vector<MultiPolynomial> fs;
  for (const std::string& c : components) fs.push_back(parse_component(c, components.size()));
  return PolynomialVectorField(std::move(orders), std::move(fs));
}

PolynomialVectorField parse_field_file(std::string_view text) {
  std::optional<std::string> orders;
  std::map<std::int64_t, std::pair<std::string, std::size_t>> rhs;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = text.substr(line_start, line_end - line_start);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::size_t base = line_start;
    line_start = line_end + 1;
    if (trim(line).empty()) continue;

    if (const auto colon = line.find(':'); colon != std::string_view::npos && trim(line.substr(0, colon)) == "orders") {
      if (orders) throw ParseError(base, "a single 'orders:' line");
      orders = std::string(line.substr(colon + 1));
      continue;
    }
    if (!orders) throw ParseError(base, "'orders:' line before equations");
    Cursor cur(line, base);
    if (!cur.accept('x')) cur.fail("equation of the form xi' = <polynomial>");
    const std::int64_t idx = cur.integer("variable index");
    cur.expect('\'', "\"'\" after the variable");
    cur.expect('=', "'='");
    const std::size_t eq = line.find('=');
    if (rhs.count(idx)) throw ParseError(base, "one equation per variable (x" + std::to_string(idx) + " repeated)");
    rhs[idx] = {std::string(line.substr(eq + 1)), base + eq + 1};
  }
  if (!orders) throw ParseError(0, "'orders:' line");
  const std::size_t n = rhs.size();
  std::int64_t expect_idx = 1;
  for (const auto& [idx, _] : rhs) {
    if (idx != expect_idx) throw InvalidInput("equations must define x1..x" + std::to_string(n) + " exactly once");
    ++expect_idx;
  }
  std::vector<RationalOrder> qs = parse_order_list(*orders);
  if (qs.size() != n)
    throw InvalidInput("dimension mismatch: " + std::to_string(qs.size()) + " orders for " + std::to_string(n) +
                       " equations");
  std::vector<MultiPolynomial> fs;
  for (const auto& [idx, body] : rhs) fs.push_back(parse_component(body.first, n, body.second));
  return PolynomialVectorField(std::move(qs), std::move(fs));
}

void TransferFunction::validate() const {
  if (denominator.empty()) throw DomainError("transfer function denominator is zero");
  for (const PseudoPolynomial* p : {&numerator, &denominator})
    for (const Term& t : p->terms())
      if (t.order.is_negative()) throw DomainError("negative order in transfer function");
}

}  // namespace fostab
