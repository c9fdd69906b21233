#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fostab/pseudo_polynomial.hpp"
#include "fostab/transfer_function.hpp"
#include "fostab/vector_field.hpp"

namespace fostab {

// Text grammar (whitespace insensitive):
//
//   poly   := ['+'|'-'] term { ('+'|'-') term }
//   term   := coeff ['*'] 's' ['^' order] | coeff | 's' ['^' order]
//   order  := num ['/' int] | '(' num ['/' int] ')'
//   tf     := side ['/' side]        side := '(' poly ')' | poly
//
// Coefficients are read as binary doubles; orders are read exactly, so
// "2.2" becomes 11/5. Errors report the byte offset of the offending input.

PseudoPolynomial parse_pseudo_polynomial(std::string_view text);

/// "(num)/(den)", "num/(den)" or a bare polynomial, which is taken as the
/// denominator of 1/poly.
TransferFunction parse_transfer_function(std::string_view text);

/// Comma separated orders, each a decimal or p/q.
std::vector<RationalOrder> parse_order_list(std::string_view text);

/// Components are polynomials in x1..xn built from numbers, variables,
/// parentheses, + - * and nonnegative integer powers.
PolynomialVectorField parse_vector_field(std::string_view order_list, const std::vector<std::string>& components);

/// Vector-field file (.fvf):
///
///   # comment
///   orders: 0.8, 1, 0.9
///   x1' = 35*(x2 - x1)
///   x2' = -7*x1 - x1*x3 + 28*x2
///   x3' = x1*x2 - 3*x3
PolynomialVectorField parse_field_file(std::string_view text);

}  // namespace fostab
