#pragma once

#include "fostab/pseudo_polynomial.hpp"

namespace fostab {

/// G(s) = numerator(s) / denominator(s) with nonnegative rational orders.
struct TransferFunction {
  PseudoPolynomial numerator;
  PseudoPolynomial denominator;

  /// Throws InvalidInput when the denominator is empty or an order is negative.
  void validate() const;
};

}  // namespace fostab
