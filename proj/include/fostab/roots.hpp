#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fostab/pseudo_polynomial.hpp"

namespace fostab {

/// All roots (with multiplicity) of the polynomial sum coeffs[i] * w^i.
///
/// Aberth-Ehrlich simultaneous iteration on the monic polynomial, started
/// from a perturbed circle of radius |a0/aN|^(1/N), followed by one Newton
/// polish per root. Exact zero roots are split off first. Real coefficients
/// give a conjugate-closed result. Roots come back sorted by descending real
/// part, then descending imaginary part.
///
/// Throws InvalidInput for degree 0 and NumericError when some root's
/// backward error |P(w)| / sum |a_i| |w|^i stays above 1e-12.
std::vector<std::complex<double>> find_roots(std::span<const double> coeffs);

std::vector<std::complex<double>> find_roots(const WPolynomial& p);

/// Backward error |P(w)| / sum |a_i| |w|^i of a candidate root.
double backward_error(std::span<const double> coeffs, std::complex<double> w);

/// Groups of roots closer than 1e-8 * max(1, max |root|) to each other.
/// Only groups with two or more members are returned.
std::vector<std::vector<std::size_t>> root_clusters(std::span<const std::complex<double>> roots);

}  // namespace fostab
