#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fostab/pseudo_polynomial.hpp"
#include "fostab/vector_field.hpp"

namespace fostab {

struct Equilibrium {
  Eigen::VectorXd x_star;
  double residual = 0.0;  // max |f_i(x*)|
};

struct EquilibriumSearch {
  std::vector<Equilibrium> equilibria;  // deduplicated, lexicographic order
  std::vector<std::string> diagnostics;  // seeds that failed to converge
};

/// Damped Newton from each seed using the exact Jacobian, refined to full
/// double precision once the residual is below 1e-9 (1 + field scale).
/// Points closer than 1e-6 are merged.
EquilibriumSearch find_equilibria(const PolynomialVectorField& field, std::span<const Eigen::VectorXd> seeds);

Eigen::MatrixXd jacobian_at(const PolynomialVectorField& field, const Eigen::VectorXd& x);

/// det(diag(lambda^{m q_i}) - J) with m the LCM of the order denominators,
/// so lambda = s^(1/m) and gamma = 1/m.
struct IncommensurateCharPoly {
  RationalOrder gamma;
  int m = 1;
  WPolynomial poly;
};

/// Cofactor expansion over dense coefficient vectors; n <= 6 and
/// degree m * sum(q_i) <= 200.
IncommensurateCharPoly char_poly_incommensurate(const Eigen::MatrixXd& j, std::span<const RationalOrder> q);

enum class PointVerdict { Stable, Unstable, Marginal };

const char* to_string(PointVerdict v);

struct NonlinearStabilityReport {
  bool commensurate = false;
  int m = 1;
  double threshold = 0.0;  // q pi/2 (commensurate) or gamma pi/2
  std::optional<IncommensurateCharPoly> char_poly;
  std::vector<std::complex<double>> roots;  // eigenvalues of J, or char-poly roots
  std::vector<double> abs_args;
  PointVerdict verdict = PointVerdict::Stable;
  std::vector<std::string> notes;
};

/// Equal orders: eigenvalues of J against q pi/2. Otherwise the roots of
/// the incommensurate characteristic polynomial against gamma pi/2.
NonlinearStabilityReport nonlinear_stability(const Eigen::MatrixXd& j, std::span<const RationalOrder> q);

/// Smallest commensurate order that keeps every unstable eigenvalue
/// alpha +- j beta (alpha > 0) in the unstable region:
/// max (2/pi) atan(|beta| / alpha). DomainError when nothing is unstable.
double min_chaos_order(std::span<const std::complex<double>> eigenvalues);
double min_chaos_order(const Eigen::MatrixXd& j);

}  // namespace fostab
