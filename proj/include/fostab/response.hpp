#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fostab/lti.hpp"
#include "fostab/pseudo_polynomial.hpp"

namespace fostab {

/// Truncation control for the Mittag-Leffler response series.
struct SeriesBudget {
  int max_outer = 60;
  double rel_tol = 1e-10;
  double cancellation_cap = 1e12;

  void validate() const;
};

/// Which input the series represents. Impulse and ZeroInput use
///   nu = alpha_n + sum_j (alpha_{n-1} - alpha_j) k_j
/// (ZeroInput is the homogeneous-form series written with that nu); Step
/// adds 1 to nu, i.e. integrates the impulse response once.
enum class ResponseVariant { Impulse, Step, ZeroInput };

const char* to_string(ResponseVariant v);

struct ResponsePoint {
  double t = 0.0;
  double value = 0.0;
  bool converged = false;
  bool gamma_pole = false;  // some 1/Gamma factor hit a pole (term set to zero)
  double error = 0.0;       // estimated rounding error of value
};

/// Multinomial Mittag-Leffler series for a_n D^{alpha_n} y + ... + a_0 D^{alpha_0} y = u:
///
///   y(t) = 1/a_n sum_m (-1)^m/m! sum_{k_0+..+k_{n-2}=m} (m; k) prod (a_i/a_n)^{k_i}
///          E_m(t, -a_{n-1}/a_n; alpha_n - alpha_{n-1}, nu(k))
///
/// Needs at least two terms and t > 0. Points that hit the budget or lose
/// precision are returned with converged = false instead of throwing.
std::vector<ResponsePoint> general_fode_response(const PseudoPolynomial& den, std::span<const double> t_grid,
                                                 const SeriesBudget& budget = {},
                                                 ResponseVariant variant = ResponseVariant::Impulse);

/// Single-sum form for a_2 s^{alpha_2} + a_1 s^{alpha_1} + a_0:
///
///   y(t) = 1/a_2 sum_k (-1)^k/k! (a_0/a_2)^k E_k(t, -a_1/a_2; alpha_2 - alpha_1, alpha_2 + alpha_1 k)
std::vector<ResponsePoint> fode3_response(const PseudoPolynomial& den, std::span<const double> t_grid,
                                          const SeriesBudget& budget = {},
                                          ResponseVariant variant = ResponseVariant::Impulse);

/// Impulse response of (b1 s^rho + b0) / (a2 s^alpha + a1 s^beta + a0) as
/// the sum of two single series: the b1 part is expanded in powers of a1,
/// the b0 part in powers of a0.
struct ClosedLoopShape {
  double b1 = 0.0, rho = 1.0, b0 = 0.0;
  double a2 = 1.0, alpha = 1.0, a1 = 0.0, beta = 0.5, a0 = 0.0;

  /// (12.46 s + 64.47) / (39.69 s^1.25 + 12.46 s + 65.068)
  static ClosedLoopShape heater_pd_loop();
};

std::vector<ResponsePoint> closed_loop_response(const ClosedLoopShape& shape, std::span<const double> t_grid,
                                                const SeriesBudget& budget = {});

std::vector<ResponsePoint> closed_loop_response_ex6(std::span<const double> t_grid, const SeriesBudget& budget = {});

/// Power of t in front of each partial-fraction term.
///   Standard: A t^(alpha-1) E_{alpha,alpha}(-lambda t^alpha), the inverse
///             transform of A/(s^alpha + lambda); equals A E_0(t, -lambda; alpha, alpha).
///   Literal:  A t^alpha E_{alpha,alpha}(-lambda t^alpha), kept for comparison.
enum class PowerConvention { Standard, Literal };

/// K0 sum_i A_i t^p E_{alpha,alpha}(-lambda_i t^alpha) over simple modal
/// terms sharing one order alpha.
std::vector<std::complex<double>> commensurate_response(std::span<const ModalTerm> modal, double k0,
                                                        std::span<const double> t_grid,
                                                        PowerConvention convention = PowerConvention::Standard);

}  // namespace fostab
