#pragma once

#include <complex>

namespace fostab {

/// Series-only evaluation refuses |z| above this bound.
inline constexpr double kMlZMax = 50.0;

/// Two-parameter Mittag-Leffler parameters, mu > 0 and nu > 0.
struct MLParams {
  double mu = 1.0;
  double nu = 1.0;

  void validate() const;
};

enum class SeriesStatus { Ok, PrecisionLoss, NotConverged, OutOfRange };

const char* to_string(SeriesStatus s);

struct SeriesOptions {
  double cancellation_cap = 1e12;
  int max_terms = 10000;
  double z_max = kMlZMax;
};

/// Outcome of a truncated series. `max_term` is the largest term magnitude
/// seen; `gamma_pole` is set when some 1/Gamma factor was evaluated at a
/// nonpositive integer (that term is exactly zero).
///
/// `rounding` estimates the absolute error of `value` from floating-point
/// rounding: each term is perturbed by i ulps through z^i and by about
/// a*psi(a) ulps through Gamma(a), so it is usually far larger than
/// eps * max_term. `z_sensitivity` is sum i |term_i|, the first-order
/// response to a relative perturbation of z.
struct SeriesValue {
  std::complex<double> value;
  SeriesStatus status = SeriesStatus::Ok;
  int terms = 0;
  double max_term = 0.0;
  double rounding = 0.0;
  double z_sensitivity = 0.0;
  bool gamma_pole = false;

  bool ok() const noexcept { return status == SeriesStatus::Ok; }
};

/// k-th derivative series
///
///   sum_i (i+k)!/i! * z^i / Gamma(mu*i + mu*k + nu)
///
/// with compensated summation. Stops once three consecutive terms past the
/// peak are below 1e-16 of the partial sum. Never throws for numerical
/// trouble; the status says what went wrong. nu may be any real here.
SeriesValue ml_series(double mu, double nu, unsigned k, std::complex<double> z, const SeriesOptions& opts = {});

/// E_{mu,nu}(z). Throws DomainError for |z| > kMlZMax, PrecisionLoss when the
/// largest term exceeds 1e12 * max(|result|, 1), NumericError when the series
/// does not settle within 10000 terms.
std::complex<double> ml(const MLParams& params, std::complex<double> z);

/// k-th derivative of E_{mu,nu} at z, k <= 256. ml_deriv(p, 0, z) == ml(p, z).
std::complex<double> ml_deriv(const MLParams& params, unsigned k, std::complex<double> z);

/// Podlubny's E_k(t, y; mu, nu) = t^(mu*k + nu - 1) * E^(k)_{mu,nu}(y t^mu).
/// Requires t > 0 and mu > 0; nu may be any real (terms whose Gamma argument
/// is a nonpositive integer vanish).
double podlubny_ek(unsigned k, double t, double y, double mu, double nu);

/// Non-throwing variant used by the analytic response code.
SeriesValue podlubny_ek_series(unsigned k, double t, double y, double mu, double nu, const SeriesOptions& opts = {});

/// 1/Gamma(x), zero at the poles.
double reciprocal_gamma(double x);

}  // namespace fostab
