#include "fostab/mittag_leffler.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "compensated_sum.hpp"
#include "fostab/errors.hpp"

namespace fostab {

namespace {

constexpr unsigned kMaxDerivative = 256;
constexpr double kStopRatio = 1e-16;
constexpr int kStopRun = 3;
constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_gamma_pole(double x) {
  if (x > 0.0) return false;
  const double r = std::round(x);
  return std::fabs(x - r) <= 1e-12 * std::max(1.0, std::fabs(x));
}

// Sign of Gamma(x) for x not a pole.
double gamma_sign(double x) {
  if (x > 0.0) return 1.0;
  return (static_cast<long long>(std::floor(x)) % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

const char* to_string(SeriesStatus s) {
  switch (s) {
    case SeriesStatus::Ok: return "ok";
    case SeriesStatus::PrecisionLoss: return "precision-loss";
    case SeriesStatus::NotConverged: return "not-converged";
    case SeriesStatus::OutOfRange: return "out-of-range";
  }
  return "unknown";
}

void MLParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("Mittag-Leffler mu must be positive");
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("Mittag-Leffler nu must be positive");
}

double reciprocal_gamma(double x) {
  if (is_gamma_pole(x)) return 0.0;
  if (x < 170.0) return 1.0 / std::tgamma(x);
  return std::exp(-std::lgamma(x));
}

SeriesValue ml_series(double mu, double nu, unsigned k, std::complex<double> z, const SeriesOptions& opts) {
  SeriesValue out;
  if (!(std::abs(z) <= opts.z_max)) {
    out.status = SeriesStatus::OutOfRange;
    out.value = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    return out;
  }

  const double abs_z = std::abs(z);
  const double log_abs_z = abs_z > 0.0 ? std::log(abs_z) : -std::numeric_limits<double>::infinity();
  const bool real_z = z.imag() == 0.0;
  const double arg_z = std::arg(z);

  detail::CompensatedSum re;
  detail::CompensatedSum im;

  // (i+k)!/i!, kept both as a double (while finite) and as a logarithm.
  double log_fact = std::lgamma(static_cast<double>(k) + 1.0);
  double fact = std::exp(log_fact);
  if (k <= 20) {
    fact = 1.0;
    for (unsigned j = 2; j <= k; ++j) fact *= j;
  }
  bool fact_finite = std::isfinite(fact) && fact < 1e300;

  std::complex<double> zpow = 1.0;
  bool zpow_finite = true;
  double prev_mag = std::numeric_limits<double>::infinity();
  int small_run = 0;

  for (int i = 0; i < opts.max_terms; ++i) {
    if (i > 0) {
      const double ratio = static_cast<double>(i + static_cast<int>(k)) / static_cast<double>(i);
      log_fact += std::log(ratio);
      if (fact_finite) {
        fact *= ratio;
        fact_finite = fact < 1e300;
      }
      if (zpow_finite) {
        zpow *= z;
        zpow_finite = std::abs(zpow) < 1e300;
      }
    }
    const double g = mu * i + mu * k + nu;
    std::complex<double> term = 0.0;
    if (is_gamma_pole(g)) {
      out.gamma_pole = true;
    } else if (fact_finite && zpow_finite && g < 170.0) {
      term = zpow * (fact / std::tgamma(g));
    } else {
      const double log_mag = (i == 0 ? 0.0 : i * log_abs_z) + log_fact - std::lgamma(g);
      const double mag = gamma_sign(g) * std::exp(log_mag);
      if (real_z) {
        term = (z.real() < 0.0 && (i % 2 == 1)) ? -mag : mag;
      } else {
        term = std::polar(mag, i * arg_z);
      }
    }
    if (!std::isfinite(term.real()) || !std::isfinite(term.imag())) {
      out.status = SeriesStatus::PrecisionLoss;
      out.terms = i + 1;
      out.max_term = std::numeric_limits<double>::infinity();
      out.value = {re.value(), im.value()};
      return out;
    }
    re.add(term.real());
    im.add(term.imag());
    const double mag = std::abs(term);
    out.max_term = std::max(out.max_term, mag);
    out.z_sensitivity += i * mag;
    double ulps = 3.0 + i + std::fabs(g) * std::max(1.0, std::fabs(std::log(std::fabs(g))));
    if (!(fact_finite && zpow_finite && g < 170.0)) ulps += std::fabs(std::log(std::max(mag, 1e-300)));
    out.rounding += kEps * ulps * mag;
    const double partial = std::abs(std::complex<double>(re.value(), im.value()));

    const bool past_peak = mag <= prev_mag && g > 2.0;
    if (past_peak && mag <= kStopRatio * partial)
      ++small_run;
    else
      small_run = 0;
    prev_mag = mag;

    if (small_run >= kStopRun) {
      out.terms = i + 1;
      out.value = {re.value(), im.value()};
      if (out.max_term > opts.cancellation_cap * std::max(std::abs(out.value), 1.0))
        out.status = SeriesStatus::PrecisionLoss;
      return out;
    }
  }
  out.terms = opts.max_terms;
  out.value = {re.value(), im.value()};
  out.status = SeriesStatus::NotConverged;
  return out;
}

namespace {

std::complex<double> unwrap(const SeriesValue& v, const char* what) {
  switch (v.status) {
    case SeriesStatus::Ok: return v.value;
    case SeriesStatus::OutOfRange:
      throw DomainError(std::string(what) + ": |z| exceeds " + std::to_string(kMlZMax) +
                        "; series evaluation refused");
    case SeriesStatus::PrecisionLoss:
      throw PrecisionLoss(std::string(what) + ": catastrophic cancellation (largest term " +
                          std::to_string(v.max_term) + ")");
    case SeriesStatus::NotConverged:
      throw NumericError(std::string(what) + ": series did not converge within " + std::to_string(v.terms) +
                         " terms");
  }
  throw NumericError(what);
}

}  // namespace

std::complex<double> ml(const MLParams& params, std::complex<double> z) { return ml_deriv(params, 0, z); }

std::complex<double> ml_deriv(const MLParams& params, unsigned k, std::complex<double> z) {
  params.validate();
  if (k > kMaxDerivative) throw DomainError("derivative order above " + std::to_string(kMaxDerivative));
  return unwrap(ml_series(params.mu, params.nu, k, z), "Mittag-Leffler");
}

SeriesValue podlubny_ek_series(unsigned k, double t, double y, double mu, double nu, const SeriesOptions& opts) {
  const double z = y * std::pow(t, mu);
  SeriesValue v = ml_series(mu, nu, k, z, opts);
  const double exponent = mu * k + nu - 1.0;
  const double prefactor = std::pow(t, exponent);
  const double log_t = std::fabs(std::log(t));
  // z = y t^mu carries about (2 + mu |log t|) ulps, the prefactor about
  // (1 + |exponent log t|) ulps.
  const double z_ulps = 2.0 + mu * log_t;
  v.rounding = prefactor * (v.rounding + kEps * z_ulps * v.z_sensitivity) +
               kEps * (1.0 + (std::fabs(exponent) + 1.0) * log_t) * std::abs(v.value) * prefactor;
  v.value *= prefactor;
  v.max_term *= prefactor;
  v.z_sensitivity *= prefactor;
  return v;
}

double podlubny_ek(unsigned k, double t, double y, double mu, double nu) {
  if (!(t > 0.0)) throw DomainError("E_k requires t > 0");
  if (!(mu > 0.0)) throw DomainError("E_k requires mu > 0");
  if (k > kMaxDerivative) throw DomainError("derivative order above " + std::to_string(kMaxDerivative));
  const double z = y * std::pow(t, mu);
  const SeriesValue v = ml_series(mu, nu, k, z);
  return unwrap(v, "E_k").real() * std::pow(t, mu * k + nu - 1.0);
}

}  // namespace fostab
