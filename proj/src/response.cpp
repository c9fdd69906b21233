#include "fostab/response.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "compensated_sum.hpp"
#include "fostab/errors.hpp"
#include "fostab/mittag_leffler.hpp"

namespace fostab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double nu_offset(ResponseVariant v) { return v == ResponseVariant::Step ? 1.0 : 0.0; }

// Tracks one response value through the outer series.
struct OuterSum {
  detail::CompensatedSum total;
  double max_term = 0.0;
  double error = 0.0;
  double prev_group = std::numeric_limits<double>::infinity();
  int small_run = 0;
  bool failed = false;
  bool gamma_pole = false;

  void add(double term) {
    total.add(term);
    max_term = std::max(max_term, std::fabs(term));
  }

  // Returns true once two consecutive decreasing groups fall below rel_tol.
  bool settle(double group, double rel_tol) {
    const double g = std::fabs(group);
    if (g <= prev_group && g <= rel_tol * std::fabs(total.value()))
      ++small_run;
    else
      small_run = 0;
    prev_group = g;
    return small_run >= 2;
  }

  ResponsePoint finish(double t, bool settled, const SeriesBudget& budget) const {
    ResponsePoint p;
    p.t = t;
    p.value = total.value();
    p.gamma_pole = gamma_pole;
    p.error = error;
    // The cap bounds the amplification of rounding error, measured both by
    // the largest term and by the propagated error estimate.
    const double scale = std::max(std::fabs(p.value), 1.0);
    p.converged = settled && !failed && max_term <= budget.cancellation_cap * scale &&
                  error <= budget.cancellation_cap * kEps * scale;
    return p;
  }
};

void for_each_composition(int m, std::size_t parts, std::vector<int>& k, std::size_t pos,
                          const std::function<void(const std::vector<int>&)>& fn) {
  if (pos + 1 == parts) {
    k[pos] = m;
    fn(k);
    return;
  }
  for (int first = m; first >= 0; --first) {
    k[pos] = first;
    for_each_composition(m - first, parts, k, pos + 1, fn);
  }
}

// c * sum_k (-r)^k / k! * E_k(t, y; mu, nu0 + dnu * k)
struct SingleSeries {
  double c, r, y, mu, nu0, dnu;
};

void accumulate_single(OuterSum& acc, const SingleSeries& s, double t, const SeriesBudget& budget, bool& settled) {
  const SeriesOptions opts{budget.cancellation_cap, 10000, kMlZMax};
  settled = false;
  double coef = s.c;  // c (-r)^k / k!
  for (int k = 0; k <= budget.max_outer; ++k) {
    if (k > 0) coef *= -s.r / k;
    const SeriesValue e = podlubny_ek_series(static_cast<unsigned>(k), t, s.y, s.mu, s.nu0 + s.dnu * k, opts);
    acc.gamma_pole |= e.gamma_pole;
    if (!e.ok()) {
      acc.failed = true;
      return;
    }
    const double term = coef * e.value.real();
    acc.add(term);
    acc.max_term = std::max(acc.max_term, std::fabs(coef) * e.max_term);
    acc.error += std::fabs(coef) * e.rounding + kEps * (2.0 + k) * std::fabs(term);
    if (acc.settle(term, budget.rel_tol)) {
      settled = true;
      return;
    }
  }
}

void check_grid(std::span<const double> t_grid) {
  for (double t : t_grid)
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("response times must be positive");
}

}  // namespace

void SeriesBudget::validate() const {
  if (max_outer < 0) throw InvalidInput("max_outer must be nonnegative");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidInput("rel_tol must lie in (0, 1)");
  if (!(cancellation_cap >= 1.0)) throw InvalidInput("cancellation_cap must be >= 1");
}

const char* to_string(ResponseVariant v) {
  switch (v) {
    case ResponseVariant::Impulse: return "impulse";
    case ResponseVariant::Step: return "step";
    case ResponseVariant::ZeroInput: return "zero";
  }
  return "?";
}

std::vector<ResponsePoint> general_fode_response(const PseudoPolynomial& den, std::span<const double> t_grid,
                                                 const SeriesBudget& budget, ResponseVariant variant) {
  budget.validate();
  check_grid(t_grid);
  if (den.size() < 2) throw InvalidInput("general response needs at least two terms");
  for (const Term& t : den.terms())
    if (t.order.is_negative()) throw DomainError("negative order in response denominator");

  const auto& terms = den.terms();
  const double an = terms[0].coeff;
  const RationalOrder alpha_n = terms[0].order;
  const RationalOrder alpha_n1 = terms[1].order;
  const double mu = (alpha_n - alpha_n1).to_double();
  const double y = -terms[1].coeff / an;
  const std::size_t parts = terms.size() - 2;

  // Lower terms: ratio a_i/a_n and the nu increment alpha_{n-1} - alpha_i.
  std::vector<double> log_ratio, sign_neg_ratio;
  std::vector<RationalOrder> dnu;
  for (std::size_t i = 2; i < terms.size(); ++i) {
    const double r = terms[i].coeff / an;
    log_ratio.push_back(std::log(std::fabs(r)));
    sign_neg_ratio.push_back(r > 0 ? -1.0 : 1.0);
    dnu.push_back(alpha_n1 - terms[i].order);
  }

  const SeriesOptions opts{budget.cancellation_cap, 10000, kMlZMax};
  std::vector<ResponsePoint> out;
  out.reserve(t_grid.size());
  std::vector<int> k(parts);
  for (double t : t_grid) {
    OuterSum acc;
    bool settled = false;
    const int last_m = parts == 0 ? 0 : budget.max_outer;
    for (int m = 0; m <= last_m && !acc.failed; ++m) {
      detail::CompensatedSum group;
      std::map<RationalOrder, SeriesValue> cache;
      auto visit = [&](const std::vector<int>& comp) {
        if (acc.failed) return;
        RationalOrder nu_exact = alpha_n;
        double log_mag = 0.0;
        double sign = 1.0;
        for (std::size_t j = 0; j < parts; ++j) {
          nu_exact = nu_exact + dnu[j] * comp[j];
          log_mag += comp[j] * log_ratio[j] - std::lgamma(comp[j] + 1.0);
          if (comp[j] % 2 == 1) sign *= sign_neg_ratio[j];
        }
        auto it = cache.find(nu_exact);
        if (it == cache.end()) {
          const double nu = nu_exact.to_double() + nu_offset(variant);
          it = cache.emplace(nu_exact, podlubny_ek_series(static_cast<unsigned>(m), t, y, mu, nu, opts)).first;
        }
        const SeriesValue& e = it->second;
        acc.gamma_pole |= e.gamma_pole;
        if (!e.ok()) {
          acc.failed = true;
          return;
        }
        const double pref = sign * std::exp(log_mag) / an;
        const double term = pref * e.value.real();
        group.add(term);
        acc.add(term);
        acc.max_term = std::max(acc.max_term, std::fabs(pref) * e.max_term);
        acc.error += std::fabs(pref) * e.rounding + kEps * (2.0 + std::fabs(log_mag)) * std::fabs(term);
      };
      if (parts == 0) {
        visit(k);
      } else {
        for_each_composition(m, parts, k, 0, visit);
      }
      if (acc.failed) break;
      if (parts == 0 || acc.settle(group.value(), budget.rel_tol)) {
        settled = true;
        break;
      }
    }
    out.push_back(acc.finish(t, settled, budget));
  }
  return out;
}

std::vector<ResponsePoint> fode3_response(const PseudoPolynomial& den, std::span<const double> t_grid,
                                          const SeriesBudget& budget, ResponseVariant variant) {
  budget.validate();
  check_grid(t_grid);
  if (den.size() != 3) throw InvalidInput("three-term response needs exactly three terms");
  const auto& terms = den.terms();
  if (!terms[2].order.is_zero()) throw InvalidInput("three-term response needs a constant term");
  if (!(terms[1].order > RationalOrder(0))) throw InvalidInput("middle order must be positive");
  const double a2 = terms[0].coeff, a1 = terms[1].coeff, a0 = terms[2].coeff;
  const double alpha2 = terms[0].order.to_double(), alpha1 = terms[1].order.to_double();
  const SingleSeries s{1.0 / a2, a0 / a2, -a1 / a2, alpha2 - alpha1, alpha2 + nu_offset(variant), alpha1};
  std::vector<ResponsePoint> out;
  for (double t : t_grid) {
    OuterSum acc;
    bool settled = false;
    accumulate_single(acc, s, t, budget, settled);
    out.push_back(acc.finish(t, settled, budget));
  }
  return out;
}

ClosedLoopShape ClosedLoopShape::heater_pd_loop() {
  ClosedLoopShape s;
  s.b1 = 12.46;
  s.rho = 1.0;
  s.b0 = 64.47;
  s.a2 = 39.69;
  s.alpha = 1.25;
  s.a1 = 12.46;
  s.beta = 1.0;
  s.a0 = 65.068;
  return s;
}

std::vector<ResponsePoint> closed_loop_response(const ClosedLoopShape& sh, std::span<const double> t_grid,
                                                const SeriesBudget& budget) {
  budget.validate();
  check_grid(t_grid);
  if (sh.a2 == 0.0) throw InvalidInput("leading denominator coefficient is zero");
  if (!(sh.alpha > sh.beta && sh.beta > 0.0)) throw InvalidInput("closed loop needs alpha > beta > 0");
  // b1 s^rho part, expanded in a1 s^beta.
  const SingleSeries first{sh.b1 / sh.a2, sh.a1 / sh.a2, -sh.a0 / sh.a2, sh.alpha, sh.alpha - sh.rho, -sh.beta};
  // b0 part, expanded in a0.
  const SingleSeries second{sh.b0 / sh.a2, sh.a0 / sh.a2, -sh.a1 / sh.a2, sh.alpha - sh.beta, sh.alpha, sh.beta};
  std::vector<ResponsePoint> out;
  for (double t : t_grid) {
    OuterSum a, b;
    bool settled_a = true, settled_b = true;
    if (sh.b1 != 0.0) accumulate_single(a, first, t, budget, settled_a);
    if (sh.b0 != 0.0) accumulate_single(b, second, t, budget, settled_b);
    const ResponsePoint pa = a.finish(t, settled_a, budget);
    const ResponsePoint pb = b.finish(t, settled_b, budget);
    out.push_back({t, pa.value + pb.value, pa.converged && pb.converged, pa.gamma_pole || pb.gamma_pole,
                   pa.error + pb.error});
  }
  return out;
}

std::vector<ResponsePoint> closed_loop_response_ex6(std::span<const double> t_grid, const SeriesBudget& budget) {
  return closed_loop_response(ClosedLoopShape::heater_pd_loop(), t_grid, budget);
}

std::vector<std::complex<double>> commensurate_response(std::span<const ModalTerm> modal, double k0,
                                                        std::span<const double> t_grid, PowerConvention convention) {
  check_grid(t_grid);
  std::vector<std::complex<double>> out(t_grid.size(), 0.0);
  if (modal.empty()) return out;
  const double alpha = modal.front().q;
  for (const ModalTerm& term : modal) {
    term.validate();
    if (term.k != 1) throw InvalidInput("partial-fraction response needs simple poles (k = 1)");
    if (term.q != alpha) throw InvalidInput("partial-fraction response needs one common order");
  }
  const MLParams params{alpha, alpha};
  const double power = convention == PowerConvention::Standard ? alpha - 1.0 : alpha;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    const double ta = std::pow(t, alpha);
    std::complex<double> acc = 0.0;
    for (const ModalTerm& term : modal) acc += term.coeff * ml(params, -term.lambda * ta);
    out[i] = k0 * std::pow(t, power) * acc;
  }
  return out;
}

}  // namespace fostab
