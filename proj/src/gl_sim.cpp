#include "fostab/gl_sim.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "fostab/errors.hpp"
#include "fostab/lti.hpp"

namespace fostab {

namespace {

using Rhs = std::function<void(std::size_t k_prev, std::span<const double> x, std::span<double> out)>;

Trajectory integrate(const std::vector<double>& orders, const SimConfig& cfg, const Rhs& rhs, bool starting = true) {
  const std::size_t n = orders.size();
  const std::size_t steps = cfg.steps();
  std::size_t window = steps;
  if (cfg.memory) window = static_cast<std::size_t>(std::floor(*cfg.memory / cfg.h + 1e-9));

  std::map<double, std::vector<double>> coeff_cache;
  std::map<double, std::vector<double>> start_cache;
  std::vector<const std::vector<double>*> coeffs(n);
  std::vector<const std::vector<double>*> start(n);
  std::vector<double> hq(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = coeff_cache.find(orders[i]);
    if (it == coeff_cache.end()) it = coeff_cache.emplace(orders[i], gl_coeffs(orders[i], std::min(window, steps))).first;
    coeffs[i] = &it->second;
    // the boxed impulse starts like t^(q-1), which these weights would distort
    const std::size_t n_start = starting ? std::min(window + 1, steps) : 0;
    auto st = start_cache.find(orders[i]);
    if (st == start_cache.end()) st = start_cache.emplace(orders[i], gl_starting_weights(orders[i], n_start)).first;
    start[i] = &st->second;
    hq[i] = std::pow(cfg.h, orders[i]);
  }

  // Deviations from x0, one contiguous history per component.
  std::vector<std::vector<double>> dev(n, std::vector<double>(steps + 1, 0.0));
  std::vector<double> x(cfg.x0);
  std::vector<double> f(n);

  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.times.push_back(0.0);
  std::size_t last = steps;
  for (std::size_t k = 1; k <= steps; ++k) {
    rhs(k - 1, x, f);
    const std::size_t span = std::min(k, window);
    bool blew_up = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double* c = coeffs[i]->data();
      const double* d = dev[i].data();
      double memory = 0.0;
      for (std::size_t j = 1; j <= span; ++j) memory += c[j] * d[k - j];
      double next;
      if (k < start[i]->size()) {
        // x_1 enters through the starting weight, so step 1 solves for itself
        const double w = (*start[i])[k];
        if (k == 1) {
          next = f[i] * hq[i] / (1.0 + w);
        } else {
          next = f[i] * hq[i] - memory - w * d[1];
        }
      } else {
        next = f[i] * hq[i] - memory;
      }
      dev[i][k] = next;
      x[i] = cfg.x0[i] + next;
      if (!std::isfinite(x[i]) || std::fabs(x[i]) > kDivergenceThreshold) blew_up = true;
    }
    traj.times.push_back(static_cast<double>(k) * cfg.h);
    if (blew_up) {
      traj.diverged = true;
      traj.divergence_step = k;
      last = k;
      break;
    }
  }

  traj.states.resize(static_cast<Eigen::Index>(last + 1), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k <= last; ++k)
      traj.states(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = cfg.x0[i] + dev[i][k];
  return traj;
}

}  // namespace

void SimConfig::validate(std::size_t n) const {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("step h must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidInput("t_end must be positive");
  if (h > t_end) throw InvalidInput("step h exceeds t_end");
  if (memory && !(*memory >= 10.0 * h)) throw InvalidInput("memory window must be at least 10 steps");
  if (x0.size() != n)
    throw InvalidInput("initial state has " + std::to_string(x0.size()) + " entries, expected " + std::to_string(n));
  if (steps() > 50'000'000) throw InvalidInput("too many steps");
}

std::size_t SimConfig::steps() const { return static_cast<std::size_t>(std::floor(t_end / h + 1e-9)); }

std::vector<double> gl_coeffs(double q, std::size_t n) {
  if (!(q > 0.0 && q < 2.0)) throw DomainError("order must lie in (0, 2)");
  std::vector<double> c(n + 1);
  c[0] = 1.0;
  for (std::size_t j = 1; j <= n; ++j) c[j] = (1.0 - (1.0 + q) / static_cast<double>(j)) * c[j - 1];
  return c;
}

std::vector<double> gl_starting_weights(double q, std::size_t n) {
  if (!(q > 0.0 && q < 2.0)) throw DomainError("order must lie in (0, 2)");
  const std::vector<double> c = gl_coeffs(q, n);
  std::vector<double> p(n + 1);
  for (std::size_t m = 0; m <= n; ++m) p[m] = std::pow(static_cast<double>(m), q);
  const double g = std::tgamma(1.0 + q);
  std::vector<double> w(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += c[j] * p[k - j];
    w[k] = g - acc;
  }
  return w;
}

Trajectory simulate(const PolynomialVectorField& field, const SimConfig& cfg) {
  cfg.validate(field.dimension());
  std::vector<double> orders;
  for (const RationalOrder& q : field.orders()) orders.push_back(q.to_double());
  return integrate(orders, cfg, [&](std::size_t, std::span<const double> x, std::span<double> out) {
    field.evaluate(x, out);
  });
}

Trajectory simulate_lti(const PseudoPolynomial& den, InputKind input, SimConfig cfg) {
  const StateSpace ss = to_state_space(den);
  const auto n = static_cast<std::size_t>(ss.a.rows());
  if (cfg.x0.empty()) cfg.x0.assign(n, 0.0);
  cfg.validate(n);
  std::vector<double> orders;
  for (const RationalOrder& q : ss.q) orders.push_back(q.to_double());
  const double h = cfg.h;
  return integrate(orders, cfg, [&](std::size_t k_prev, std::span<const double> x, std::span<double> out) {
    double u = 0.0;
    if (input == InputKind::Step) u = 1.0;
    if (input == InputKind::Impulse && k_prev == 0) u = 1.0 / h;
    for (std::size_t r = 0; r < n; ++r) {
      double acc = ss.b(static_cast<Eigen::Index>(r)) * u;
      for (std::size_t c = 0; c < n; ++c) acc += ss.a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * x[c];
      out[r] = acc;
    }
  }, input != InputKind::Impulse);
}

}  // namespace fostab
