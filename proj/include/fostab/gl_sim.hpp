#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "fostab/pseudo_polynomial.hpp"
#include "fostab/vector_field.hpp"

namespace fostab {

/// Any state component above this magnitude stops the run.
inline constexpr double kDivergenceThreshold = 1e8;

struct SimConfig {
  double h = 1e-3;
  double t_end = 1.0;
  std::optional<double> memory;  // short-memory window length in seconds
  std::vector<double> x0;

  /// Throws InvalidInput unless 0 < h <= t_end, memory >= 10 h and x0 has n entries.
  void validate(std::size_t n) const;
  std::size_t steps() const;
};

struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd states;  // one row per time point
  bool diverged = false;
  std::optional<std::size_t> divergence_step;
};

/// (-1)^j binom(q, j) for j = 0..n via c_j = (1 - (1+q)/j) c_{j-1}.
std::vector<double> gl_coeffs(double q, std::size_t n);
// Starting weights making the difference operator exact on t^q at every step.
std::vector<double> gl_starting_weights(double q, std::size_t n);

/// Explicit Grunwald-Letnikov integration of D^{q_i} x_i = f_i(x):
///
///   x_i(t_k) = x0_i + f_i(x(t_{k-1})) h^{q_i} - sum_{j=1}^{J_k} c_j (x_i(t_{k-j}) - x0_i)
///
/// with J_k = k, or floor(memory/h) under short memory. The memory sum acts
/// on the deviation from x0 so constant initial states are equilibria of the
/// difference operator; for x0 = 0 this is the plain GL recursion.
Trajectory simulate(const PolynomialVectorField& field, const SimConfig& cfg);

enum class InputKind { Zero, Impulse, Step };

/// GL simulation of the companion state-space form of den. The impulse is a
/// single pulse of height 1/h at t = 0. Empty x0 means zero initial state.
Trajectory simulate_lti(const PseudoPolynomial& den, InputKind input, SimConfig cfg);

}  // namespace fostab
