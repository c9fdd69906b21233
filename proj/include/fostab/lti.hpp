#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fostab/pseudo_polynomial.hpp"
#include "fostab/transfer_function.hpp"

namespace fostab {

/// Tolerance (radians) used whenever an argument is compared with a sector edge.
inline constexpr double kArgTol = 1e-9;

/// Where a w-plane root sits relative to the principal Riemann sheet.
///   |arg w| <  pi/(2m)            Unstable
///   |arg w| == pi/(2m)            Oscillatory
///   pi/(2m) < |arg w| < pi/m      Stable
///   |arg w| >= pi/m               NonPhysical (not on the principal sheet)
enum class Sector { Unstable, Oscillatory, Stable, NonPhysical };

enum class Verdict { Stable, Oscillatory, Unstable };

const char* to_string(Sector s);
const char* to_string(Verdict v);

struct ClassifiedRoot {
  std::complex<double> w;
  double abs_arg = 0.0;
  Sector sector = Sector::NonPhysical;
  std::optional<std::complex<double>> s_pole;  // w^m, principal sheet only
};

struct StabilityReport {
  int m = 1;
  int fdeg = 0;
  std::vector<ClassifiedRoot> roots;
  Verdict verdict = Verdict::Stable;
  std::vector<std::string> notes;
};

std::vector<ClassifiedRoot> classify_roots(std::span<const std::complex<double>> roots, int m);

/// Lift the denominator to the w-plane, find all FDEG roots and classify
/// them. The verdict concerns the denominator only; no pole-zero
/// cancellation is attempted.
StabilityReport analyze(const TransferFunction& tf);

/// Eigenvalues of a real square matrix, sorted by descending real part then
/// descending imaginary part.
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& a);

/// True iff every eigenvalue of [[A cos d, -A sin d], [A sin d, A cos d]] has
/// a negative real part, i.e. all eigenvalues of A satisfy |arg| > pi/2 + d.
bool matrix_sector_test(const Eigen::MatrixXd& a, double delta);

struct EigTestReport {
  std::vector<std::complex<double>> eigenvalues;
  std::vector<double> abs_args;
  bool stable = false;
  bool marginal = false;
  std::vector<std::string> notes;
};

/// |arg(eig(A))| > q pi/2 for every eigenvalue.
EigTestReport commensurate_eig_test(const Eigen::MatrixXd& a, double q);

/// Per-state orders. When they differ the report carries a caveat and the
/// test is evaluated at the largest order.
EigTestReport commensurate_eig_test(const Eigen::MatrixXd& a, std::span<const RationalOrder> q);

/// One A/(s^q + lambda)^k term of a modal (Laguerre-type) decomposition.
struct ModalTerm {
  double q = 1.0;
  std::complex<double> lambda;
  int k = 1;
  std::complex<double> coeff = 1.0;

  void validate() const;
};

struct ModalCheck {
  bool stable = false;
  bool marginal = false;  // some |arg lambda| within kArgTol of pi(1 - q/2)
};

/// BIBO test: 0 < q < 2 and |arg lambda| < pi (1 - q/2) for every term.
ModalCheck modal_stable(std::span<const ModalTerm> terms);

struct StateSpace {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::RowVectorXd c;
  std::vector<RationalOrder> q;
};

/// Companion form of a_n D^{alpha_n} y + ... + a_0 y = u. Needs a constant
/// term and at least two terms; q_1 = alpha_1, q_i = alpha_i - alpha_{i-1}.
StateSpace to_state_space(const PseudoPolynomial& den);

/// Numeric rank of a matrix with threshold rows * sigma_max * 1e-12.
Eigen::Index numeric_rank(const Eigen::MatrixXd& m);

bool controllable(const StateSpace& ss);
bool observable(const StateSpace& ss);

/// lim_{s->0+} s G(s), or nullopt when it diverges.
std::optional<double> final_value(const TransferFunction& tf);

}  // namespace fostab
