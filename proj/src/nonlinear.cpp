#include "fostab/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fostab/errors.hpp"
#include "fostab/lti.hpp"
#include "fostab/roots.hpp"

namespace fostab {

namespace {

using Poly = std::vector<double>;
constexpr double kPi = std::numbers::pi;
constexpr int kMaxNewton = 100;
constexpr int kMaxCharDegree = 200;
constexpr std::size_t kMaxCofactorDim = 6;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

void poly_axpy(Poly& acc, double s, const Poly& p) {
  if (acc.size() < p.size()) acc.resize(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) acc[i] += s * p[i];
}

// Laplace expansion along row `row` over the columns left in `mask`.
Poly cofactor_det(const std::vector<std::vector<Poly>>& m, std::size_t row, unsigned mask) {
  const std::size_t n = m.size();
  if (row == n) return {1.0};
  Poly acc{0.0};
  int sign = 1;
  for (std::size_t c = 0; c < n; ++c) {
    if (!(mask & (1u << c))) continue;
    const Poly& entry = m[row][c];
    const bool zero = std::all_of(entry.begin(), entry.end(), [](double v) { return v == 0.0; });
    if (!zero) poly_axpy(acc, sign, poly_mul(entry, cofactor_det(m, row + 1, mask & ~(1u << c))));
    sign = -sign;
  }
  return acc;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

std::string fmt_point(const Eigen::VectorXd& x) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x(i));
    s += buf;
  }
  return s + ")";
}

}  // namespace

const char* to_string(PointVerdict v) {
  switch (v) {
    case PointVerdict::Stable: return "STABLE";
    case PointVerdict::Unstable: return "UNSTABLE";
    case PointVerdict::Marginal: return "MARGINAL";
  }
  return "?";
}

Eigen::MatrixXd jacobian_at(const PolynomialVectorField& field, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != field.dimension()) throw InvalidInput("point has the wrong dimension");
  return field.jacobian(x);
}

EquilibriumSearch find_equilibria(const PolynomialVectorField& field, std::span<const Eigen::VectorXd> seeds) {
  if (seeds.empty()) throw InvalidInput("equilibrium search needs at least one seed");
  const double tol = 1e-9 * (1.0 + field.scale());
  EquilibriumSearch out;
  std::vector<Eigen::VectorXd> found;

  for (const Eigen::VectorXd& seed : seeds) {
    if (static_cast<std::size_t>(seed.size()) != field.dimension()) throw InvalidInput("seed has the wrong dimension");
    Eigen::VectorXd x = seed;
    Eigen::VectorXd f = field.evaluate(x);
    bool ok = false;
    for (int it = 0; it < kMaxNewton; ++it) {
      if (max_abs(f) <= tol) {
        ok = true;
        break;
      }
      const Eigen::VectorXd dx = field.jacobian(x).fullPivLu().solve(-f);
      if (!dx.allFinite()) break;
      double step = 1.0;
      Eigen::VectorXd trial = x + dx;
      Eigen::VectorXd f_trial = field.evaluate(trial);
      while (f_trial.norm() >= f.norm() && step > 1e-4) {
        step *= 0.5;
        trial = x + step * dx;
        f_trial = field.evaluate(trial);
      }
      x = trial;
      f = f_trial;
      if (!x.allFinite()) break;
    }
    if (!ok) {
      out.diagnostics.push_back("seed " + fmt_point(seed) + " did not converge (residual " +
                                std::to_string(max_abs(f)) + ")");
      continue;
    }
    // Polish to full precision; keep a step only while it helps.
    for (int it = 0; it < 8; ++it) {
      const Eigen::VectorXd dx = field.jacobian(x).fullPivLu().solve(-f);
      if (!dx.allFinite()) break;
      const Eigen::VectorXd trial = x + dx;
      const Eigen::VectorXd f_trial = field.evaluate(trial);
      if (max_abs(f_trial) > max_abs(f)) break;
      const bool stalled = (trial - x).cwiseAbs().maxCoeff() == 0.0;
      x = trial;
      f = f_trial;
      if (stalled || max_abs(f) == 0.0) break;
    }
    const bool duplicate = std::any_of(found.begin(), found.end(),
                                       [&](const Eigen::VectorXd& p) { return (p - x).norm() < 1e-6; });
    if (!duplicate) found.push_back(x);
  }

  std::sort(found.begin(), found.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  for (const Eigen::VectorXd& x : found) out.equilibria.push_back({x, max_abs(field.evaluate(x))});
  return out;
}

IncommensurateCharPoly char_poly_incommensurate(const Eigen::MatrixXd& j, std::span<const RationalOrder> q) {
  const auto n = static_cast<std::size_t>(j.rows());
  if (j.rows() != j.cols()) throw InvalidInput("characteristic polynomial needs a square matrix");
  if (q.size() != n) throw InvalidInput("order vector length must match the matrix size");
  if (n == 0) throw InvalidInput("empty matrix");
  if (n > kMaxCofactorDim) throw InvalidInput("cofactor expansion limited to 6 x 6 matrices");
  for (const RationalOrder& qi : q)
    if (qi <= RationalOrder(0) || qi >= RationalOrder(2)) throw DomainError("order " + qi.to_string() + " outside (0, 2)");

  const std::int64_t m = lcm_of_orders(q);
  std::int64_t degree = 0;
  std::vector<std::size_t> powers;
  for (const RationalOrder& qi : q) {
    powers.push_back(static_cast<std::size_t>(qi.num() * (m / qi.den())));
    degree += static_cast<std::int64_t>(powers.back());
  }
  if (degree > kMaxCharDegree)
    throw InvalidInput("characteristic degree " + std::to_string(degree) + " exceeds " +
                       std::to_string(kMaxCharDegree));

  std::vector<std::vector<Poly>> mat(n, std::vector<Poly>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double a = j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      if (r == c) {
        Poly p(powers[r] + 1, 0.0);
        p[powers[r]] += 1.0;
        p[0] -= a;
        mat[r][c] = std::move(p);
      } else {
        mat[r][c] = {-a};
      }
    }
  }
  Poly det = cofactor_det(mat, 0, (1u << n) - 1);
  det.resize(static_cast<std::size_t>(degree) + 1, 0.0);
  return {RationalOrder(1, m), static_cast<int>(m), WPolynomial(std::move(det), static_cast<int>(m))};
}

NonlinearStabilityReport nonlinear_stability(const Eigen::MatrixXd& j, std::span<const RationalOrder> q) {
  if (q.empty() || static_cast<Eigen::Index>(q.size()) != j.rows())
    throw InvalidInput("order vector length must match the Jacobian size");
  NonlinearStabilityReport rep;
  rep.commensurate = std::all_of(q.begin(), q.end(), [&](const RationalOrder& x) { return x == q.front(); });
  if (rep.commensurate) {
    const RationalOrder& q0 = q.front();
    if (q0 <= RationalOrder(0) || q0 >= RationalOrder(2)) throw DomainError("order outside (0, 2)");
    rep.m = 1;
    rep.threshold = q0.to_double() * kPi / 2.0;
    rep.roots = eigenvalues(j);
  } else {
    rep.char_poly = char_poly_incommensurate(j, q);
    rep.m = rep.char_poly->m;
    rep.threshold = kPi / (2.0 * rep.m);
    rep.roots = find_roots(rep.char_poly->poly);
    rep.notes.push_back("characteristic polynomial built from the Jacobian at the supplied point; "
                        "rounded equilibrium coordinates perturb its low-degree coefficients");
  }
  bool unstable = false, marginal = false;
  for (const auto& l : rep.roots) {
    const double phi = std::fabs(std::arg(l));
    rep.abs_args.push_back(phi);
    if (std::fabs(phi - rep.threshold) <= kArgTol)
      marginal = true;
    else if (phi < rep.threshold)
      unstable = true;
  }
  rep.verdict = unstable ? PointVerdict::Unstable : marginal ? PointVerdict::Marginal : PointVerdict::Stable;
  if (marginal) rep.notes.push_back("root on the boundary |arg| = threshold: reported MARGINAL");
  return rep;
}

double min_chaos_order(std::span<const std::complex<double>> eigs) {
  bool any = false;
  double best = 0.0;
  for (const auto& l : eigs) {
    if (!(l.real() > 0.0)) continue;
    any = true;
    best = std::max(best, 2.0 / kPi * std::atan(std::fabs(l.imag()) / l.real()));
  }
  if (!any) throw DomainError("not applicable: no eigenvalue in the unstable region");
  return best;
}

double min_chaos_order(const Eigen::MatrixXd& j) {
  const std::vector<std::complex<double>> e = eigenvalues(j);
  return min_chaos_order(e);
}

}  // namespace fostab
