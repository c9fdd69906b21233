#include "fostab/lti.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fostab/errors.hpp"
#include "fostab/roots.hpp"

namespace fostab {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt(cplx v) {
  std::string s = fmt(v.real());
  s += v.imag() < 0 ? " - " : " + ";
  s += fmt(std::fabs(v.imag())) + "j";
  return s;
}

void sort_desc(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
}

}  // namespace

const char* to_string(Sector s) {
  switch (s) {
    case Sector::Unstable: return "UNSTABLE";
    case Sector::Oscillatory: return "OSCILLATORY";
    case Sector::Stable: return "STABLE";
    case Sector::NonPhysical: return "NONPHYSICAL";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "STABLE";
    case Verdict::Oscillatory: return "OSCILLATORY";
    case Verdict::Unstable: return "UNSTABLE";
  }
  return "?";
}

std::vector<ClassifiedRoot> classify_roots(std::span<const std::complex<double>> roots, int m) {
  if (m < 1) throw InvalidInput("classification needs m >= 1");
  const double edge_osc = kPi / (2.0 * m);
  const double edge_sheet = kPi / m;
  std::vector<ClassifiedRoot> out;
  out.reserve(roots.size());
  for (const cplx& w : roots) {
    ClassifiedRoot r;
    r.w = w;
    if (std::abs(w) <= 1e-12) {
      r.abs_arg = 0.0;
      r.sector = Sector::Unstable;
      r.s_pole = cplx(0.0, 0.0);
      out.push_back(r);
      continue;
    }
    r.abs_arg = std::fabs(std::arg(w));
    const double phi = r.abs_arg;
    if (phi >= edge_sheet - kArgTol)
      r.sector = Sector::NonPhysical;
    else if (phi < edge_osc - kArgTol)
      r.sector = Sector::Unstable;
    else if (std::fabs(phi - edge_osc) <= kArgTol)
      r.sector = Sector::Oscillatory;
    else
      r.sector = Sector::Stable;
    if (r.sector != Sector::NonPhysical) r.s_pole = std::polar(std::pow(std::abs(w), m), m * std::arg(w));
    out.push_back(r);
  }
  return out;
}

StabilityReport analyze(const TransferFunction& tf) {
  tf.validate();
  const WPolynomial lifted = to_w_polynomial(tf.denominator);
  StabilityReport report;
  report.m = lifted.m();
  report.fdeg = lifted.degree();
  if (report.fdeg == 0) {
    report.notes.push_back("denominator is constant: no poles");
    return report;
  }
  const std::vector<cplx> roots = find_roots(lifted);
  report.roots = classify_roots(roots, report.m);

  bool unstable = false;
  bool oscillatory = false;
  bool physical = false;
  const double edge_osc = kPi / (2.0 * report.m);
  const double edge_sheet = kPi / report.m;
  for (const ClassifiedRoot& r : report.roots) {
    if (std::abs(r.w) <= 1e-12) {
      report.notes.push_back("root at w = 0 (pole at s = 0): the system cannot be stable");
    } else if (std::fabs(r.abs_arg - edge_osc) <= kArgTol) {
      report.notes.push_back("root " + fmt(r.w) + " lies on the oscillation boundary |arg w| = pi/2m");
    } else if (std::fabs(r.abs_arg - edge_sheet) <= kArgTol) {
      report.notes.push_back("root " + fmt(r.w) + " lies on the principal-sheet edge |arg w| = pi/m");
    }
    unstable |= r.sector == Sector::Unstable;
    oscillatory |= r.sector == Sector::Oscillatory;
    physical |= r.sector != Sector::NonPhysical;
  }
  report.verdict = unstable ? Verdict::Unstable : oscillatory ? Verdict::Oscillatory : Verdict::Stable;
  if (!physical) report.notes.push_back("no roots on the principal sheet: no physical poles, system is stable");

  for (const auto& cluster : root_clusters(roots))
    report.notes.push_back("repeated root near " + fmt(roots[cluster.front()]) + " with multiplicity " +
                           std::to_string(cluster.size()));

  if (!tf.numerator.empty()) {
    double num_scale = 0.0;
    for (const Term& t : tf.numerator.terms()) num_scale = std::max(num_scale, std::fabs(t.coeff));
    for (const ClassifiedRoot& r : report.roots) {
      if (!r.s_pole) continue;
      double bound = 0.0;
      for (const Term& t : tf.numerator.terms())
        bound += std::fabs(t.coeff) * std::pow(std::abs(*r.s_pole), t.order.to_double());
      if (bound > 0.0 && std::abs(tf.numerator.evaluate(*r.s_pole)) <= 1e-8 * bound)
        report.notes.push_back("numerator vanishes at pole s = " + fmt(*r.s_pole) + " (not cancelled)");
    }
  }
  return report;
}

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InvalidInput("eigenvalues of a non-square matrix");
  if (a.rows() == 0) return {};
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success) throw NumericError("eigenvalue iteration did not converge");
  std::vector<cplx> out(solver.eigenvalues().begin(), solver.eigenvalues().end());
  sort_desc(out);
  return out;
}

bool matrix_sector_test(const Eigen::MatrixXd& a, double delta) {
  if (a.rows() != a.cols()) throw InvalidInput("sector test needs a square matrix");
  if (!(delta > 0.0 && delta <= kPi / 2.0)) throw DomainError("sector angle must lie in (0, pi/2]");
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd block(2 * n, 2 * n);
  const double c = std::cos(delta), s = std::sin(delta);
  block << a * c, -a * s, a * s, a * c;
  for (const cplx& l : eigenvalues(block))
    if (!(l.real() < 0.0)) return false;
  return true;
}

EigTestReport commensurate_eig_test(const Eigen::MatrixXd& a, double q) {
  if (!(q > 0.0 && q < 2.0)) throw DomainError("commensurate order must lie in (0, 2)");
  EigTestReport rep;
  rep.eigenvalues = eigenvalues(a);
  const double edge = q * kPi / 2.0;
  rep.stable = true;
  for (const cplx& l : rep.eigenvalues) {
    const double phi = std::fabs(std::arg(l));
    rep.abs_args.push_back(phi);
    if (std::fabs(phi - edge) <= kArgTol) {
      rep.marginal = true;
      rep.stable = false;
      rep.notes.push_back("eigenvalue " + fmt(l) + " on the boundary |arg| = q pi/2: OSCILLATORY");
    } else if (phi < edge) {
      rep.stable = false;
    }
  }
  return rep;
}

EigTestReport commensurate_eig_test(const Eigen::MatrixXd& a, std::span<const RationalOrder> q) {
  if (q.empty() || static_cast<Eigen::Index>(q.size()) != a.rows())
    throw InvalidInput("order vector length must match the matrix size");
  const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
  EigTestReport rep = commensurate_eig_test(a, hi->to_double());
  if (*lo != *hi)
    rep.notes.push_back("orders are not commensurate; eigenvalue test evaluated at the largest order " +
                        hi->to_string() + " and cannot decide stability on its own");
  return rep;
}

void ModalTerm::validate() const {
  if (!(q > 0.0 && q < 2.0)) throw DomainError("modal term order must lie in (0, 2)");
  if (k < 1) throw DomainError("modal term power must be >= 1");
}

ModalCheck modal_stable(std::span<const ModalTerm> terms) {
  ModalCheck out{true, false};
  for (const ModalTerm& t : terms) {
    t.validate();
    const double phi = std::fabs(std::arg(t.lambda));
    const double edge = kPi * (1.0 - t.q / 2.0);
    if (std::fabs(phi - edge) <= kArgTol) {
      out.marginal = true;
      out.stable = false;
    } else if (phi >= edge) {
      out.stable = false;
    }
  }
  return out;
}

StateSpace to_state_space(const PseudoPolynomial& den) {
  if (den.size() < 2) throw InvalidInput("state-space conversion needs at least two terms");
  if (!den.trailing().order.is_zero())
    throw InvalidInput("unsupported form: state-space conversion needs a constant term (order 0)");
  std::vector<Term> asc(den.terms().rbegin(), den.terms().rend());
  const std::size_t n = asc.size() - 1;
  const double an = asc.back().coeff;
  StateSpace ss;
  ss.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i + 1 < n; ++i) ss.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    ss.a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(i)) = -asc[i].coeff / an;
  ss.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  ss.b(static_cast<Eigen::Index>(n - 1)) = 1.0 / an;
  ss.c = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n));
  ss.c(0) = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const RationalOrder step = asc[i].order - asc[i - 1].order;
    if (step <= RationalOrder(0) || step >= RationalOrder(2))
      throw DomainError("order increment " + step.to_string() + " outside (0, 2); companion form unavailable");
    ss.q.push_back(step);
  }
  return ss;
}

Eigen::Index numeric_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double tol = static_cast<double>(std::max(m.rows(), m.cols())) * sv(0) * 1e-12;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return rank;
}

bool controllable(const StateSpace& ss) {
  const Eigen::Index n = ss.a.rows();
  if (ss.a.cols() != n || ss.b.size() != n) throw InvalidInput("inconsistent state-space dimensions");
  Eigen::MatrixXd ctrb(n, n);
  Eigen::VectorXd col = ss.b;
  for (Eigen::Index i = 0; i < n; ++i) {
    ctrb.col(i) = col;
    col = ss.a * col;
  }
  return numeric_rank(ctrb) == n;
}

bool observable(const StateSpace& ss) {
  const Eigen::Index n = ss.a.rows();
  if (ss.a.cols() != n || ss.c.size() != n) throw InvalidInput("inconsistent state-space dimensions");
  Eigen::MatrixXd obsv(n, n);
  Eigen::RowVectorXd row = ss.c;
  for (Eigen::Index i = 0; i < n; ++i) {
    obsv.row(i) = row;
    row = row * ss.a;
  }
  return numeric_rank(obsv) == n;
}

std::optional<double> final_value(const TransferFunction& tf) {
  tf.validate();
  if (tf.numerator.empty()) return 0.0;
  const Term& num = tf.numerator.trailing();
  const Term& den = tf.denominator.trailing();
  const RationalOrder exponent = num.order + RationalOrder(1) - den.order;
  if (exponent > RationalOrder(0)) return 0.0;
  if (exponent.is_zero()) return num.coeff / den.coeff;
  return std::nullopt;
}

}  // namespace fostab
