#include "fostab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fostab/errors.hpp"

namespace fostab {

namespace {

using cplx = std::complex<double>;

constexpr int kMaxIterations = 2000;
constexpr double kBackwardTol = 1e-12;

struct Eval {
  cplx p;
  cplx dp;
};

Eval horner(std::span<const double> c, cplx z) {
  cplx p = c.back();
  cplx dp = 0.0;
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
  }
  return {p, dp};
}

std::string describe(std::span<const double> c) {
  std::string s;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0.0) continue;
    if (!s.empty()) s += " + ";
    s += format_double(c[i]) + "*w^" + std::to_string(i);
  }
  return s;
}

void pair_conjugates(std::vector<cplx>& roots) {
  std::vector<bool> done(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (done[i]) continue;
    done[i] = true;
    const cplx target = std::conj(roots[i]);
    double best = 2.0 * std::fabs(roots[i].imag());
    std::size_t partner = i;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (done[j]) continue;
      const double d = std::abs(roots[j] - target);
      if (d < best) {
        best = d;
        partner = j;
      }
    }
    if (partner == i) {
      roots[i] = {roots[i].real(), 0.0};
      continue;
    }
    done[partner] = true;
    const cplx avg = 0.5 * (roots[i] + std::conj(roots[partner]));
    roots[i] = avg;
    roots[partner] = std::conj(avg);
  }
}

// A k-fold root only comes back to about eps^(1/k); the members of such a
// cluster scatter around the true root and their centroid is far better.
// Collapse a cluster when the centroid's backward error is no worse than
// the members' own, up to rounding.
void collapse_multiple(std::span<const double> monic, std::vector<cplx>& roots) {
  double scale = 1.0;
  for (const cplx& r : roots) scale = std::max(scale, std::abs(r));
  const double tol = 1e-5 * scale;
  const std::size_t n = roots.size();
  std::vector<std::size_t> group(n);
  for (std::size_t i = 0; i < n; ++i) group[i] = i;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(roots[i] - roots[j]) < tol) {
        const std::size_t a = group[i], b = group[j];
        for (std::size_t& g : group)
          if (g == b) g = a;
      }
  for (std::size_t i = 0; i < n; ++i) {
    if (group[i] != i) continue;
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < n; ++j)
      if (group[j] == i) members.push_back(j);
    if (members.size() < 2) continue;
    cplx centroid = 0.0;
    double worst = 0.0;
    for (std::size_t j : members) {
      centroid += roots[j];
      worst = std::max(worst, backward_error(monic, roots[j]));
    }
    centroid /= static_cast<double>(members.size());
    const double slack = 16.0 * std::numeric_limits<double>::epsilon();
    if (backward_error(monic, centroid) > std::max(worst, slack)) continue;
    for (std::size_t j : members) roots[j] = centroid;
  }
}

std::vector<cplx> aberth(std::span<const double> monic) {
  const std::size_t n = monic.size() - 1;
  std::vector<cplx> z(n);
  const double radius = std::pow(std::fabs(monic.front()), 1.0 / static_cast<double>(n));
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t j = 0; j < n; ++j) {
    const double angle = two_pi * static_cast<double>(j) / static_cast<double>(n) + 0.7 / static_cast<double>(n) + 0.25;
    z[j] = std::polar(radius, angle);
  }

  std::vector<bool> converged(n, false);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    bool all = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (converged[j]) continue;
      const Eval e = horner(monic, z[j]);
      if (e.p == cplx(0.0, 0.0)) {
        converged[j] = true;
        continue;
      }
      const cplx ratio = e.p / e.dp;
      cplx repulsion = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) repulsion += 1.0 / (z[j] - z[k]);
      const cplx step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
        // Collided with another estimate; nudge and retry next sweep.
        z[j] += std::polar(1e-6 * std::max(1.0, std::abs(z[j])), 0.3 + static_cast<double>(j));
        all = false;
        continue;
      }
      z[j] -= step;
      if (std::abs(step) <= 4.0 * eps * std::abs(z[j]) || backward_error(monic, z[j]) <= eps)
        converged[j] = true;
      else
        all = false;
    }
    if (all) break;
  }

  for (cplx& r : z) {
    const Eval e = horner(monic, r);
    if (e.dp == cplx(0.0, 0.0)) continue;
    const cplx polished = r - e.p / e.dp;
    if (std::abs(horner(monic, polished).p) < std::abs(e.p)) r = polished;
  }
  return z;
}

}  // namespace

double backward_error(std::span<const double> coeffs, std::complex<double> w) {
  cplx p = 0.0;
  double bound = 0.0;
  const double aw = std::abs(w);
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    p = p * w + coeffs[i];
    bound = bound * aw + std::fabs(coeffs[i]);
  }
  if (bound == 0.0) return 0.0;
  return std::abs(p) / bound;
}

std::vector<std::complex<double>> find_roots(std::span<const double> coeffs) {
  std::size_t hi = coeffs.size();
  while (hi > 0 && coeffs[hi - 1] == 0.0) --hi;
  if (hi <= 1) throw InvalidInput("root finding needs a polynomial of degree >= 1");
  for (std::size_t i = 0; i < hi; ++i)
    if (!std::isfinite(coeffs[i])) throw InvalidInput("non-finite polynomial coefficient");

  std::size_t lo = 0;
  while (coeffs[lo] == 0.0) ++lo;

  std::vector<cplx> roots(lo, cplx(0.0, 0.0));
  const std::size_t reduced_degree = hi - 1 - lo;
  if (reduced_degree == 1) {
    roots.emplace_back(-coeffs[lo] / coeffs[lo + 1], 0.0);
  } else if (reduced_degree > 1) {
    std::vector<double> monic(coeffs.begin() + static_cast<std::ptrdiff_t>(lo),
                              coeffs.begin() + static_cast<std::ptrdiff_t>(hi));
    const double lead = monic.back();
    for (double& c : monic) c /= lead;
    std::vector<cplx> found = aberth(monic);
    pair_conjugates(found);
    collapse_multiple(monic, found);
    for (const cplx& r : found) {
      const double be = backward_error(coeffs.subspan(0, hi), r);
      if (!(be <= kBackwardTol))
        throw NumericError("root finder did not converge for " + describe(coeffs.subspan(0, hi)) +
                           " (backward error " + std::to_string(be) + ")");
    }
    roots.insert(roots.end(), found.begin(), found.end());
  }

  std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return roots;
}

std::vector<std::complex<double>> find_roots(const WPolynomial& p) { return find_roots(std::span(p.coeffs())); }

std::vector<std::vector<std::size_t>> root_clusters(std::span<const std::complex<double>> roots) {
  double scale = 1.0;
  for (const cplx& r : roots) scale = std::max(scale, std::abs(r));
  const double tol = 1e-8 * scale;
  std::vector<std::size_t> group(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) group[i] = i;
  // Single-linkage union by smallest index.
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < tol) {
        const std::size_t a = group[i], b = group[j];
        for (std::size_t& g : group)
          if (g == b) g = a;
      }
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (group[i] != i) continue;
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < roots.size(); ++j)
      if (group[j] == i) members.push_back(j);
    if (members.size() > 1) out.push_back(std::move(members));
  }
  return out;
}

}  // namespace fostab
