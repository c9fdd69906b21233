// Acceptance checks, one line per criterion. Exit status is nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "fostab/gl_sim.hpp"
#include "fostab/lti.hpp"
#include "fostab/mittag_leffler.hpp"
#include "fostab/nonlinear.hpp"
#include "fostab/parser.hpp"
#include "fostab/response.hpp"

using namespace fostab;
using json = nlohmann::ordered_json;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json run_json(const std::vector<std::string>& args, int* code) {
  std::ostringstream out, err;
  *code = cli::run(args, out, err);
  return *code == 0 ? json::parse(out.str()) : json();
}

struct Root {
  cplx w;
  double abs_arg;
  std::string sector;
  std::optional<cplx> s;
};

std::vector<Root> roots_of(const json& result) {
  std::vector<Root> out;
  for (const auto& r : result["roots"]) {
    Root x{{r["w_re"].get<double>(), r["w_im"].get<double>()}, r["abs_arg"].get<double>(), r["sector"].get<std::string>(), {}};
    if (r.contains("s_re")) x.s = cplx(r["s_re"].get<double>(), r["s_im"].get<double>());
    out.push_back(x);
  }
  return out;
}

double nearest(const std::vector<Root>& roots, cplx target) {
  double best = 1e300;
  for (const Root& r : roots) best = std::min(best, std::abs(r.w - target));
  return best;
}

const char* const kBench = "0.8*s^2.2+0.5*s^0.9+1";

Check criterion1() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  const json j = run_json({"analyze", "--char", kBench}, &code);
  const double dt = seconds_since(t0);
  c.require(code == 0, "exit code " + std::to_string(code));
  if (code != 0) return c;
  const json& r = j["result"];
  const auto roots = roots_of(r);
  c.require(r["m"] == 10, "m=" + r["m"].dump());
  c.require(roots.size() == 22, "root count " + std::to_string(roots.size()));
  c.require(r["verdict"] == "STABLE", "verdict " + r["verdict"].dump());
  int physical = 0;
  for (const Root& x : roots) {
    if (x.sector == "NONPHYSICAL") continue;
    ++physical;
    const cplx expect(1.0045, x.w.imag() > 0 ? 0.1684 : -0.1684);
    c.require(std::abs(x.w - expect) <= 1e-3, "physical root off by " + fmt("%.2e", std::abs(x.w - expect)));
    c.require(std::fabs(x.abs_arg - 0.1661) <= 1e-3, "|arg| " + fmt("%.5f", x.abs_arg));
    c.require(x.s.has_value(), "missing s-pole");
    if (x.s) {
      const cplx se(-0.10841, x.w.imag() > 0 ? 1.19699 : -1.19699);
      c.require(std::fabs(x.s->real() - se.real()) <= 2e-4 && std::fabs(x.s->imag() - se.imag()) <= 2e-4,
                "s-pole off by " + fmt("%.2e", std::abs(*x.s - se)));
    }
  }
  c.require(physical == 2, "physical roots " + std::to_string(physical));
  c.require(dt < 1.0, "runtime " + fmt("%.3f s", dt));
  c.note("runtime " + fmt("%.3f s", dt));
  return c;
}

Check criterion2() {
  Check c;
  int code = 0;
  const json j = run_json({"analyze", "--char", kBench}, &code);
  if (code != 0) {
    c.require(false, "exit code " + std::to_string(code));
    return c;
  }
  std::vector<double> args;
  for (const Root& r : roots_of(j["result"]))
    if (r.w.imag() >= 0) args.push_back(r.abs_arg);
  std::sort(args.rbegin(), args.rend());
  const std::vector<double> expect{3.023, 2.698, 2.431, 2.151, 1.834, 1.595, 1.265, 1.010, 0.717, 0.411, 0.1661};
  c.require(args.size() == expect.size(), "distinct |arg| count " + std::to_string(args.size()));
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(args.size(), expect.size()); ++i) worst = std::max(worst, std::fabs(args[i] - expect[i]));
  c.require(worst <= 2e-3, "max |arg| deviation " + fmt("%.2e", worst));
  c.note("max deviation " + fmt("%.2e", worst));
  return c;
}

Check criterion3() {
  Check c;
  int code = 0;
  const json j = run_json({"analyze", "--tf", "(12.46*s+64.47)/(39.69*s^1.25+12.46*s+65.068)"}, &code);
  if (code != 0) {
    c.require(false, "exit code " + std::to_string(code));
    return c;
  }
  const json& r = j["result"];
  const auto roots = roots_of(r);
  c.require(r["m"] == 4, "m=" + r["m"].dump());
  c.require(roots.size() == 5, "root count " + std::to_string(roots.size()));
  c.require(r["verdict"] == "STABLE", "verdict " + r["verdict"].dump());
  const std::vector<cplx> expect{{-1.17474, 0}, {-0.40540, 1.0426}, {-0.40540, -1.0426}, {0.83580, 0.64536}, {0.83580, -0.64536}};
  double worst = 0.0;
  for (const cplx& e : expect) worst = std::max(worst, nearest(roots, e));
  c.require(worst <= 1e-3, "root deviation " + fmt("%.2e", worst));
  for (const double a : {kPi, 1.9416, 0.6575}) {
    double best = 1e300;
    for (const Root& x : roots) best = std::min(best, std::fabs(x.abs_arg - a));
    c.require(best <= 1e-3, "|arg| " + fmt("%.4f", a) + " missing");
  }
  c.note("max root deviation " + fmt("%.2e", worst));
  return c;
}

Check criterion4() {
  Check c;
  const StateSpace ss = to_state_space(parse_pseudo_polynomial(kBench));
  Eigen::Matrix2d expect;
  expect << 0, 1, -1.25, -0.625;
  c.require(ss.a.rows() == 2 && ss.a.cols() == 2, "A is not 2x2");
  if (!c.ok) return c;
  c.require((ss.a - expect).cwiseAbs().maxCoeff() == 0.0, "A differs");
  c.require(ss.q.size() == 2 && ss.q[0] == RationalOrder(9, 10) && ss.q[1] == RationalOrder(13, 10), "orders differ");
  const auto eig = eigenvalues(ss.a);
  for (const cplx& l : eig) {
    const cplx e(-0.3125, l.imag() > 0 ? 1.0735 : -1.0735);
    c.require(std::abs(l - e) <= 1e-4, "eigenvalue off by " + fmt("%.2e", std::abs(l - e)));
    c.require(std::fabs(std::fabs(std::arg(l)) - 1.8541) <= 1e-3, "|arg| " + fmt("%.5f", std::fabs(std::arg(l))));
  }
  if (!eig.empty()) c.note("eigenvalues " + fmt("%.5f", eig[0].real()) + " +/- " + fmt("%.5fj", std::fabs(eig[0].imag())));
  return c;
}

Check criterion5() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const PolynomialVectorField chen = cli::chen_field();
  const std::vector<Eigen::VectorXd> seeds{Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(8, 8, 20), Eigen::Vector3d(-8, -8, 20)};
  const EquilibriumSearch found = find_equilibria(chen, seeds);
  const double r63 = std::sqrt(63.0);
  for (const Eigen::Vector3d& e : {Eigen::Vector3d(r63, r63, 21), Eigen::Vector3d(-r63, -r63, 21)}) {
    double best = 1e300;
    for (const Equilibrium& q : found.equilibria) best = std::min(best, (q.x_star - e).cwiseAbs().maxCoeff());
    c.require(best <= 1e-6, "equilibrium off by " + fmt("%.2e", best));
  }

  const Eigen::MatrixXd j = jacobian_at(chen, Eigen::Vector3d(r63, r63, 21));
  const IncommensurateCharPoly cp = char_poly_incommensurate(j, chen.orders());
  c.require(cp.gamma == RationalOrder(1, 10), "gamma " + cp.gamma.to_string());
  c.require(cp.poly.degree() == 27, "degree " + std::to_string(cp.poly.degree()));
  if (!c.ok) return c;
  std::vector<double> expect(28, 0.0);
  expect[27] = 1;
  expect[19] = 35;
  expect[18] = 3;
  expect[17] = -28;
  expect[10] = 105;
  expect[8] = -21;
  expect[0] = 4410;
  double worst = 0.0;
  for (std::size_t d = 0; d < 28; ++d)
    worst = std::max(worst, std::fabs(cp.poly.coeffs()[d] - expect[d]) / std::max(1.0, std::fabs(expect[d])));
  c.require(worst <= 1e-9, "coefficient deviation " + fmt("%.2e", worst));

  const NonlinearStabilityReport rep = nonlinear_stability(j, chen.orders());
  c.require(rep.verdict == PointVerdict::Unstable, std::string("verdict ") + to_string(rep.verdict));
  const double gamma = 0.1;
  int unstable = 0;
  for (std::size_t i = 0; i < rep.roots.size(); ++i) {
    if (rep.abs_args[i] >= gamma * kPi / 2) continue;
    ++unstable;
    const cplx l = rep.roots[i];
    const cplx e(1.2928, l.imag() > 0 ? 0.2032 : -0.2032);
    c.require(std::abs(l - e) <= 2e-3, "unstable root off by " + fmt("%.2e", std::abs(l - e)));
    c.require(std::fabs(rep.abs_args[i] - 0.1560) <= 1e-3, "|arg| " + fmt("%.5f", rep.abs_args[i]));
  }
  c.require(unstable == 2, "roots inside the unstable sector: " + std::to_string(unstable));
  c.require(std::fabs(rep.threshold - gamma * kPi / 2) < 1e-15, "threshold " + fmt("%.6f", rep.threshold));
  const double dt = seconds_since(t0);
  c.require(dt < 5.0, "runtime " + fmt("%.3f s", dt));
  c.note("runtime " + fmt("%.3f s", dt));
  return c;
}

Check criterion6() {
  Check c;
  std::mt19937_64 rng(0xacce55);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_exp = 0.0;
  for (int i = 0; i < 50; ++i) {
    const cplx z = std::polar(5.0 * std::sqrt(unit(rng)), 2 * kPi * unit(rng));
    const cplx v = ml({1.0, 1.0}, z), e = std::exp(z);
    worst_exp = std::max(worst_exp, std::abs(v - e) / std::abs(e));
  }
  c.require(worst_exp <= 1e-10, "exp relative error " + fmt("%.2e", worst_exp));
  double worst_cos = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = 4.0 * i / 400.0;
    worst_cos = std::max(worst_cos, std::fabs(ml({2.0, 1.0}, -x * x).real() - std::cos(x)));
  }
  c.require(worst_cos <= 1e-9, "cos absolute error " + fmt("%.2e", worst_cos));

  // recurrence on cases the series evaluates to full accuracy; others must stay inside their own rounding estimate
  int strict = 0;
  double worst_rec = 0.0;
  for (int i = 0; i < 5000 && strict < 100; ++i) {
    const double mu = 0.2 + 2.8 * unit(rng), nu = 0.2 + 2.8 * unit(rng);
    const cplx z = std::polar(5.0 * unit(rng), kPi * (2 * unit(rng) - 1));
    const SeriesValue a = ml_series(mu, nu, 0, z), b = ml_series(mu, mu + nu, 0, z);
    if (!a.ok() || !b.ok()) continue;
    const double scale = std::max({std::abs(a.value), std::abs(z * b.value), reciprocal_gamma(nu)});
    const double rounding = a.rounding + std::abs(z) * b.rounding;
    const double rel = std::abs(a.value - (z * b.value + reciprocal_gamma(nu))) / scale;
    if (rounding <= 1e-10 * scale) {
      ++strict;
      worst_rec = std::max(worst_rec, rel);
    } else {
      c.require(rel * scale <= 1e-9 * scale + rounding, "recurrence outside the rounding estimate");
    }
  }
  c.require(strict == 100, "only " + std::to_string(strict) + " recurrence cases evaluable");
  c.require(worst_rec <= 1e-9, "recurrence relative error " + fmt("%.2e", worst_rec));
  c.note("exp " + fmt("%.1e", worst_exp) + ", cos " + fmt("%.1e", worst_cos) + ", recurrence " + fmt("%.1e", worst_rec));
  return c;
}

double relaxation_error(double h) {
  const auto field = parse_vector_field("0.7", {"-x1"});
  SimConfig cfg;
  cfg.h = h;
  cfg.t_end = 5.0;
  cfg.x0 = {1.0};
  const Trajectory tr = simulate(field, cfg);
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double t = tr.times[k];
    const double exact = ml({0.7, 1.0}, -std::pow(t, 0.7)).real();
    worst = std::max(worst, std::fabs(tr.states(static_cast<Eigen::Index>(k), 0) - exact));
  }
  return worst;
}

Check criterion7() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const double e1 = relaxation_error(1e-3);
  const double e2 = relaxation_error(5e-4);
  const double dt = seconds_since(t0);
  const double ratio = e1 / e2;
  c.require(e1 <= 5e-3, "max error " + fmt("%.2e", e1));
  c.require(ratio >= 1.7 && ratio <= 2.3, "ratio " + fmt("%.3f", ratio));
  c.require(dt < 10.0, "runtime " + fmt("%.2f s", dt));
  c.note("max error " + fmt("%.2e", e1) + ", ratio " + fmt("%.3f", ratio) + ", runtime " + fmt("%.2f s", dt));
  return c;
}

Check criterion8() {
  Check c;
  const auto field = parse_vector_field("0.7", {"-x1"});
  SimConfig cfg;
  cfg.h = 1e-2;
  cfg.t_end = 100.0;
  cfg.x0 = {1.0};
  const Trajectory tr = simulate(field, cfg);
  c.require(!tr.diverged, "diverged");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double t = tr.times[k];
    if (t < 50.0 - 1e-9) continue;
    const double v = std::fabs(tr.states(static_cast<Eigen::Index>(k), 0));
    if (v <= 0.0) continue;
    const double lx = std::log(t), ly = std::log(v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  c.require(std::fabs(slope + 0.7) <= 0.15, "slope " + fmt("%.4f", slope));
  c.note("slope " + fmt("%.4f", slope));
  return c;
}

Check criterion9() {
  Check c;
  SimConfig cfg;
  cfg.h = 5e-3;
  cfg.t_end = 30.0;
  cfg.x0 = {-9.0, -5.0, 14.0};
  const Trajectory tr = simulate(cli::chen_field(), cfg);
  c.require(!tr.diverged, "divergence flagged");
  double m1 = 0, m2 = 0, lo3 = 1e300, hi3 = -1e300;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    if (tr.times[k] < 1.0 - 1e-9) continue;
    const auto row = static_cast<Eigen::Index>(k);
    m1 = std::max(m1, std::fabs(tr.states(row, 0)));
    m2 = std::max(m2, std::fabs(tr.states(row, 1)));
    lo3 = std::min(lo3, tr.states(row, 2));
    hi3 = std::max(hi3, tr.states(row, 2));
  }
  c.require(m1 <= 30 && m2 <= 30 && lo3 >= 0 && hi3 <= 50, "left the box");
  c.require(tr.times.size() == 6001, "steps " + std::to_string(tr.times.size()));
  c.note("max|x1| " + fmt("%.2f", m1) + ", max|x2| " + fmt("%.2f", m2) + ", x3 in [" + fmt("%.2f", lo3) + ", " +
         fmt("%.2f", hi3) + "]");
  return c;
}

Check criterion10() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const int raw = std::system(FOSTAB_PROPERTIES_EXE " --minimal >/dev/null 2>&1");
  const double dt = seconds_since(t0);
  c.require(raw == 0, "property suite exit status " + std::to_string(raw));
  c.require(dt < 60.0, "runtime " + fmt("%.2f s", dt));
  c.note("runtime " + fmt("%.2f s", dt));
  return c;
}

Check criterion11() {
  Check c;
  const PseudoPolynomial den = parse_pseudo_polynomial(kBench);
  SimConfig cfg;
  cfg.h = 2.5e-4;
  cfg.t_end = 5.0;
  const Trajectory tr = simulate_lti(den, InputKind::Impulse, cfg);
  std::vector<double> ts;
  for (int i = 0; i <= 90; ++i) ts.push_back(0.5 + 0.05 * i);
  const auto series = fode3_response(den, ts);
  double worst = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    c.require(series[i].converged, "series unconverged at t=" + fmt("%g", ts[i]));
    const auto k = static_cast<Eigen::Index>(std::llround(ts[i] / cfg.h));
    worst = std::max(worst, std::fabs(series[i].value - tr.states(k, 0)));
  }
  c.require(worst <= 1e-3, "max difference " + fmt("%.2e", worst));
  c.note("max difference " + fmt("%.2e", worst));
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria{
      {"three-term benchmark analysis", criterion1},
      {"three-term benchmark argument list", criterion2},
      {"heater loop analysis", criterion3},
      {"three-term benchmark state space", criterion4},
      {"Chen equilibria and characteristic polynomial", criterion5},
      {"Mittag-Leffler oracles", criterion6},
      {"GL first-order convergence", criterion7},
      {"power-law tail", criterion8},
      {"Chen simulation bounded", criterion9},
      {"property suites", criterion10},
      {"series vs GL on the three-term benchmark", criterion11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("threw: ") + e.what();
    }
    failed += !c.ok;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, c.ok ? "PASS" : "FAIL", criteria[i].first, c.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
