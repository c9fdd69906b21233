#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fostab/errors.hpp"
#include "fostab/nonlinear.hpp"
#include "fostab/parser.hpp"

using namespace fostab;
using cd = std::complex<double>;

namespace {

PolynomialVectorField chen() {
  return parse_vector_field("0.8,1.0,0.9", {"35*(x2-x1)", "-7*x1-x1*x3+28*x2", "x1*x2-3*x3"});
}

std::vector<Eigen::VectorXd> chen_seeds() {
  return {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(8, 8, 21), Eigen::Vector3d(-8, -8, 21)};
}

const double kSqrt63 = std::sqrt(63.0);

}  // namespace

TEST_CASE("Chen equilibria") {
  const EquilibriumSearch s = find_equilibria(chen(), chen_seeds());
  CHECK(s.diagnostics.empty());
  REQUIRE(s.equilibria.size() == 3);
  const Eigen::Vector3d expect[3] = {{-kSqrt63, -kSqrt63, 21}, {0, 0, 0}, {kSqrt63, kSqrt63, 21}};
  for (int i = 0; i < 3; ++i) {
    CHECK((s.equilibria[static_cast<std::size_t>(i)].x_star - expect[i]).norm() < 1e-12);
    CHECK(s.equilibria[static_cast<std::size_t>(i)].residual <= 1e-9 * (1.0 + chen().scale()));
  }
}

TEST_CASE("simple fields") {
  const auto decay = parse_vector_field("0.5", {"-x1"});
  const auto d = find_equilibria(decay, std::vector<Eigen::VectorXd>{Eigen::VectorXd::Constant(1, 3.0)});
  REQUIRE(d.equilibria.size() == 1);
  CHECK(std::fabs(d.equilibria[0].x_star(0)) < 1e-15);

  const auto quad = parse_vector_field("0.5", {"x1^2-1"});
  const auto q = find_equilibria(
      quad, std::vector<Eigen::VectorXd>{Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Constant(1, -0.5)});
  REQUIRE(q.equilibria.size() == 2);
  CHECK(q.equilibria[0].x_star(0) == doctest::Approx(-1.0));
  CHECK(q.equilibria[1].x_star(0) == doctest::Approx(1.0));

  // duplicates from different seeds collapse
  const auto dup = find_equilibria(
      quad, std::vector<Eigen::VectorXd>{Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd::Constant(1, 3.0)});
  CHECK(dup.equilibria.size() == 1);
}

TEST_CASE("failed seeds are reported, not thrown") {
  const auto none = parse_vector_field("0.5", {"x1^2+1"});
  const auto s = find_equilibria(none, std::vector<Eigen::VectorXd>{Eigen::VectorXd::Constant(1, 0.3)});
  CHECK(s.equilibria.empty());
  REQUIRE(s.diagnostics.size() == 1);
  CHECK(s.diagnostics[0].find("did not converge") != std::string::npos);
  CHECK_THROWS_AS(find_equilibria(none, std::vector<Eigen::VectorXd>{}), InvalidInput);
  CHECK_THROWS_AS(find_equilibria(none, std::vector<Eigen::VectorXd>{Eigen::VectorXd::Zero(2)}), InvalidInput);
}

TEST_CASE("Chen Jacobians") {
  Eigen::Matrix3d at_origin;
  at_origin << -35, 35, 0, -7, 28, 0, 0, 0, -3;
  CHECK(jacobian_at(chen(), Eigen::Vector3d::Zero()).isApprox(at_origin));

  Eigen::Matrix3d at_scroll;
  at_scroll << -35, 35, 0, -28, 28, -kSqrt63, kSqrt63, kSqrt63, -3;
  const Eigen::MatrixXd j = jacobian_at(chen(), Eigen::Vector3d(kSqrt63, kSqrt63, 21));
  CHECK((j - at_scroll).cwiseAbs().maxCoeff() < 1e-14);

  const auto linear = parse_vector_field("1,1", {"2*x1 - x2", "3*x2 + 0.5*x1"});
  Eigen::Matrix2d a;
  a << 2, -1, 0.5, 3;
  CHECK(jacobian_at(linear, Eigen::Vector2d(7, -4)).isApprox(a));
  CHECK(jacobian_at(linear, Eigen::Vector2d(0, 0)).isApprox(a));
}

TEST_CASE("Chen characteristic polynomial at the exact equilibrium") {
  const EquilibriumSearch s = find_equilibria(chen(), chen_seeds());
  const Eigen::MatrixXd j = jacobian_at(chen(), s.equilibria[2].x_star);
  const IncommensurateCharPoly cp = char_poly_incommensurate(j, chen().orders());
  CHECK(cp.m == 10);
  CHECK(cp.gamma == RationalOrder(1, 10));
  REQUIRE(cp.poly.degree() == 27);
  std::vector<double> expect(28, 0.0);
  expect[27] = 1;
  expect[19] = 35;
  expect[18] = 3;
  expect[17] = -28;
  expect[10] = 105;
  expect[8] = -21;
  expect[0] = 4410;
  for (std::size_t d = 0; d < 28; ++d) {
    CAPTURE(d);
    CHECK(std::fabs(cp.poly.coeffs()[d] - expect[d]) <= 1e-9 * std::max(1.0, std::fabs(expect[d])));
  }
}

TEST_CASE("rounded equilibrium perturbs the low coefficients") {
  const Eigen::MatrixXd j = jacobian_at(chen(), Eigen::Vector3d(7.94, 7.94, 21));
  const IncommensurateCharPoly cp = char_poly_incommensurate(j, chen().orders());
  CHECK(cp.poly.coeffs()[8] == doctest::Approx(-20.956).epsilon(1e-4));
  CHECK(cp.poly.coeffs()[0] == doctest::Approx(4413.05).epsilon(1e-5));
}

TEST_CASE("small characteristic polynomials") {
  Eigen::MatrixXd one(1, 1);
  one << -1.0;
  const auto a = char_poly_incommensurate(one, std::vector<RationalOrder>{RationalOrder(1, 2)});
  CHECK(a.m == 2);
  CHECK(a.poly.coeffs() == std::vector<double>{1.0, 1.0});

  Eigen::MatrixXd diag = Eigen::Vector2d(-2.0, 3.0).asDiagonal();
  const auto b = char_poly_incommensurate(diag, std::vector<RationalOrder>{RationalOrder(1, 2), RationalOrder(1, 2)});
  // (l + 2)(l - 3) = l^2 - l - 6
  CHECK(b.poly.coeffs() == std::vector<double>{-6.0, -1.0, 1.0});

  CHECK_THROWS_AS(char_poly_incommensurate(Eigen::MatrixXd::Identity(7, 7), std::vector<RationalOrder>(7, RationalOrder(1))),
                  InvalidInput);
  CHECK_THROWS_AS(char_poly_incommensurate(one, std::vector<RationalOrder>{RationalOrder(199, 200)}), InvalidInput);
  CHECK_THROWS_AS(char_poly_incommensurate(one, std::vector<RationalOrder>{RationalOrder(2)}), DomainError);
}

TEST_CASE("Chen saddle stability") {
  const EquilibriumSearch s = find_equilibria(chen(), chen_seeds());
  const Eigen::MatrixXd j = jacobian_at(chen(), s.equilibria[2].x_star);
  const NonlinearStabilityReport r = nonlinear_stability(j, chen().orders());
  CHECK_FALSE(r.commensurate);
  CHECK(r.m == 10);
  CHECK(r.threshold == doctest::Approx(std::numbers::pi / 20));
  CHECK(r.verdict == PointVerdict::Unstable);
  CHECK(r.roots.size() == 27);
  int unstable = 0;
  for (std::size_t i = 0; i < r.roots.size(); ++i) {
    if (r.abs_args[i] >= r.threshold) continue;
    ++unstable;
    CHECK(std::fabs(r.roots[i].real() - 1.2928) < 2e-3);
    CHECK(std::fabs(std::fabs(r.roots[i].imag()) - 0.2032) < 2e-3);
    CHECK(std::fabs(r.abs_args[i] - 0.1560) < 1e-3);
  }
  CHECK(unstable == 2);
}

TEST_CASE("commensurate verdicts") {
  Eigen::Matrix2d j;
  j << -1, 0, 0, -2;
  const std::vector<RationalOrder> ones{RationalOrder(1), RationalOrder(1)};
  const auto r = nonlinear_stability(j, ones);
  CHECK(r.commensurate);
  CHECK(r.verdict == PointVerdict::Stable);

  Eigen::Matrix2d rot;
  rot << 0, -1, 1, 0;
  CHECK(nonlinear_stability(rot, ones).verdict == PointVerdict::Marginal);

  // eigenvalues 1 +- j sit exactly on q pi/2 with q = 1/2
  Eigen::Matrix2d edge;
  edge << 1, -1, 1, 1;
  const std::vector<RationalOrder> halves{RationalOrder(1, 2), RationalOrder(1, 2)};
  CHECK(nonlinear_stability(edge, halves).verdict == PointVerdict::Marginal);
  CHECK(std::string(to_string(PointVerdict::Marginal)) == "MARGINAL");
}

TEST_CASE("minimum order for chaos") {
  CHECK(min_chaos_order(std::vector<cd>{{1.0, 1.0}, {1.0, -1.0}}) == doctest::Approx(0.5));
  CHECK(min_chaos_order(std::vector<cd>{{1.2928, 0.2032}, {1.2928, -0.2032}, {-5, 0}}) ==
        doctest::Approx(0.0993).epsilon(1e-3));
  CHECK_THROWS_AS(min_chaos_order(std::vector<cd>{{-1.0, 3.0}, {-2.0, 0.0}}), DomainError);
  Eigen::Matrix2d stable;
  stable << -1, 0, 0, -2;
  CHECK_THROWS_AS(min_chaos_order(stable), DomainError);
}
