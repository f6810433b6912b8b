#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdmol/geometry.hpp"

#include <cmath>

using namespace qdmol;

namespace {

// High-precision reference values, computed independently with 50-digit
// arithmetic and rounded to double.
constexpr double kEZero_1_1 = 3.4142135623730950488;
constexpr double kEZero_1_10 = 0.39900743804199782713;
constexpr double kEPlus_1_10 = 9.9256195800217286694e-4;
constexpr double kEPlus_1_20 = 1.2476611221553253019e-4;
constexpr double kRatio_10_20 = 7.9553809955024443847;
constexpr double kG2 = 0.12570108214368961183;
constexpr double kG3 = 0.037283517760640857511;
constexpr double kG4 = 0.015734715065342133947;
// Sum of g(k) for 2 <= k <= 10^4, the exact truncation the test requests.
constexpr double kUniformResidual = 0.203292559324544;

}  // namespace

TEST_CASE("e_zero matches reference values") {
  const MoleculeGeometry geom(1.0, 10.0);
  CHECK(e_zero(geom, 1.0) == doctest::Approx(kEZero_1_1).epsilon(1e-15));
  CHECK(e_zero(geom, 10.0) == doctest::Approx(kEZero_1_10).epsilon(1e-15));
  // 2/d + 2/sqrt(a^2+d^2) with a = d = 1 collapses to 2 + sqrt(2).
  CHECK(e_zero(geom, 1.0) == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("e_plus matches reference values and stays positive") {
  const MoleculeGeometry geom(1.0, 10.0);
  CHECK(e_plus(geom, 10.0) == doctest::Approx(kEPlus_1_10).epsilon(1e-15));
  CHECK(e_plus(geom, 20.0) == doctest::Approx(kEPlus_1_20).epsilon(1e-15));
  CHECK(e_plus(geom, 10.0) / e_plus(geom, 20.0) ==
        doctest::Approx(kRatio_10_20).epsilon(1e-14));
  for (double d = 0.5; d < 1e6; d *= 10.0) {
    CHECK(e_plus(geom, d) > 0.0);
  }
  CHECK(e_minus(geom, 10.0) == -e_plus(geom, 10.0));
}

TEST_CASE("e_plus evaluation avoids cancellation at large distance") {
  const MoleculeGeometry geom(1.0, 10.0);
  // The difference form 2/d - 2/s loses all precision once d^3 overwhelms
  // a^2; the product form must still agree with e_zero through the exact
  // identity e_zero - e_plus = 4/s.
  for (const double d : {1.0, 10.0, 1e3, 1e6, 1e8}) {
    const double s = std::sqrt(1.0 + d * d);
    const double identity = e_zero(geom, d) - e_plus(geom, d);
    CHECK(identity == doctest::Approx(4.0 / s).epsilon(1e-13));
  }
  // Leading order 2 a^2 / (2 d^3) = a^2/d^3 at d >> a.
  const double d = 1e4;
  CHECK(e_plus(geom, d) * d * d * d == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("coupling ratio g") {
  const MoleculeGeometry geom(1.0, 10.0);
  CHECK(g(geom, 1.0) == 1.0);  // exact by construction
  CHECK(g(geom, 2.0) == doctest::Approx(kG2).epsilon(1e-15));
  CHECK(g(geom, 3.0) == doctest::Approx(kG3).epsilon(1e-15));
  CHECK(g(geom, 4.0) == doctest::Approx(kG4).epsilon(1e-15));

  double prev = g(geom, 1.0);
  for (int k = 2; k <= 60; ++k) {
    const double cur = g(geom, static_cast<double>(k));
    CHECK(cur < prev);
    CHECK(cur > 0.0);
    prev = cur;
  }
}

TEST_CASE("g decays like k^-3") {
  const MoleculeGeometry geom(1.0, 10.0);
  // k^3 g(k) approaches the constant a^2 / (b^3 e_plus(b)); successive values
  // agree to a few ppm by k = 50.
  const auto k3g = [&](int k) {
    return std::pow(static_cast<double>(k), 3) * g(geom, static_cast<double>(k));
  };
  CHECK(k3g(50) / k3g(51) == doctest::Approx(0.999999883507).epsilon(1e-9));
  CHECK(std::abs(k3g(50) / k3g(51) - 1.0) < 1e-5);
}

TEST_CASE("geometry domain errors") {
  CHECK_THROWS_AS(MoleculeGeometry(0.0, 10.0), std::domain_error);
  CHECK_THROWS_AS(MoleculeGeometry(1.0, -1.0), std::domain_error);
  const MoleculeGeometry geom(1.0, 10.0);
  CHECK_THROWS_AS(e_zero(geom, 0.0), std::domain_error);
  CHECK_THROWS_AS(e_plus(geom, -2.0), std::domain_error);
  CHECK_THROWS_AS(g(geom, 0.5), std::domain_error);
  CHECK_THROWS_AS(coupling_ratio(geom, 0.0), std::domain_error);
}

TEST_CASE("residual weights periodic lookup") {
  ResidualWeights w;
  w.period = 4;
  w.weight_by_residue = {Rational(2), Rational(1), Rational(0), Rational(1)};
  CHECK(w.at(2) == 0);
  CHECK(w.at(3) == 1);
  CHECK(w.at(4) == 2);
  CHECK(w.at(5) == 1);
  CHECK(w.at(8) == 2);
  CHECK(w.max_weight() == 2);

  const ResidualWeights u = ResidualWeights::uniform();
  CHECK(u.at(2) == 1);
  CHECK(u.at(977) == 1);
}

TEST_CASE("residual_sum reproduces the uniform reference value") {
  const MoleculeGeometry geom(1.0, 10.0);
  const double r = residual_sum(geom, ResidualWeights::uniform(), 10000, 1e-6);
  CHECK(r == doctest::Approx(kUniformResidual).epsilon(1e-12));
}

TEST_CASE("residual_sum is stable under doubling k_max") {
  const MoleculeGeometry geom(1.0, 10.0);
  const double tol = 1e-6;
  const double r1 = residual_sum(geom, ResidualWeights::uniform(), 10000, tol);
  const double r2 = residual_sum(geom, ResidualWeights::uniform(), 20000, tol);
  CHECK(std::abs(r2 - r1) < tol);
}

TEST_CASE("residual_sum refuses an uncertifiable truncation") {
  const MoleculeGeometry geom(1.0, 10.0);
  CHECK_THROWS_AS(residual_sum(geom, ResidualWeights::uniform(), 10, 1e-12), TruncationError);
  // The same k_max is fine when the tolerance is honest about it.
  CHECK_NOTHROW(residual_sum(geom, ResidualWeights::uniform(), 10, 1e-2));
  CHECK_THROWS_AS(residual_sum(geom, ResidualWeights::uniform(), 1, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(residual_sum(geom, ResidualWeights::uniform(), 100, 0.0), std::invalid_argument);
}

TEST_CASE("residual_sum with zero weights is exactly zero") {
  const MoleculeGeometry geom(1.0, 10.0);
  ResidualWeights w;
  w.period = 2;
  w.weight_by_residue = {Rational(0), Rational(0)};
  CHECK(residual_sum(geom, w, 100, 1e-9) == 0.0);
}
