#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "curvlab/cmc.hpp"

using namespace curvlab;
using cmc::CmcParams;

TEST_CASE("sinh integrals in closed form and by quadrature") {
  const cmc::SinhIntegral s2(2);
  for (double r : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    CHECK(s2.In(r) == doctest::Approx(std::cosh(r) - 1.0).epsilon(1e-12));
    CHECK(s2.F(r) == doctest::Approx(std::tanh(r / 2.0)).epsilon(1e-10));
  }

  const cmc::SinhIntegral s3(3);
  // int_0^r sinh^2 = (sinh r cosh r - r) / 2
  for (double r : {0.5, 1.0, 2.5}) {
    const double exact = 0.5 * (std::sinh(r) * std::cosh(r) - r);
    CHECK(s3.In(r) == doctest::Approx(exact).epsilon(1e-9));
  }

  const cmc::SinhIntegral s4(4);
  // int_0^r sinh^3 = (cosh^3 r) / 3 - cosh r + 2/3
  for (double r : {0.5, 1.0, 2.5}) {
    const double c = std::cosh(r);
    const double exact = c * c * c / 3.0 - c + 2.0 / 3.0;
    CHECK(s4.In(r) == doctest::Approx(exact).epsilon(1e-9));
  }

  CHECK_THROWS_AS(cmc::SinhIntegral(1), std::invalid_argument);
}

TEST_CASE("normalized integral is increasing with the expected limit") {
  for (int n : {2, 3, 5}) {
    const cmc::SinhIntegral s(n);
    double prev = 0.0;
    for (int i = 1; i <= 40; ++i) {
      const double r = 0.25 * i;
      const double f = s.F(r);
      CHECK(f > prev);
      prev = f;
    }
    CHECK(s.F(30.0) == doctest::Approx(1.0 / (n - 1)).epsilon(1e-8));

    // derivative against central differences away from the origin
    for (double r : {0.4, 1.0, 2.0}) {
      const double e = 1e-6;
      const double fd = (s.F(r + e) - s.F(r - e)) / (2.0 * e);
      CHECK(s.dF(r) == doctest::Approx(fd).epsilon(1e-6));
    }
    // series region
    const double tiny = 5e-4;
    CHECK(s.F(tiny) == doctest::Approx(tiny / n).epsilon(1e-6));
    CHECK(s.dF(tiny) == doctest::Approx(1.0 / n).epsilon(1e-5));
  }
}

TEST_CASE("critical radius") {
  // n = 2, H = 1: 2 tanh(r/2) = 1 at r = ln 3
  const auto r1 = cmc::critical_radius({2, 1.0, 0.0});
  REQUIRE(r1.has_value());
  CHECK(std::abs(*r1 - std::log(3.0)) <= 1e-10);

  const cmc::SinhIntegral s3(3);
  const auto r3 = cmc::critical_radius({3, 0.9, 0.0});
  REQUIRE(r3.has_value());
  CHECK(3.0 * 0.9 * s3.F(*r3) == doctest::Approx(1.0).epsilon(1e-12));

  // at or below the entire-graph threshold the slope never blows up
  CHECK(!cmc::critical_radius({2, 0.5, 0.0}).has_value());
  CHECK(!cmc::critical_radius({3, 2.0 / 3.0, 0.0}).has_value());
}

TEST_CASE("entire graph at the critical mean curvature") {
  // n = 2, H = 1/2: u = 2 (cosh(r/2) - 1), u' = sinh(r/2), flux vanishes
  const auto curve = cmc::integrate_profile({2, 0.5, 0.0}, 5.0, 1e-3);
  CHECK(curve.regime == cmc::Regime::entire_graph);
  CHECK(!curve.critical_radius.has_value());
  CHECK(!curve.closed);
  double worst = 0.0;
  for (const auto& s : curve.samples) {
    worst = std::max(worst,
                     std::abs(s.u - 2.0 * (std::cosh(s.r / 2.0) - 1.0)));
    CHECK(std::abs(s.du - std::sinh(s.r / 2.0)) <= 1e-6);
  }
  CHECK(worst <= 1e-6);
  CHECK(curve.samples.back().r == doctest::Approx(5.0));
  CHECK(curve.max_flux_drift() <= 1e-9);

  const auto rep = cmc::verify_profile_mean_curvature(curve, {2, 0.5, 0.0});
  CHECK(rep.pass);
  CHECK(rep.max_deviation < 1e-4);
  CHECK(rep.checked >= 8);
}

TEST_CASE("subcritical graphs stay bounded in slope") {
  const auto curve = cmc::integrate_profile({2, 0.3, 0.0}, 6.0, 1e-3);
  CHECK(curve.regime == cmc::Regime::subcritical);
  for (const auto& s : curve.samples) CHECK(std::isfinite(s.du));
  // the slope tracks nHF / sqrt(1 - (nHF)^2) exactly, staying below its limit
  const double r_end = curve.samples.back().r;
  const double q_end = 2.0 * 0.3 * std::tanh(r_end / 2.0);
  const double du_exact = q_end / std::sqrt(1.0 - q_end * q_end);
  CHECK(curve.samples.back().du == doctest::Approx(du_exact).epsilon(1e-8));
  const double q_lim = 2.0 * 0.3;
  CHECK(curve.samples.back().du < q_lim / std::sqrt(1.0 - q_lim * q_lim));
  CHECK(curve.max_flux_drift() <= 1e-9);
}

TEST_CASE("supercritical integration stops short of the blow-up radius") {
  const auto curve = cmc::integrate_profile({2, 1.0, 0.0}, 10.0, 1e-3);
  CHECK(curve.regime == cmc::Regime::supercritical);
  REQUIRE(curve.critical_radius.has_value());
  CHECK(std::abs(*curve.critical_radius - std::log(3.0)) <= 1e-10);
  CHECK(curve.samples.back().r < *curve.critical_radius);
  CHECK(curve.samples.back().r > *curve.critical_radius - 0.01);
  CHECK(curve.max_flux_drift() <= 1e-9);
}

TEST_CASE("flux is the first integral of minimal graphs too") {
  // for H = 0 and flux constant a, the slope solves
  // sinh(r) u' / sqrt(1 + u'^2) = a, so u' = a / sqrt(sinh^2 - a^2)
  const CmcParams minimal{2, 0.0, 0.0};
  for (double a : {0.25, 1.0}) {
    for (double r : {1.0, 2.0, 3.0}) {
      const double sh = std::sinh(r);
      const double up = a / std::sqrt(sh * sh - a * a);
      CHECK(cmc::flux(r, up, minimal) == doctest::Approx(a).epsilon(1e-12));
    }
  }
  // infinite slope contributes exactly the unit slope term
  CHECK(cmc::flux(1.0, std::numeric_limits<double>::infinity(), minimal) ==
        doctest::Approx(std::sinh(1.0)).epsilon(1e-12));
}

TEST_CASE("closed sphere profile") {
  const auto sphere = cmc::build_cmc_sphere({2, 1.0, 0.0}, 5e-4);
  CHECK(sphere.closed);
  REQUIRE(sphere.critical_radius.has_value());
  REQUIRE(sphere.max_height.has_value());

  const double r0 = *sphere.critical_radius;
  const double apex = *sphere.max_height;
  CHECK(apex > 0.0);

  // the mirrored branch climbs to twice the equator height
  double top = 0.0;
  for (const auto& s : sphere.samples) top = std::max(top, s.u);
  CHECK(top == doctest::Approx(2.0 * apex).epsilon(1e-9));
  CHECK(sphere.samples.front().u == doctest::Approx(0.0));
  CHECK(sphere.samples.back().u == doctest::Approx(2.0 * apex - sphere.samples.front().u)
                                       .epsilon(1e-9));

  // radius never exceeds the blow-up radius and returns to small values
  for (const auto& s : sphere.samples) CHECK(s.r <= r0 + 1e-12);
  CHECK(sphere.samples.back().r == doctest::Approx(sphere.samples.front().r));

  CHECK(sphere.max_flux_drift() <= 1e-6);

  const auto rep = cmc::verify_profile_mean_curvature(sphere, {2, 1.0, 0.0});
  CHECK(rep.pass);
  CHECK(rep.max_deviation < 1e-4);
}

TEST_CASE("tampered slopes fail the mean curvature audit") {
  auto curve = cmc::integrate_profile({2, 0.5, 0.0}, 5.0, 1e-3);
  for (auto& s : curve.samples) s.du += 0.01 * std::cos(s.r);
  const auto rep = cmc::verify_profile_mean_curvature(curve, {2, 0.5, 0.0});
  CHECK(!rep.pass);
  CHECK(rep.max_deviation > 1e-4);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(cmc::integrate_profile({2, 0.5, 0.5}, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(cmc::integrate_profile({2, -0.5, 0.0}, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(cmc::integrate_profile({1, 0.5, 0.0}, 3.0), std::invalid_argument);
  // spheres need the supercritical regime
  CHECK_THROWS_AS(cmc::build_cmc_sphere({2, 0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("profile summary serialization") {
  const auto curve = cmc::integrate_profile({2, 1.0, 0.0}, 10.0, 1e-3);
  const auto j = curve.to_json();
  CHECK(j.at("regime") == "supercritical");
  CHECK(j.at("n") == 2);
  CHECK(j.at("H") == 1.0);
  CHECK(j.at("closed") == false);
  CHECK(j.contains("critical_radius"));
  CHECK(j.contains("max_flux_drift"));
  CHECK(j.at("samples").is_number_integer());
}
