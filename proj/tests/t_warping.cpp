#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "curvlab/rng.hpp"
#include "curvlab/warping.hpp"

using namespace curvlab;
using warping::CurvatureProfile;
using warping::Interval;

namespace {

const double kPi = std::acos(-1.0);

warping::JacobiOptions tight() {
  warping::JacobiOptions o;
  o.rel_tol = 1e-12;
  o.abs_tol = 1e-14;
  o.max_step = 0.005;
  return o;
}

double max_err(const warping::WarpingFunction& w, double lo, double hi,
               double (*ref)(double)) {
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = lo + (hi - lo) * i / 1000.0;
    worst = std::max(worst, std::abs(w.h(t) - ref(t)));
  }
  return worst;
}

}  // namespace

TEST_CASE("negative curvature bound gives the circular solution") {
  const auto w = warping::solve_jacobi(CurvatureProfile::constant(-1.0), 0.0, 0.0, 1.0,
                                       {0.0, 5.0}, tight());
  CHECK(max_err(w, 0.0, 5.0, [](double t) { return std::sin(t); }) <= 1e-8);
  REQUIRE(w.focal_radius().has_value());
  CHECK(std::abs(*w.focal_radius() - kPi) <= 1e-8);
  CHECK(w.positivity_interval().lo == 0.0);
  CHECK(std::abs(w.positivity_interval().hi - kPi) <= 1e-8);
  // derivative channel tracks cos
  CHECK(std::abs(w.dh(2.0) - std::cos(2.0)) <= 1e-8);
  CHECK(w.max_scaled_residual() <= 1e-8);
}

TEST_CASE("unit curvature bound gives hyperbolic sine and exponential solutions") {
  const auto ws = warping::solve_jacobi(CurvatureProfile::constant(1.0), 0.0, 0.0, 1.0,
                                        {0.0, 5.0}, tight());
  CHECK(max_err(ws, 0.0, 5.0, [](double t) { return std::sinh(t); }) <= 1e-8);
  CHECK(!ws.focal_radius().has_value());
  CHECK(std::abs(ws.ratio(1.0) - std::cosh(1.0) / std::sinh(1.0)) <= 1e-9);
  CHECK(std::abs(ws.ratio(2.5) - std::cosh(2.5) / std::sinh(2.5)) <= 1e-9);
  CHECK_THROWS_AS(ws.ratio(0.0), std::domain_error);

  const auto we = warping::solve_jacobi(CurvatureProfile::constant(1.0), 0.0, 1.0, 1.0,
                                        {0.0, 5.0}, tight());
  CHECK(max_err(we, 0.0, 5.0, [](double t) { return std::exp(t); }) <= 1e-8);
  // equal value and slope stay bitwise equal through every step, so the
  // log-derivative is the exact constant 1; the closed-form bound constants
  // downstream rely on this.
  CHECK(we.ratio(0.0) == 1.0);
  CHECK(we.ratio(1.7) == 1.0);
  CHECK(we.ratio(5.0) == 1.0);
}

TEST_CASE("flat profile gives linear solutions") {
  const auto w = warping::solve_jacobi(CurvatureProfile::constant(0.0), 0.0, 0.0, 1.0,
                                       {0.0, 5.0}, tight());
  CHECK(max_err(w, 0.0, 5.0, [](double t) { return t; }) <= 1e-10);
  const auto wc = warping::solve_jacobi(CurvatureProfile::constant(0.0), 0.0, 1.0, 0.0,
                                        {0.0, 5.0}, tight());
  CHECK(max_err(wc, 0.0, 5.0, [](double) { return 1.0; }) <= 1e-10);
}

TEST_CASE("stiffer oscillation halves the focal radius") {
  const auto w = warping::solve_jacobi(CurvatureProfile::constant(-4.0), 0.0, 0.0, 1.0,
                                       {0.0, 3.0}, tight());
  CHECK(max_err(w, 0.0, 3.0, [](double t) { return 0.5 * std::sin(2.0 * t); }) <= 1e-8);
  REQUIRE(w.focal_radius().has_value());
  CHECK(std::abs(*w.focal_radius() - kPi / 2.0) <= 1e-8);
}

TEST_CASE("seed validation") {
  CHECK_THROWS_AS(
      warping::solve_jacobi(CurvatureProfile::constant(1.0), 0.0, 0.0, 0.0, {0.0, 1.0}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      warping::solve_jacobi(CurvatureProfile::constant(1.0), 0.0, -1.0, 0.0, {0.0, 1.0}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      warping::solve_jacobi(CurvatureProfile::constant(1.0), 2.0, 1.0, 0.0, {0.0, 1.0}),
      std::invalid_argument);
}

TEST_CASE("log-derivative infimum sits at the right endpoint for decreasing ratios") {
  const auto w = warping::solve_jacobi(CurvatureProfile::constant(1.0), 0.0, 0.0, 1.0,
                                       {0.0, 5.0}, tight());
  const auto inf = warping::inf_log_derivative(w, {0.5, 2.0});
  CHECK(inf.argmin == 2.0);
  CHECK(inf.value == w.ratio(2.0));
  CHECK(std::abs(inf.value - std::cosh(2.0) / std::sinh(2.0)) <= 1e-9);

  CHECK_THROWS_AS(warping::inf_log_derivative(w, {-1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(warping::inf_log_derivative(w, {0.0, 2.0}), std::invalid_argument);
}

TEST_CASE("log-derivative infimum on a non-monotone profile is attained") {
  std::vector<double> ts, gs;
  for (int i = 0; i <= 200; ++i) {
    const double t = -0.5 + 4.0 * i / 200.0;
    ts.push_back(t);
    gs.push_back(0.5 + 0.4 * std::sin(3.0 * t));
  }
  const auto G = CurvatureProfile::tabulated(ts, gs);
  const auto w = warping::solve_jacobi(G, 0.0, 1.0, 0.2, {-0.25, 3.5});
  const auto inf = warping::inf_log_derivative(w, {0.1, 3.0});
  CHECK(inf.value == w.ratio(inf.argmin));
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.1 + (3.0 - 0.1) * i / 100.0;
    CHECK(inf.value <= w.ratio(t) + 1e-12);
  }
}

TEST_CASE("ratio ordering follows the profile ordering") {
  const auto w1 = warping::solve_jacobi(CurvatureProfile::constant(0.0), 0.0, 1.0, 1.0,
                                        {0.0, 3.0});
  const auto w2 = warping::solve_jacobi(CurvatureProfile::constant(1.0), 0.0, 1.0, 1.0,
                                        {0.0, 3.0});
  const auto rep = warping::sturm_compare(w1, w2);
  CHECK(rep.preconditions_ok);
  CHECK(rep.pass);
  CHECK(rep.max_violation <= 1e-9);

  const auto swapped = warping::sturm_compare(w2, w1);
  CHECK(!swapped.preconditions_ok);
  CHECK(!swapped.pass);

  const auto w3 = warping::solve_jacobi(CurvatureProfile::constant(1.0), 0.0, 1.0, 0.5,
                                        {0.0, 3.0});
  const auto mismatched = warping::sturm_compare(w1, w3);
  CHECK(!mismatched.preconditions_ok);
}

TEST_CASE("ratio ordering across seeded random profile pairs") {
  const std::uint64_t key = rng_path_key(2024, 0);
  std::uint64_t ctr = 0;
  auto draw = [&] { return rng_u01(rng_draw_bits(key, ctr++)); };
  for (int pair = 0; pair < 8; ++pair) {
    const double base = -0.2 + 1.0 * draw();
    const double amp = 0.3 * draw();
    const double freq = 1.0 + 2.0 * draw();
    const double gap = 0.05 + draw();
    const double lam = 0.8 * draw();
    std::vector<double> ts, g1, g2;
    for (int i = 0; i <= 160; ++i) {
      const double t = -0.5 + 4.0 * i / 160.0;
      ts.push_back(t);
      g1.push_back(base + amp * std::sin(freq * t));
      g2.push_back(g1.back() + gap);
    }
    const auto lo = CurvatureProfile::tabulated(ts, g1);
    const auto hi = CurvatureProfile::tabulated(ts, g2);
    const auto w1 = warping::solve_jacobi(lo, 0.0, 1.0, lam, {0.0, 3.0});
    const auto w2 = warping::solve_jacobi(hi, 0.0, 1.0, lam, {0.0, 3.0});
    const auto rep = warping::sturm_compare(w1, w2);
    CHECK(rep.preconditions_ok);
    CHECK(rep.max_violation <= 1e-7);
    CHECK(rep.pass);
  }
}

TEST_CASE("comparison fails when the zero seed is matched against a positive one") {
  const auto w1 = warping::solve_jacobi(CurvatureProfile::constant(0.0), 0.0, 0.0, 1.0,
                                        {0.0, 3.0});
  const auto w2 = warping::solve_jacobi(CurvatureProfile::constant(1.0), 0.0, 1.0, 1.0,
                                        {0.0, 3.0});
  const auto rep = warping::sturm_compare(w1, w2);
  CHECK(!rep.preconditions_ok);
}

TEST_CASE("antiderivative barrier from the hyperbolic solution") {
  const auto w = warping::solve_jacobi(CurvatureProfile::constant(1.0), 0.0, 0.0, 1.0,
                                       {-0.5, 5.0}, tight());
  const auto b = warping::build_barrier(w, 0.0);
  for (double rho : {-0.3, 0.4, 0.7, 2.5, 4.0}) {
    CHECK(b.g(rho) == doctest::Approx(std::cosh(rho) - 1.0).epsilon(1e-9));
    CHECK(b.dg(rho) == doctest::Approx(std::sinh(rho)).epsilon(1e-9));
  }
  CHECK(std::abs(b.ratio(2.0) - std::cosh(2.0) / std::sinh(2.0)) <= 1e-9);
}

TEST_CASE("barrier truncation freezes values past the window") {
  const auto w = warping::solve_jacobi(CurvatureProfile::constant(1.0), 0.0, 0.0, 1.0,
                                       {-0.5, 5.0}, tight());
  warping::TruncationSpec trunc;
  trunc.hi = 1.0;
  const auto b = warping::build_barrier(w, 0.0, trunc);
  CHECK(b.g(2.0) == b.g(1.0));
  CHECK(b.g(0.5) == doctest::Approx(std::cosh(0.5) - 1.0).epsilon(1e-9));
  CHECK(b.dg(2.0) == 0.0);
  CHECK(b.dg(1.0) == doctest::Approx(std::sinh(1.0)).epsilon(1e-9));
  CHECK(b.h(2.0) == doctest::Approx(std::sinh(2.0)).epsilon(1e-9));
}

TEST_CASE("closed wedge barrier forms") {
  const auto flat = warping::wedge_barrier(0.0);
  CHECK(flat.g(3.0) == 4.5);
  CHECK(flat.dg(2.0) == 2.0);
  CHECK(flat.ratio(2.0) == 0.5);
  CHECK_THROWS_AS(flat.ratio(0.0), std::domain_error);

  const auto curved = warping::wedge_barrier(2.0);
  CHECK(curved.g(0.0) == doctest::Approx(0.5));
  CHECK(curved.g(1.0) == doctest::Approx(std::cosh(2.0) / 2.0).epsilon(1e-12));
  CHECK(curved.dg(1.0) == doctest::Approx(std::sinh(2.0)).epsilon(1e-12));
  CHECK(curved.ratio(1.0) == doctest::Approx(2.0 / std::tanh(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(warping::wedge_barrier(-1.0), std::invalid_argument);
}

TEST_CASE("sample table marks the log-derivative column outside positivity") {
  const auto w = warping::solve_jacobi(CurvatureProfile::constant(-1.0), 0.0, 0.0, 1.0,
                                       {0.0, 5.0});
  std::ostringstream os;
  warping::write_warping_csv(w, os, 101);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,h,dh,ratio");
  int rows = 0, with_ratio = 0, without_ratio = 0;
  while (std::getline(is, line)) {
    ++rows;
    if (line.back() == ',')
      ++without_ratio;
    else
      ++with_ratio;
  }
  CHECK(rows == 101);
  CHECK(with_ratio > 0);
  CHECK(without_ratio > 0);
}
