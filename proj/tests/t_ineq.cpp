#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "curvlab/ineq.hpp"

using namespace curvlab;
using ineq::VerifyOptions;

namespace {

double spacing(const ineq::ImmersionPatch& patch, int grid) {
  const double da = (patch.a_range.hi - patch.a_range.lo) / (grid - 1);
  const double db = (patch.b_range.hi - patch.b_range.lo) / (grid - 1);
  return std::max(da, db);
}

}  // namespace

TEST_CASE("distance gradients are unit length on every chart") {
  for (const auto& name : ineq::chart_names()) {
    const auto& chart = ineq::chart_by_name(name);
    const auto rep = ineq::check_eikonal(chart, 8, 1e-12);
    CHECK(rep.pass);
    CHECK(rep.max_abs_deviation <= 1e-12);
    CHECK(rep.samples == 8 * 8 * 8);
  }
  CHECK_THROWS_AS(ineq::chart_by_name("nope"), std::invalid_argument);
  CHECK_THROWS_AS(ineq::patch_by_name("euclidean", "nope"), std::invalid_argument);
}

TEST_CASE("flat stencil reproduces the Laplacian of a quadratic") {
  const auto& chart = ineq::chart_by_name("euclidean");
  const auto patch = ineq::patch_by_name("euclidean", "plane");
  const int n = 33;
  std::vector<double> f(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double a =
        patch.a_range.lo + (patch.a_range.hi - patch.a_range.lo) * i / (n - 1);
    for (int j = 0; j < n; ++j) f[static_cast<std::size_t>(i) * n + j] = a * a;
  }
  const auto lap = ineq::discrete_laplace_beltrami(chart, patch, n, n, f);
  REQUIRE(lap.size() == f.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = lap[static_cast<std::size_t>(i) * n + j];
      const bool interior = i >= 2 && i + 2 < n && j >= 2 && j + 2 < n;
      if (interior)
        CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
      else
        CHECK(std::isnan(v));
    }
}

TEST_CASE("sphere cap geometry matches round-sphere facts") {
  const auto& chart = ineq::chart_by_name("euclidean");
  const auto patch = ineq::patch_by_name("euclidean", "sphere-cap");
  const int n = 81;
  const auto geo = ineq::build_geometry(chart, patch, n, n);
  REQUIRE(geo.na == n);

  // unit-sphere mean curvature is 1 everywhere
  for (int i = 1; i + 1 < n; ++i)
    for (int j = 1; j + 1 < n; ++j)
      CHECK(std::abs(geo.mean_h[static_cast<std::size_t>(i) * n + j] - 1.0) <= 5e-3);
  CHECK(std::isnan(geo.mean_h[0]));

  // the height function is a spherical harmonic: Lap z = -2 z
  const auto lap = ineq::discrete_laplace_beltrami(chart, patch, n, n, geo.rho);
  for (int i = 2; i + 2 < n; ++i)
    for (int j = 2; j + 2 < n; ++j) {
      const std::size_t id = static_cast<std::size_t>(i) * n + j;
      CHECK(std::abs(lap[id] + 2.0 * geo.rho[id]) <= 5e-3);
    }

  CHECK_THROWS_AS(ineq::build_geometry(chart, patch, 4, 10), std::invalid_argument);
}

TEST_CASE("equality configurations sit on the comparison boundary") {
  struct Case {
    const char* chart;
    const char* patch;
  };
  for (const Case& c : {Case{"h3-horospheres", "equidistant"},
                        Case{"h2xr-horocylinder", "equidistant"}}) {
    const auto& chart = ineq::chart_by_name(c.chart);
    const auto patch = ineq::patch_by_name(c.chart, c.patch);
    VerifyOptions opts;
    opts.grid = 64;
    const auto rep = ineq::verify_inequality_direct(chart, patch, opts);
    CHECK(rep.pass);
    CHECK(std::abs(rep.margin_min) <= 0.02);
    const double h = spacing(patch, opts.grid);
    CHECK(rep.max_abs_laplacian <= 10.0 * h * h);
    CHECK(std::isnan(rep.refined_margin_min));
  }

  // the horosphere chart has certificates for both directions
  const auto& h3 = ineq::chart_by_name("h3-horospheres");
  const auto patch = ineq::patch_by_name("h3-horospheres", "equidistant");
  VerifyOptions opts;
  opts.grid = 64;
  const auto rev = ineq::verify_inequality_reverse(h3, patch, opts);
  CHECK(rev.pass);
  CHECK(std::abs(rev.margin_min) <= 0.02);
}

TEST_CASE("flat plane is the degenerate equality case of both directions") {
  const auto& chart = ineq::chart_by_name("euclidean");
  const auto patch = ineq::patch_by_name("euclidean", "plane");
  VerifyOptions opts;
  opts.grid = 48;
  const auto d = ineq::verify_inequality_direct(chart, patch, opts);
  const auto r = ineq::verify_inequality_reverse(chart, patch, opts);
  CHECK(d.pass);
  CHECK(r.pass);
  CHECK(std::abs(d.margin_min) <= 1e-9);
  CHECK(std::abs(r.margin_min) <= 1e-9);
}

TEST_CASE("tilted graph passes the reverse comparison with real slack") {
  const auto& chart = ineq::chart_by_name("h2xr-horocylinder");
  const auto patch = ineq::patch_by_name("h2xr-horocylinder", "tilted");
  VerifyOptions opts;
  opts.grid = 128;
  opts.refine = true;
  const auto rep = ineq::verify_inequality_reverse(chart, patch, opts);
  CHECK(rep.pass);
  CHECK(rep.margin_min >= -1e-2);
  CHECK(rep.margin_min > 0.3);  // continuum slack is 1/(1+alpha^2) + 2|H|
  CHECK(std::isfinite(rep.refined_margin_min));
  CHECK(rep.refined_margin_min > 0.3);

  // violations must not grow under refinement
  const double v_coarse = std::max(0.0, -rep.margin_min);
  const double v_fine = std::max(0.0, -rep.refined_margin_min);
  CHECK(v_fine <= std::max(0.5 * v_coarse, 1e-12));
}

TEST_CASE("mis-scaled mean curvature flips the sphere cap verdict") {
  const auto& chart = ineq::chart_by_name("euclidean");
  const auto patch = ineq::patch_by_name("euclidean", "sphere-cap");
  VerifyOptions opts;
  opts.grid = 96;

  const auto honest = ineq::verify_inequality_reverse(chart, patch, opts);
  CHECK(honest.pass);
  // margin 2(1 - z) with z up to 0.9 on this cap
  CHECK(honest.margin_min >= 0.1);
  CHECK(honest.margin_min <= 0.3);

  opts.mean_curvature_scale = 0.5;
  const auto rigged = ineq::verify_inequality_reverse(chart, patch, opts);
  CHECK(!rigged.pass);
  CHECK(rigged.margin_min <= -0.5);
}

TEST_CASE("verification report serialization") {
  const auto& chart = ineq::chart_by_name("euclidean");
  const auto patch = ineq::patch_by_name("euclidean", "plane");
  VerifyOptions opts;
  opts.grid = 32;
  const auto rep = ineq::verify_inequality_direct(chart, patch, opts);
  const auto j = rep.to_json();
  CHECK(j.at("chart") == "euclidean");
  CHECK(j.at("patch") == "plane");
  CHECK(j.at("direction") == "direct");
  CHECK(j.at("grid") == 32);
  CHECK(j.at("pass") == true);
  CHECK(j.at("refined_margin_min").is_null());
  CHECK(j.contains("margin_min"));
  CHECK(j.contains("max_abs_laplacian"));
}
