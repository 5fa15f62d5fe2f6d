#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "curvlab/quadrature.hpp"
#include "curvlab/stochastic.hpp"

using namespace curvlab;
using stochastic::CriterionVerdict;
using stochastic::IntegralClass;
using warping::CurvatureProfile;

namespace {

simd::RatioTable constant_drift_table(double value, double r_max) {
  return stochastic::make_ratio_table([value](double) { return value; },
                                      [](double) { return 0.0; }, 0.0, 2.0, r_max,
                                      129, 129);
}

simd::EmParams base_params(const simd::RatioTable* table) {
  simd::EmParams em;
  em.r0 = 1.0;
  em.dt = 1e-3;
  em.sqrt_dt = std::sqrt(em.dt);
  em.n_steps = 1000;
  em.drift_scale = 0.5;
  em.explosion_radius = 1e3;
  em.absorb_radius = -1.0;
  em.reflect_at_zero = true;
  em.domain_max = table->r_max;
  em.seed = 42;
  em.table = table;
  return em;
}

}  // namespace

TEST_CASE("criterion verdicts on closed-form profiles") {
  const auto unit = stochastic::check_criterion(CurvatureProfile::constant(1.0));
  CHECK(unit.g0_positive);
  CHECK(unit.nondecreasing);
  CHECK(unit.integral_divergent == IntegralClass::divergent);
  CHECK(unit.overall == CriterionVerdict::Overall::complete);
  CHECK(std::isnan(unit.fitted_exponent));
  CHECK(unit.borbely_flag);

  const auto pl = stochastic::check_criterion(CurvatureProfile::power_log(1));
  CHECK(pl.integral_divergent == IntegralClass::divergent);
  CHECK(pl.overall == CriterionVerdict::Overall::complete);

  const auto quad =
      stochastic::check_criterion(CurvatureProfile::polynomial({1.0, 0.0, 1.0}));
  CHECK(quad.overall == CriterionVerdict::Overall::complete);

  const auto six =
      stochastic::check_criterion(CurvatureProfile::affine_power(1.0, 1.0, 6.0));
  CHECK(six.integral_divergent == IntegralClass::convergent);
  CHECK(six.overall == CriterionVerdict::Overall::incomplete_suspected);
}

TEST_CASE("criterion classifies tabulated tails by fitted exponent") {
  std::vector<double> ts, critical, fast, flat;
  for (int i = 0; i <= 2000; ++i) {
    const double t = 110.0 * i / 2000.0;
    ts.push_back(t);
    critical.push_back(1.0 + t * t);
    fast.push_back(std::pow(1.0 + t, 4.0));
    flat.push_back(2.0);
  }

  const auto crit =
      stochastic::check_criterion(CurvatureProfile::tabulated(ts, critical));
  CHECK(crit.integral_divergent == IntegralClass::inconclusive);
  CHECK(crit.overall == CriterionVerdict::Overall::inconclusive);
  CHECK(std::abs(crit.fitted_exponent - 2.0) <= 0.15);
  CHECK(crit.note.find("critical") != std::string::npos);

  const auto quartic =
      stochastic::check_criterion(CurvatureProfile::tabulated(ts, fast));
  CHECK(quartic.integral_divergent == IntegralClass::convergent);
  CHECK(quartic.overall == CriterionVerdict::Overall::incomplete_suspected);
  CHECK(std::abs(quartic.fitted_exponent - 4.0) <= 0.25);

  const auto level =
      stochastic::check_criterion(CurvatureProfile::tabulated(ts, flat));
  CHECK(level.integral_divergent == IntegralClass::divergent);
  CHECK(level.overall == CriterionVerdict::Overall::complete);
}

TEST_CASE("criterion failure modes") {
  std::vector<double> ts, dec;
  for (int i = 0; i <= 500; ++i) {
    const double t = 110.0 * i / 500.0;
    ts.push_back(t);
    dec.push_back(2.0 - 0.01 * t);
  }
  const auto d = stochastic::check_criterion(CurvatureProfile::tabulated(ts, dec));
  CHECK(d.g0_positive);
  CHECK(!d.nondecreasing);
  CHECK(d.overall == CriterionVerdict::Overall::inconclusive);

  const auto zero = stochastic::check_criterion(CurvatureProfile::constant(0.0));
  CHECK(!zero.g0_positive);
  CHECK(zero.integral_divergent == IntegralClass::inconclusive);
  CHECK(zero.overall == CriterionVerdict::Overall::inconclusive);
  CHECK(!zero.note.empty());

  CHECK_THROWS_AS(stochastic::check_criterion(CurvatureProfile::constant(1.0), 4.0),
                  std::invalid_argument);
}

TEST_CASE("limsup flag goes down for rapidly decaying profiles") {
  const auto slow = stochastic::check_criterion(CurvatureProfile::constant(1.0));
  CHECK(slow.borbely_flag);
  const auto fast =
      stochastic::check_criterion(CurvatureProfile::affine_power(1.0, 1.0, -8.0));
  CHECK(!fast.borbely_flag);
}

TEST_CASE("criterion serialization") {
  const auto v = stochastic::check_criterion(CurvatureProfile::constant(1.0));
  const auto j = v.to_json();
  CHECK(j.at("overall") == "complete");
  CHECK(j.at("integral") == "divergent");
  CHECK(j.at("g0_positive") == true);
  CHECK(j.at("fitted_exponent").is_null());
}

TEST_CASE("mean curvature growth gate") {
  const auto G = CurvatureProfile::constant(1.0);
  const auto ok = stochastic::check_mean_curvature_growth(
      [](double) { return 0.9; }, G, 1.0, {0.0, 10.0}, 64);
  CHECK(ok.holds);
  CHECK(ok.checked == 64);
  CHECK(!ok.first_violation_rho.has_value());

  const auto bad = stochastic::check_mean_curvature_growth(
      [](double) { return 1.1; }, G, 1.0, {0.0, 10.0}, 64);
  CHECK(!bad.holds);
  REQUIRE(bad.first_violation_rho.has_value());
  CHECK(*bad.first_violation_rho == 0.0);

  // a negative bound profile has no usable right side anywhere
  const auto neg = stochastic::check_mean_curvature_growth(
      [](double) { return 0.0; }, CurvatureProfile::constant(-1.0), 1.0,
      {0.0, 10.0}, 16);
  CHECK(!neg.holds);

  CHECK_THROWS_AS(stochastic::check_mean_curvature_growth(
                      [](double) { return 0.0; }, G, 0.0, {0.0, 1.0}, 16),
                  std::invalid_argument);
  CHECK_THROWS_AS(stochastic::check_mean_curvature_growth(
                      [](double) { return 0.0; }, G, 1.0, {0.0, 1.0}, 1),
                  std::invalid_argument);
}

TEST_CASE("driftless walk survives the whole horizon") {
  const auto table = constant_drift_table(0.0, 50.0);
  auto em = base_params(&table);
  const auto stats = stochastic::run_radial_em(em, 400);
  CHECK(stats.paths == 400);
  CHECK(stats.exploded == 0);
  CHECK(stats.survival_probability == 1.0);
  CHECK(std::isnan(stats.mean_exit_time_of_exploded));
  CHECK(stats.records.size() == 400);
  for (const auto& rec : stats.records) CHECK(rec.status == simd::PathStatus::alive);
  CHECK(stats.to_json().at("mean_exit_time_of_exploded").is_null());
}

TEST_CASE("identical parameters reproduce identical trajectories") {
  const auto table = constant_drift_table(0.3, 50.0);
  auto em = base_params(&table);
  em.seed = 1234;
  const auto a = stochastic::run_radial_em(em, 200);
  const auto b = stochastic::run_radial_em(em, 200);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].status == b.records[i].status);
    CHECK(a.records[i].exit_time == b.records[i].exit_time);
    CHECK(a.records[i].final_r == b.records[i].final_r);
  }
}

TEST_CASE("path results do not depend on the dispatch block size") {
  const auto table = constant_drift_table(0.3, 50.0);
  auto em = base_params(&table);
  em.seed = 99;
  const int n = 103;
  std::vector<simd::PathResult> full(n), split(n);
  simd::active_kernels().em_paths(em, 0, n, full.data());
  simd::active_kernels().em_paths(em, 0, 17, split.data());
  simd::active_kernels().em_paths(em, 17, n - 17, split.data() + 17);
  for (int i = 0; i < n; ++i) {
    CHECK(full[i].status == split[i].status);
    CHECK(full[i].exit_time == split[i].exit_time);
    CHECK(full[i].final_r == split[i].final_r);
  }
}

TEST_CASE("strong inward drift absorbs every path") {
  const auto table = constant_drift_table(-5.0, 50.0);
  auto em = base_params(&table);
  em.reflect_at_zero = false;
  em.absorb_radius = 0.9;
  em.n_steps = 5000;
  const auto stats = stochastic::run_radial_em(em, 300);
  CHECK(stats.absorbed == 300);
  CHECK(stats.exploded == 0);
  CHECK(stats.survival_probability == 1.0);
  for (const auto& rec : stats.records) {
    CHECK(rec.status == simd::PathStatus::absorbed);
    CHECK(rec.exit_time > 0.0);
    CHECK(rec.final_r <= 0.9);
  }
}

TEST_CASE("strong outward drift exits the tabulated domain") {
  const auto table = constant_drift_table(5.0, 3.0);
  auto em = base_params(&table);
  em.domain_max = 3.0;
  em.n_steps = 5000;
  const auto stats = stochastic::run_radial_em(em, 300);
  CHECK(stats.domain_exits == 300);
  CHECK(stats.exploded == 0);
  for (const auto& rec : stats.records) {
    CHECK(rec.status == simd::PathStatus::domain_exit);
    CHECK(rec.final_r >= 3.0);
  }
}

TEST_CASE("survival curve from synthetic exit records") {
  stochastic::ExplosionStats stats;
  stats.paths = 4;
  stats.T = 5.0;
  stats.exploded = 2;
  stats.records.resize(4);
  stats.records[0] = {simd::PathStatus::exploded, 1.0, 1e3};
  stats.records[1] = {simd::PathStatus::exploded, 3.0, 1e3};
  stats.records[2] = {simd::PathStatus::absorbed, 2.0, 0.1};
  stats.records[3] = {simd::PathStatus::alive, 0.0, 1.4};
  const auto curve =
      stochastic::survival_curve(stats, {0.0, 0.5, 1.0, 2.5, 3.0, 5.0});
  REQUIRE(curve.size() == 6);
  CHECK(curve[0].survival == 1.0);
  CHECK(curve[1].survival == 1.0);
  CHECK(curve[2].survival == 0.75);
  CHECK(curve[3].survival == 0.75);
  CHECK(curve[4].survival == 0.5);
  CHECK(curve[5].survival == 0.5);
  for (std::size_t i = 1; i < curve.size(); ++i)
    CHECK(curve[i].survival <= curve[i - 1].survival);

  CHECK_THROWS_AS(stochastic::survival_curve(stats, {1.0, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(stochastic::survival_curve(stats, {6.0}), std::invalid_argument);
}

TEST_CASE("drift table reproduces smooth functions and clamps below") {
  const auto table = stochastic::make_ratio_table(
      [](double r) { return r * r; }, [](double r) { return 2.0 * r; }, 0.5, 2.0,
      10.0, 257, 257);
  for (double r : {0.5, 0.7, 1.3, 2.0, 3.7, 6.2, 9.9})
    CHECK(table.eval(r) == doctest::Approx(r * r).epsilon(1e-12));
  CHECK(table.eval(0.2) == table.eval(0.5));
  CHECK(table.eval(0.0) == 0.25);
  CHECK(table.clamp_lo == 0.5);
  CHECK(table.r_max == 10.0);
}

TEST_CASE("model registry") {
  const auto names = stochastic::model_names();
  REQUIRE(names.size() == 2);
  CHECK(names[0] == "sinh");
  CHECK(names[1] == "exp_r4");

  const auto& sinh_model = stochastic::model_by_name("sinh");
  CHECK(sinh_model.ratio(2.0) == doctest::Approx(1.0 / std::tanh(2.0)).epsilon(1e-12));
  CHECK(sinh_model.reflect_at_zero);

  const auto& exp_model = stochastic::model_by_name("exp_r4");
  CHECK(exp_model.ratio(1.5) == doctest::Approx(4.0 * 1.5 * 1.5 * 1.5));
  CHECK(exp_model.criterion_G(2.0) == doctest::Approx(1073.0));

  CHECK_THROWS_WITH_AS(stochastic::model_by_name("nope"),
                       doctest::Contains("available"), std::invalid_argument);
}

TEST_CASE("hyperbolic-plane diffusion never explodes on a short horizon") {
  const auto w = warping::solve_jacobi(CurvatureProfile::constant(1.0), 0.0, 0.0,
                                       1.0, {0.0, 40.0});
  const auto stats =
      stochastic::simulate_radial_diffusion(w, 1, 1.0, 2.0, 1e-3, 1000, 5);
  CHECK(stats.paths == 1000);
  CHECK(stats.exploded == 0);
  CHECK(stats.domain_exits == 0);
  CHECK(stats.survival_probability == 1.0);
}

TEST_CASE("scale-speed integrals certify both model verdicts") {
  // non-explosive side: with h = sinh the normalized volume integral
  // (1/h) int_0^x 2 h dt equals 2 tanh(x/2), bounded away from zero, so its
  // primitive diverges
  for (double x : {2.0, 3.0, 4.0}) {
    const double vol =
        adaptive_simpson([](double t) { return 2.0 * std::sinh(t); }, 0.0, x, 1e-12);
    const double vprime = vol / std::sinh(x);
    CHECK(vprime == doctest::Approx(2.0 * std::tanh(x / 2.0)).epsilon(1e-9));
    CHECK(vprime >= 1.5);
  }
  const auto sinh_verdict =
      stochastic::check_criterion(stochastic::model_by_name("sinh").criterion_G);
  CHECK(sinh_verdict.overall == CriterionVerdict::Overall::complete);

  // explosive side: with h = exp(r^4) the same quantity decays like 1/(2x^3),
  // so its primitive converges
  for (double x : {2.0, 2.5, 3.0}) {
    const double huge = 2.0 * std::exp(x * x * x * x);
    const double vol = adaptive_simpson(
        [](double t) { return 2.0 * std::exp(t * t * t * t); }, 0.0, x,
        huge * 1e-13);
    const double scaled = vol * std::exp(-x * x * x * x) * 2.0 * x * x * x;
    CHECK(scaled >= 1.0);
    CHECK(scaled <= 1.15);
  }
  const auto exp_verdict =
      stochastic::check_criterion(stochastic::model_by_name("exp_r4").criterion_G);
  CHECK(exp_verdict.overall == CriterionVerdict::Overall::incomplete_suspected);
}

TEST_CASE("explosion fraction is stable under time-step halving") {
  stochastic::SimParams p;
  p.fiber_dim = 1;
  p.r0 = 1.0;
  p.T = 5.0;
  p.dt = 1e-3;
  p.paths = 800;
  p.seed = 7;
  const auto& model = stochastic::model_by_name("exp_r4");
  const auto coarse = stochastic::simulate_model(model, p);
  p.dt = 5e-4;
  const auto fine = stochastic::simulate_model(model, p);
  const double fc = static_cast<double>(coarse.exploded) / coarse.paths;
  const double ff = static_cast<double>(fine.exploded) / fine.paths;
  CHECK(fc >= 0.85);
  CHECK(ff >= 0.85);
  CHECK(std::abs(fc - ff) <= 0.05);
  // every explosion happens well before the horizon
  CHECK(coarse.mean_exit_time_of_exploded < 2.0);
}
