#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvlab/profile.hpp"
#include "curvlab/simd/kernels.hpp"
#include "curvlab/warping.hpp"

namespace curvlab::stochastic {

enum class IntegralClass { divergent, convergent, inconclusive };
const char* integral_class_name(IntegralClass c);

// Completeness test on a radial curvature bound profile: positive value at
// the origin, sampled monotonicity, and divergence of the inverse-square-root
// tail integral. The limsup flag is informational and never feeds the
// overall verdict.
struct CriterionVerdict {
  bool g0_positive = false;
  bool nondecreasing = false;
  IntegralClass integral_divergent = IntegralClass::inconclusive;
  bool borbely_flag = false;
  enum class Overall { complete, incomplete_suspected, inconclusive } overall =
      Overall::inconclusive;
  // Tail exponent from the log-log fit; NaN when the classification came
  // from the profile's closed form instead.
  double fitted_exponent = 0.0;
  std::string note;
  nlohmann::json to_json() const;
};
const char* overall_name(CriterionVerdict::Overall o);

CriterionVerdict check_criterion(const warping::CurvatureProfile& G,
                                 double tail_horizon = 100.0);

struct GrowthReport {
  bool holds = true;
  int checked = 0;
  std::optional<double> first_violation_rho;
  double bound_constant = 1.0;
  nlohmann::json to_json() const;
};

// Pointwise test of |H(rho)| <= B sqrt(G(rho)) on a uniform sample grid. A
// negative G value makes the right side undefined and counts as a violation.
GrowthReport check_mean_curvature_growth(const std::function<double(double)>& H_profile,
                                         const warping::CurvatureProfile& G, double B,
                                         warping::Interval range = {0.0, 50.0},
                                         int samples = 2048);

struct SimParams {
  int fiber_dim = 1;  // ambient dimension minus one
  double r0 = 1.0;
  double T = 5.0;
  double dt = 1e-3;
  int paths = 10000;
  std::uint64_t seed = 42;
  double explosion_radius = 1e3;
};

struct ExplosionStats {
  int paths = 0;
  double T = 0.0;
  int exploded = 0;
  int absorbed = 0;
  int domain_exits = 0;
  double survival_probability = 1.0;  // 1 - exploded/paths
  double mean_exit_time_of_exploded = 0.0;  // NaN when no path exploded
  std::uint64_t seed = 0;
  std::vector<simd::PathResult> records;  // one per path, in path order
  nlohmann::json to_json() const;
};

// Euler-Maruyama on dr = drift_scale * table(r) dt + dW against a prepared
// drift table. The boundary policy lives in `em`: reflection at zero or
// absorption at a positive inner radius.
ExplosionStats run_radial_em(const simd::EmParams& em, int paths);

// Radial diffusion of the model with warping function w. The drift factor
// h'/h is tabulated over the solved positivity window; a pole-smooth seed
// (h(0)=0) reflects at the origin, anything else absorbs at the lower
// positivity edge. Paths leaving the tabulated window before exploding are
// reported as domain exits.
ExplosionStats simulate_radial_diffusion(const warping::WarpingFunction& w, int fiber_dim,
                                         double r0, double T, double dt, int paths,
                                         std::uint64_t seed,
                                         double explosion_radius = 1e3);

struct SurvivalPoint {
  double T = 0.0;
  double survival = 1.0;
};

// Survival estimates at each requested time, read off one simulation's exit
// records. Times must be nondecreasing and within the simulated horizon.
std::vector<SurvivalPoint> survival_curve(const ExplosionStats& stats,
                                          const std::vector<double>& times);

// Closed-form reference model for the simulator and the criterion.
struct RadialModel {
  std::string name;
  std::function<double(double)> ratio;        // h'/h
  std::function<double(double)> ratio_deriv;  // (h'/h)'
  double clamp_lo = 0.0;  // drift frozen below this radius
  double split = 2.0;     // fine/coarse table boundary
  double r_max = 60.0;    // table edge, also the simulation domain edge
  bool reflect_at_zero = true;
  warping::CurvatureProfile criterion_G = warping::CurvatureProfile::constant(1.0);
};

// "sinh" (hyperbolic plane family) and "exp_r4" (explosive superexponential
// volume growth).
const RadialModel& model_by_name(const std::string& name);
std::vector<std::string> model_names();

// Tabulates fn over [clamp_lo, split] finely and [split, r_max] coarsely.
simd::RatioTable make_ratio_table(const std::function<double(double)>& fn,
                                  const std::function<double(double)>& fn_deriv,
                                  double clamp_lo, double split, double r_max,
                                  int fine_nodes = 4097, int coarse_nodes = 4097);

simd::RatioTable make_model_table(const RadialModel& model);

// Simulation front end for a named model: builds the drift table and the
// stepper parameters, then runs the active kernel set.
ExplosionStats simulate_model(const RadialModel& model, const SimParams& p);

}  // namespace curvlab::stochastic
