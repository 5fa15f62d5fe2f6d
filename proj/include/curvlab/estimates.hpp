#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curvlab/warping.hpp"

namespace curvlab::estimates {

enum class TheoremTag {
  product_tube,
  codim_one_tube,
  submersion,
  submersion_over_hyperbolic,
  horocylinder,
  mean_convex_side,
  wedge
};

const char* tag_name(TheoremTag t);
TheoremTag tag_from_name(const std::string& name);

enum class AmbientKind {
  warped_model,
  product_with_flat,
  submersion,
  hyperbolic_product,
  wedge
};

// One configured estimate instance. Only the fields the chosen calculator
// reads are meaningful; the JSON loader fills the rest with defaults.
struct Scenario {
  TheoremTag theorem = TheoremTag::product_tube;
  AmbientKind ambient = AmbientKind::product_with_flat;

  warping::CurvatureProfile G = warping::CurvatureProfile::constant(1.0);
  int fiber_dim = 1;  // warped_model ambient dimension minus one
  int n = 2;          // hyperbolic factor / ambient dimension parameter
  int ell = 0;        // flat-factor or fiber dimension
  double kappa = 0.0; // fiber mean curvature (single value doubles as an inf)
  bool over_hyperbolic = false;

  double wedge_c = 0.0;
  double aperture = 0.5;
  double wedge_t0 = 1.0;  // horizon of the quadratic-barrier construction (c = 0)

  int m = 2;          // submanifold dimension
  double d = 1.0;     // tube depth
  // Initial log-derivative of the comparison solution; disengaged means the
  // infinite seed h(0)=0, h'(0)=1.
  std::optional<double> lambda0 = 1.0;
  std::optional<double> d0;               // geodesic-cylinder barrier radius
  std::optional<warping::Interval> tube;  // codimension-one tube, default [0, d]
};

struct EstimateReport {
  TheoremTag theorem = TheoremTag::product_tube;
  double bound = 0.0;
  bool strict = false;
  double attaining_point = 0.0;  // NaN when the formula has no infimum point
  std::string note;
  nlohmann::json inputs;  // scenario echo
  nlohmann::json to_json() const;
};

// Dispatch on s.theorem.
EstimateReport evaluate(const Scenario& s);

EstimateReport bound_product_tube(const Scenario& s);
EstimateReport bound_codim_one_tube(const Scenario& s);
EstimateReport bound_submersion(const Scenario& s);
EstimateReport bound_submersion_over_hyperbolic(const Scenario& s);
EstimateReport bound_horocylinder(const Scenario& s);
EstimateReport bound_mean_convex_side(const Scenario& s);
EstimateReport bound_wedge(const Scenario& s);

struct ScalarCurvatureReport {
  bool holds = true;
  std::optional<double> first_violation_rho;
  int checked = 0;
  double threshold = 10.0;
  nlohmann::json to_json() const;
};

// Checks s >= -c^2 rho^2 log(rho + 1) on the samples with rho at or beyond
// the threshold; smaller radii are outside the asymptotic regime and skipped.
ScalarCurvatureReport check_scalar_curvature_condition(
    const std::vector<std::pair<double, double>>& rho_s_samples, double c,
    double threshold = 10.0);

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);

}  // namespace curvlab::estimates
