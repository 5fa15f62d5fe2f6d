#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvlab/profile.hpp"
#include "curvlab/warping.hpp"

namespace curvlab::ineq {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;
using Christoffel = std::array<Mat3, 3>;  // [k][i][j] upper index first

// Closed-form three-dimensional ambient model with a signed distance
// function to a fixed reference hypersurface. Each registry entry carries
// hand-derived certificates: a curvature profile and initial Hessian bound
// for the direct comparison direction (ambient curvature bounded below,
// reference Hessian bounded above) and one for the reverse direction (both
// bounds flipped). The derivations live next to the registry definitions.
struct AmbientChart {
  std::string name;
  std::function<Mat3(const Vec3&)> metric;
  std::function<Christoffel(const Vec3&)> christoffel;
  std::function<double(const Vec3&)> rho;
  std::function<Vec3(const Vec3&)> drho;  // coordinate partials of rho
  double equidistant_mean_curvature = 0.0;  // constant across levels here

  warping::CurvatureProfile direct_G = warping::CurvatureProfile::constant(0.0);
  double direct_lambda0 = 0.0;
  warping::CurvatureProfile reverse_G = warping::CurvatureProfile::constant(0.0);
  double reverse_lambda0 = 0.0;

  std::array<warping::Interval, 3> sample_box;  // region for pointwise chart checks
};

// "h3-horospheres", "h2xr-horocylinder", "euclidean".
const AmbientChart& chart_by_name(const std::string& name);
std::vector<std::string> chart_names();

struct EikonalReport {
  double max_abs_deviation = 0.0;
  int samples = 0;
  double tol = 1e-8;
  bool pass = false;
  nlohmann::json to_json() const;
};

// |grad rho| = 1 sampled on a lattice over the chart's box.
EikonalReport check_eikonal(const AmbientChart& chart, int samples_per_axis = 10,
                            double tol = 1e-8);

struct ImmersionPatch {
  std::string name;
  std::function<Vec3(double, double)> phi;
  warping::Interval a_range{0.0, 1.0};
  warping::Interval b_range{0.0, 1.0};
};

ImmersionPatch patch_by_name(const std::string& chart_name, const std::string& patch_name,
                             double alpha = 1.0);
std::vector<std::string> patch_names(const std::string& chart_name);

// Discrete surface data on an na x nb parameter grid: the signed distance
// per node, the norm of the mean curvature vector on interior nodes, and
// the divergence-form coefficients of the induced Laplacian.
struct PatchGeometry {
  int na = 0, nb = 0;
  double da = 0.0, db = 0.0;
  std::vector<double> rho;     // na*nb
  std::vector<double> mean_h;  // na*nb, NaN on the border ring
  std::vector<double> sqrtg, w11, w12, w22;  // na*nb, border entries unused
};

PatchGeometry build_geometry(const AmbientChart& chart, const ImmersionPatch& patch,
                             int na, int nb);

// Laplace-Beltrami of the node values f through the active stencil kernel.
// Entries outside the doubly-interior block come back NaN.
std::vector<double> discrete_laplace_beltrami(const AmbientChart& chart,
                                              const ImmersionPatch& patch, int na,
                                              int nb, const std::vector<double>& f);

enum class Direction { direct, reverse };
const char* direction_name(Direction d);

struct VerifyOptions {
  int grid = 128;                 // nodes per parameter axis
  double tol_coefficient = 10.0;  // acceptance margin is -C * grid spacing
  double mean_curvature_scale = 1.0;  // deliberate mis-scaling for controls
  bool refine = false;            // also evaluate at the doubled grid
};

struct VerificationReport {
  std::string chart;
  std::string patch;
  std::string direction;
  int grid = 0;
  double margin_min = 0.0;
  double argmin_a = 0.0, argmin_b = 0.0;
  double max_abs_laplacian = 0.0;  // diagnostic for equality cases
  int checked = 0;
  double tol = 0.0;
  bool pass = false;
  double refined_margin_min = 0.0;  // NaN unless options.refine
  nlohmann::json to_json() const;
};

// Pointwise comparison of the barrier Laplacian against the comparison
// right side on doubly-interior nodes. The direct form bounds
// Lap f / h by (n-1) H_d - (n-1) h'/h - m |H| + m h'/h, the reverse form by
// m (h'/h - |H|), each with the certificates of its own direction.
VerificationReport verify_inequality_direct(const AmbientChart& chart,
                                            const ImmersionPatch& patch,
                                            const VerifyOptions& options = {});
VerificationReport verify_inequality_reverse(const AmbientChart& chart,
                                             const ImmersionPatch& patch,
                                             const VerifyOptions& options = {});

}  // namespace curvlab::ineq
