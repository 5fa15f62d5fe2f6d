#pragma once

#include <functional>
#include <optional>
#include <string>

#include "curvlab/dense_solution.hpp"
#include "curvlab/profile.hpp"
#include "curvlab/symmat.hpp"
#include "curvlab/warping.hpp"

namespace curvlab::riccati {

// Symmetric curvature operator R(t) along a unit-speed geodesic, paired with
// the scalar profile G its eigenvalues are compared against.
struct CurvatureOperatorPath {
  int dim = 1;
  std::function<SymMat(double)> R;
  warping::CurvatureProfile bound = warping::CurvatureProfile::constant(1.0);
  std::string note;
};

// Direction of the conclusion: `lower` certifies A >= (h'/h) Id (operator
// order), `upper` certifies A <= (h'/h) Id.
enum class Direction { lower, upper };

struct RiccatiOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.02;
  // Integration stops once the largest |eigenvalue| passes this; the recorded
  // pole time adds the first-order correction 1/max|eig|.
  double blowup_threshold = 1e6;
  // Seed log-derivative for the scalar comparison solution; when unset the
  // verifier picks the extreme eigenvalue of A0 for the chosen direction.
  std::optional<double> comparison_lambda0;
};

struct RiccatiState {
  int dim = 1;
  SymMat A0;
  DenseSolution A_path;  // dim*dim components, row-major
  CurvatureOperatorPath path;
  RiccatiOptions opts;
  double t_begin = 0.0;
  double t_end = 0.0;                 // last recorded time
  std::optional<double> blowup_time;  // pole estimate when the solve halted
  double max_asymmetry = 0.0;         // worst |A - A^T| entry before re-symmetrization

  SymMat A_at(double t) const;
};

// Integrates A' = -A^2 - R(t) from A(horizon.lo) = A0 across the horizon,
// re-symmetrizing after every accepted step and recording the dense matrix
// path. Stops early at blow-up.
RiccatiState integrate_riccati(const CurvatureOperatorPath& path, const SymMat& A0,
                               warping::Interval horizon,
                               const RiccatiOptions& opts = {});

struct HessianComparisonReport {
  Direction direction = Direction::lower;
  bool hypothesis_ok = false;     // A0 vs lambda0 ordering and R vs bound ordering
  std::string hypothesis_note;
  double lambda0 = 0.0;           // comparison seed actually used
  double margin_min = 0.0;        // min over samples of the certified gap
  double t_argmin = 0.0;
  double compared_up_to = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::optional<double> blowup_time;
  double max_asymmetry = 0.0;
  nlohmann::json to_json() const;
};

// Samples eigenvalue margins of A(t) against the scalar comparison
// (h'/h)(t) Id built from the path's bound profile. For direction `lower`
// the margin is lambda_min(A) - h'/h, for `upper` it is h'/h - lambda_max(A).
HessianComparisonReport verify_hessian_comparison(const RiccatiState& st, Direction dir,
                                                  double tol = 1e-9);

// Deterministic test-path factories.
CurvatureOperatorPath isotropic_path(int dim, double r_value, double bound_value);
// R(t) = -G(t) Id -/+ P(t) with P(t) a smooth random positive semidefinite
// path: `lower` subtracts P (eigenvalues below -G), `upper` adds it.
CurvatureOperatorPath perturbed_path(int dim, const warping::CurvatureProfile& bound,
                                     Direction dir, std::uint64_t seed);

}  // namespace curvlab::riccati
