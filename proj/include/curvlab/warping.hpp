#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "curvlab/dense_solution.hpp"
#include "curvlab/profile.hpp"

namespace curvlab::warping {

struct JacobiOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.02;
  // Halt a side once |h| passes this; the side is then flagged unbounded
  // rather than failed.
  double amplitude_limit = 1e306;
  // A zero of h where |h'| also falls below this (relative to the solution
  // scale) is reported as degenerate instead of as a focal distance.
  double degenerate_slope_tol = 1e-8;
};

enum class SolveStatus { complete, halted_amplitude, step_underflow };

struct ZeroInfo {
  double t = 0.0;
  bool degenerate = false;
};

// Solution h of h'' = G(t) h with data (h0, dh0) at t0, recorded densely over
// the solved horizon, together with the positivity interval around t0.
class WarpingFunction {
 public:
  double t0() const { return t0_; }
  double h0() const { return h0_; }
  double dh0() const { return dh0_; }
  const CurvatureProfile& profile() const { return profile_; }

  double h(double t) const { return sol_.eval_comp(t, 0); }
  double dh(double t) const { return sol_.eval_comp(t, 1); }
  // Log-derivative h'/h, defined where h > 0: strictly between zeros of h,
  // inclusive at positivity endpoints that merely mark the solved horizon.
  double ratio(double t) const;

  Interval solved_range() const { return {sol_.t_front(), sol_.t_back()}; }
  Interval positivity_interval() const { return positivity_; }
  std::optional<ZeroInfo> zero_below() const { return zero_below_; }
  std::optional<ZeroInfo> zero_above() const { return zero_above_; }
  // First zero of h above t0, when it exists and is non-degenerate.
  std::optional<double> focal_radius() const;

  SolveStatus status_below() const { return status_below_; }
  SolveStatus status_above() const { return status_above_; }
  // Largest midpoint residual of the recorded interpolant against the
  // equation, scaled by 1/(1+|h|).
  double max_scaled_residual() const { return max_residual_; }

  const DenseSolution& dense() const { return sol_; }

 private:
  friend WarpingFunction solve_jacobi(const CurvatureProfile&, double, double, double,
                                      Interval, const JacobiOptions&);
  CurvatureProfile profile_ = CurvatureProfile::constant(0.0);
  double t0_ = 0.0, h0_ = 1.0, dh0_ = 0.0;
  DenseSolution sol_;
  Interval positivity_{0.0, 0.0};
  std::optional<ZeroInfo> zero_below_, zero_above_;
  SolveStatus status_below_ = SolveStatus::complete;
  SolveStatus status_above_ = SolveStatus::complete;
  double max_residual_ = 0.0;
};

// Integrates the second order equation over `horizon` (which must contain
// t0), both directions, and locates the positivity interval. (h0, dh0) must
// not both vanish. An infinite-slope seed is expressed by the caller as
// (0, 1).
WarpingFunction solve_jacobi(const CurvatureProfile& profile, double t0, double h0,
                             double dh0, Interval horizon,
                             const JacobiOptions& opts = {});

struct InfResult {
  double value = 0.0;
  double argmin = 0.0;
};

// Infimum of h'/h over [a, b], which must sit inside the positivity interval.
// Constant profiles make the log-derivative monotone, so the infimum is taken
// at an endpoint; everything else is scanned and polished.
InfResult inf_log_derivative(const WarpingFunction& w, Interval range,
                             int grid = 2048);

struct ComparisonReport {
  bool preconditions_ok = false;
  std::string precondition_note;
  bool restricted_to_nonnegative = false;  // set when the profiles are not even
  double max_violation = 0.0;  // max of (ratio1 - ratio2), 0 when ordered
  double t_argmax = 0.0;
  double tol = 0.0;
  bool pass = false;
  nlohmann::json to_json() const;
};

// Checks the log-derivative ordering implied by a pointwise ordering of the
// curvature profiles: G1 <= G2 forces h1'/h1 <= h2'/h2 on the common
// positivity interval when both solutions share basepoint and initial ratio.
ComparisonReport sturm_compare(const WarpingFunction& w1, const WarpingFunction& w2,
                               double tol = 1e-9, int grid = 4096);

// Argument-clamp window for barrier values: below lo the barrier freezes at
// its lo value, above hi at its hi value, so values stay continuous.
struct TruncationSpec {
  std::optional<double> lo;
  std::optional<double> hi;
};

// Antiderivative barrier g(rho) = integral of h from rho0, with optional
// argument clamping, plus closed wedge forms (t^2/2 and cosh(ct)/c) that keep
// their customary normalization.
class BarrierFunction {
 public:
  double g(double rho) const;
  double dg(double rho) const;     // h at the clamped argument, 0 once clamped
  double h(double rho) const;      // unclamped integrand
  double ratio(double rho) const;  // h'/h of the integrand
  double rho0() const { return rho0_; }
  const TruncationSpec& truncation() const { return trunc_; }

 private:
  friend BarrierFunction build_barrier(const WarpingFunction&, double,
                                       const TruncationSpec&);
  friend BarrierFunction wedge_barrier(double, const TruncationSpec&);
  double clamp_arg(double rho) const;

  std::shared_ptr<const WarpingFunction> base_;  // null for wedge forms
  double wedge_c_ = 0.0;
  double rho0_ = 0.0;
  TruncationSpec trunc_;
  // prefix integrals of h at the dense knots (warping-backed only)
  std::vector<double> knot_t_, prefix_;
};

BarrierFunction build_barrier(const WarpingFunction& w, double rho0,
                              const TruncationSpec& trunc = {});

// g(t) = t^2/2 when c = 0, cosh(ct)/c when c > 0. The c > 0 form keeps its
// customary additive constant (g(0) = 1/c); only g' and g'' feed the
// estimates.
BarrierFunction wedge_barrier(double c, const TruncationSpec& trunc = {});

// CSV columns t,h,dh,ratio at `samples` evenly spaced points of the solved
// range; the ratio cell is left empty outside the positivity interval.
void write_warping_csv(const WarpingFunction& w, std::ostream& os, int samples = 1001);

}  // namespace curvlab::warping
