#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace curvlab::cmc {

// Rotationally invariant vertical graphs over the hyperbolic factor of
// H^n x R. H is the target mean curvature for the upward orientation; I the
// flux constant, zero for graphs meeting the axis orthogonally.
struct CmcParams {
  int n = 2;
  double H = 0.5;
  double I = 0.0;
};

// I_n(r) = integral of sinh^{n-1} over [0, r], its normalized form
// F = I_n / sinh^{n-1}, and F'. F increases from 0 to 1/(n-1), which splits
// the graphs into the three height regimes.
class SinhIntegral {
 public:
  explicit SinhIntegral(int n);
  int n() const { return n_; }
  double In(double r) const;
  double F(double r) const;
  double dF(double r) const;

 private:
  int n_;
};

enum class Regime { subcritical, entire_graph, supercritical };
const char* regime_name(Regime r);

struct ProfileSample {
  double r = 0.0;
  double u = 0.0;
  double du = 0.0;
  double flux = 0.0;
};

struct ProfileCurve {
  CmcParams params;
  Regime regime = Regime::subcritical;
  std::vector<ProfileSample> samples;
  std::optional<double> critical_radius;  // blow-up radius of u', if any
  std::optional<double> max_height;       // u at the critical radius
  bool closed = false;                    // carries the mirrored branch
  double max_flux_drift() const;          // sup |flux(r) - flux at first sample|
  nlohmann::json to_json() const;         // summary without the sample table
};

// Flux first integral sinh^{n-1}(r) u'/sqrt(1+u'^2) - nH I_n(r). An infinite
// slope contributes its limiting slope term of modulus one.
double flux(double r, double u_prime, const CmcParams& params);

// Radius where the slope blows up, root of nH F(r) = 1. Empty when
// H <= (n-1)/n, where nH F stays below 1 for all r.
std::optional<double> critical_radius(const CmcParams& params);

// Axis-orthogonal graph (I = 0) by quadrature of
// u' = nH F / sqrt(1 - (nH F)^2) from u(0) = 0. Stops at r_max or just
// before the critical radius, whichever comes first.
ProfileCurve integrate_profile(const CmcParams& params, double r_max,
                               double dr = 1e-3);

// Closed sphere profile for H > (n-1)/n: the graph up to its critical
// radius, the finite apex height from an endpoint-regularizing substitution,
// and the reflected descending branch.
ProfileCurve build_cmc_sphere(const CmcParams& params, double dr = 1e-3);

struct MeanCurvatureReport {
  double max_deviation = 0.0;
  double argmax_r = 0.0;
  int checked = 0;
  double tol = 1e-4;
  bool pass = false;
  nlohmann::json to_json() const;
};

// Recomputes H at interior samples by differentiating the flux slope term
// and compares with the target. Samples too close to the axis or to the
// blow-up radius are skipped.
MeanCurvatureReport verify_profile_mean_curvature(const ProfileCurve& curve,
                                                  const CmcParams& params,
                                                  double tol = 1e-4);

}  // namespace curvlab::cmc
