#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace curvlab::warping {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
};

// Radial curvature bound profile G(t). Four shapes cover everything the lab
// uses:
//   constant      G = v
//   power_log     G = amp * t^2 * prod_{i=1..k} (log^(i) t)^2, frozen below
//                 t_min so iterated logs stay positive
//   tabulated     linear interpolation of sample pairs
//   closed_form   named analytic families ("polynomial", "affine_pow")
class CurvatureProfile {
 public:
  enum class Kind { constant, power_log, tabulated, closed_form };
  enum class TailIntegral { divergent, convergent };

  static CurvatureProfile constant(double value);
  static CurvatureProfile power_log(int logs, double amplitude = 1.0,
                                    double t_min = 3.0);
  static CurvatureProfile tabulated(std::vector<double> t, std::vector<double> g);
  static CurvatureProfile polynomial(std::vector<double> coeffs);
  static CurvatureProfile affine_power(double a, double b, double p);

  Kind kind() const { return kind_; }
  const std::string& closed_form_name() const { return name_; }

  double operator()(double t) const;
  double derivative(double t) const;
  Interval domain() const;

  // Convergence of the tail integral of G^(-1/2), where it is known in
  // closed form. Tabulated profiles return nullopt and are classified by a
  // fitted tail exponent elsewhere.
  std::optional<TailIntegral> analytic_tail() const;

  // Sampled symmetry probe, used only to annotate reports.
  bool looks_even(double span = 5.0) const;

  nlohmann::json to_json() const;
  static CurvatureProfile from_json(const nlohmann::json& j);

 private:
  CurvatureProfile() = default;

  Kind kind_ = Kind::constant;
  std::string name_;             // closed_form only
  double value_ = 0.0;           // constant
  int logs_ = 0;                 // power_log
  double amplitude_ = 1.0;       // power_log
  double t_min_ = 3.0;           // power_log
  std::vector<double> tab_t_;    // tabulated
  std::vector<double> tab_g_;    // tabulated
  std::vector<double> coeffs_;   // polynomial
  double aff_a_ = 0.0, aff_b_ = 0.0, aff_p_ = 0.0;  // affine_pow
};

}  // namespace curvlab::warping
