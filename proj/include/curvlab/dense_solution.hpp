#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace curvlab {

// Piecewise cubic Hermite record of an ODE solution: for every accepted step
// the knot time, state, and state derivative are stored, and evaluation
// anywhere between two knots interpolates the cubic that matches (y, y') at
// both ends. Knots must be strictly increasing; backward integrations are
// reversed before use (see join()).
class DenseSolution {
 public:
  DenseSolution() = default;
  explicit DenseSolution(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t knots() const { return t_.size(); }
  bool empty() const { return t_.empty(); }
  double t_front() const { return t_.front(); }
  double t_back() const { return t_.back(); }

  double knot_t(std::size_t k) const { return t_[k]; }
  double knot_y(std::size_t k, std::size_t comp) const { return y_[k * dim_ + comp]; }
  double knot_f(std::size_t k, std::size_t comp) const { return f_[k * dim_ + comp]; }

  void push_knot(double t, std::span<const double> y, std::span<const double> f);

  // Full-state and single-component evaluation. Queries may overshoot the
  // knot range by a hair (1e-9 of the span) to absorb root-finding noise;
  // anything beyond that throws.
  void eval(double t, std::span<double> out) const;
  double eval_comp(double t, std::size_t comp) const;
  double eval_deriv(double t, std::size_t comp) const;

  // Exact integral of the interpolant's component over [a, b].
  double integrate_comp(std::size_t comp, double a, double b) const;

  // Reverses the knot order (used to turn a backward integration into an
  // increasing record).
  DenseSolution reversed() const;

  // Concatenates two records sharing their boundary knot: left must end where
  // right begins.
  static DenseSolution join(const DenseSolution& left, const DenseSolution& right);

 private:
  std::size_t locate(double t) const;
  double piece_integral(std::size_t k, double ta, double tb, std::size_t comp) const;

  std::size_t dim_ = 0;
  std::vector<double> t_;
  std::vector<double> y_;
  std::vector<double> f_;
};

}  // namespace curvlab
