#pragma once

#include <vector>

namespace curvlab {

// Small dense symmetric matrix in full row-major storage. Dimensions stay in
// the single digits here (shape operators along a geodesic), so everything is
// simple O(n^3) dense arithmetic.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(int n, double diag = 0.0);
  static SymMat identity(int n);

  int dim() const { return n_; }
  double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

  SymMat& operator+=(const SymMat& o);
  SymMat& operator-=(const SymMat& o);
  SymMat& operator*=(double s);
  friend SymMat operator*(const SymMat& x, const SymMat& y);  // dense product
  SymMat& add_scaled_identity(double s);

  double max_abs() const;
  // Largest |a_ij - a_ji|; the integrator tracks this as a consistency
  // indicator before re-symmetrizing.
  double max_asymmetry() const;
  void symmetrize();

  // Eigenvalues by cyclic Jacobi rotations, sorted descending. Supported up
  // to dim 16.
  std::vector<double> eigenvalues_desc() const;
  double lambda_min() const;
  double lambda_max() const;

 private:
  int n_ = 0;
  std::vector<double> a_;
};

}  // namespace curvlab
