#include "curvlab/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curvlab {

SymMat::SymMat(int n, double diag) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {
  if (n < 1 || n > 16) throw std::invalid_argument("SymMat: dim must be in [1,16]");
  for (int i = 0; i < n; ++i) at(i, i) = diag;
}

SymMat SymMat::identity(int n) { return SymMat(n, 1.0); }

SymMat& SymMat::operator+=(const SymMat& o) {
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

SymMat& SymMat::operator-=(const SymMat& o) {
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

SymMat& SymMat::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

SymMat operator*(const SymMat& x, const SymMat& y) {
  const int n = x.n_;
  SymMat r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += x.at(i, k) * y.at(k, j);
      r.at(i, j) = acc;
    }
  return r;
}

SymMat& SymMat::add_scaled_identity(double s) {
  for (int i = 0; i < n_; ++i) at(i, i) += s;
  return *this;
}

double SymMat::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double SymMat::max_asymmetry() const {
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) m = std::max(m, std::abs(at(i, j) - at(j, i)));
  return m;
}

void SymMat::symmetrize() {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      const double v = 0.5 * (at(i, j) + at(j, i));
      at(i, j) = v;
      at(j, i) = v;
    }
}

std::vector<double> SymMat::eigenvalues_desc() const {
  SymMat w = *this;
  w.symmetrize();
  const int n = n_;
  if (n == 1) return {w.at(0, 0)};

  const double scale = std::max(w.max_abs(), 1e-300);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(w.at(p, q)));
    if (off <= 1e-15 * scale) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = w.at(p, q);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        const double theta = (w.at(q, q) - w.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double wkp = w.at(k, p), wkq = w.at(k, q);
          w.at(k, p) = c * wkp - s * wkq;
          w.at(k, q) = s * wkp + c * wkq;
        }
        for (int k = 0; k < n; ++k) {
          const double wpk = w.at(p, k), wqk = w.at(q, k);
          w.at(p, k) = c * wpk - s * wqk;
          w.at(q, k) = s * wpk + c * wqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = w.at(i, i);
  std::sort(ev.begin(), ev.end(), std::greater<double>());
  return ev;
}

double SymMat::lambda_min() const { return eigenvalues_desc().back(); }
double SymMat::lambda_max() const { return eigenvalues_desc().front(); }

}  // namespace curvlab
