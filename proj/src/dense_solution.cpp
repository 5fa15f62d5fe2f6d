#include "curvlab/dense_solution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace curvlab {

void DenseSolution::push_knot(double t, std::span<const double> y,
                              std::span<const double> f) {
  if (y.size() != dim_ || f.size() != dim_)
    throw std::invalid_argument("push_knot: state size mismatch");
  if (!t_.empty() && !(t > t_.back()) && !(t < t_.back()))
    throw std::invalid_argument("push_knot: repeated knot time");
  t_.push_back(t);
  y_.insert(y_.end(), y.begin(), y.end());
  f_.insert(f_.end(), f.begin(), f.end());
}

std::size_t DenseSolution::locate(double t) const {
  if (t_.size() < 2) throw std::logic_error("dense solution has no interval");
  const double slack = 1e-9 * (std::abs(t_.back() - t_.front()) + 1.0);
  if (t < std::min(t_.front(), t_.back()) - slack ||
      t > std::max(t_.front(), t_.back()) + slack)
    throw std::domain_error("dense solution evaluated outside its range");
  // Knot times run in the direction of integration, so the record may be
  // descending when the solve went backward.
  const bool ascending = t_.back() > t_.front();
  const auto it = ascending
                      ? std::upper_bound(t_.begin(), t_.end(), t)
                      : std::upper_bound(t_.begin(), t_.end(), t, std::greater<>());
  const std::size_t k = static_cast<std::size_t>(it - t_.begin());
  if (k == 0) return 0;
  if (k >= t_.size()) return t_.size() - 2;
  return k - 1;
}

namespace {
struct HermiteW {
  double h00, h10, h01, h11;
};
HermiteW hermite_weights(double th) {
  const double om = 1.0 - th;
  return {(1.0 + 2.0 * th) * om * om, th * om * om, th * th * (3.0 - 2.0 * th),
          th * th * (th - 1.0)};
}
}  // namespace

void DenseSolution::eval(double t, std::span<double> out) const {
  const std::size_t k = locate(t);
  const double t0 = t_[k], dt = t_[k + 1] - t0;
  const double th = (t - t0) / dt;
  const HermiteW w = hermite_weights(th);
  const double* y0 = &y_[k * dim_];
  const double* y1 = &y_[(k + 1) * dim_];
  const double* f0 = &f_[k * dim_];
  const double* f1 = &f_[(k + 1) * dim_];
  for (std::size_t i = 0; i < dim_; ++i)
    out[i] = w.h00 * y0[i] + w.h10 * dt * f0[i] + w.h01 * y1[i] + w.h11 * dt * f1[i];
}

double DenseSolution::eval_comp(double t, std::size_t comp) const {
  const std::size_t k = locate(t);
  const double t0 = t_[k], dt = t_[k + 1] - t0;
  const double th = (t - t0) / dt;
  const HermiteW w = hermite_weights(th);
  return w.h00 * knot_y(k, comp) + w.h10 * dt * knot_f(k, comp) +
         w.h01 * knot_y(k + 1, comp) + w.h11 * dt * knot_f(k + 1, comp);
}

double DenseSolution::eval_deriv(double t, std::size_t comp) const {
  const std::size_t k = locate(t);
  const double t0 = t_[k], dt = t_[k + 1] - t0;
  const double th = (t - t0) / dt;
  const double d00 = (6.0 * th * th - 6.0 * th) / dt;
  const double d10 = 3.0 * th * th - 4.0 * th + 1.0;
  const double d01 = (-6.0 * th * th + 6.0 * th) / dt;
  const double d11 = 3.0 * th * th - 2.0 * th;
  return d00 * knot_y(k, comp) + d10 * knot_f(k, comp) + d01 * knot_y(k + 1, comp) +
         d11 * knot_f(k + 1, comp);
}

double DenseSolution::piece_integral(std::size_t k, double ta, double tb,
                                     std::size_t comp) const {
  const double t0 = t_[k], dt = t_[k + 1] - t0;
  auto anti = [&](double th) {
    const double th2 = th * th, th3 = th2 * th, th4 = th2 * th2;
    const double H00 = 0.5 * th4 - th3 + th;
    const double H10 = 0.25 * th4 - (2.0 / 3.0) * th3 + 0.5 * th2;
    const double H01 = -0.5 * th4 + th3;
    const double H11 = 0.25 * th4 - th3 / 3.0;
    return H00 * knot_y(k, comp) + H10 * dt * knot_f(k, comp) +
           H01 * knot_y(k + 1, comp) + H11 * dt * knot_f(k + 1, comp);
  };
  const double tha = (ta - t0) / dt, thb = (tb - t0) / dt;
  return dt * (anti(thb) - anti(tha));
}

double DenseSolution::integrate_comp(std::size_t comp, double a, double b) const {
  if (a == b) return 0.0;
  if (a > b) return -integrate_comp(comp, b, a);
  const std::size_t ka = locate(a), kb = locate(b);
  if (ka == kb) return piece_integral(ka, a, b, comp);
  if (ka < kb) {
    double acc = piece_integral(ka, a, t_[ka + 1], comp);
    for (std::size_t k = ka + 1; k < kb; ++k)
      acc += piece_integral(k, t_[k], t_[k + 1], comp);
    acc += piece_integral(kb, t_[kb], b, comp);
    return acc;
  }
  // Descending record: moving from a up to b walks toward smaller indices.
  double acc = piece_integral(ka, a, t_[ka], comp);
  for (std::size_t k = ka - 1; k > kb; --k)
    acc += piece_integral(k, t_[k + 1], t_[k], comp);
  acc += piece_integral(kb, t_[kb + 1], b, comp);
  return acc;
}

DenseSolution DenseSolution::reversed() const {
  DenseSolution r(dim_);
  for (std::size_t k = t_.size(); k-- > 0;) {
    r.t_.push_back(t_[k]);
    for (std::size_t i = 0; i < dim_; ++i) {
      r.y_.push_back(y_[k * dim_ + i]);
      r.f_.push_back(f_[k * dim_ + i]);
    }
  }
  return r;
}

DenseSolution DenseSolution::join(const DenseSolution& left, const DenseSolution& right) {
  if (left.dim_ != right.dim_) throw std::invalid_argument("join: dim mismatch");
  if (left.empty()) return right;
  if (right.empty()) return left;
  if (left.t_.back() != right.t_.front())
    throw std::invalid_argument("join: records do not share a boundary knot");
  DenseSolution out = left;
  out.t_.insert(out.t_.end(), right.t_.begin() + 1, right.t_.end());
  out.y_.insert(out.y_.end(), right.y_.begin() + right.dim_, right.y_.end());
  out.f_.insert(out.f_.end(), right.f_.begin() + right.dim_, right.f_.end());
  return out;
}

}  // namespace curvlab
