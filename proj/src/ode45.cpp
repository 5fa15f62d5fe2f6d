#include "curvlab/ode45.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace curvlab {

namespace {

// Dormand-Prince coefficients. The seventh stage row doubles as the fifth
// order solution weights, so an accepted step's last stage is the next step's
// first (FSAL).
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
// Difference between the fifth and fourth order weights (error estimator).
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

}  // namespace

OdeResult integrate_ode45(const OdeRhs& rhs, double t0, std::span<const double> y0,
                          double t_end, DenseSolution& out, const OdeOptions& opts,
                          const OdeObserver& observer, const OdeMutator& mutator) {
  const std::size_t n = y0.size();
  if (n == 0) throw std::invalid_argument("integrate_ode45: empty state");
  if (out.dim() != n && !out.empty())
    throw std::invalid_argument("integrate_ode45: output dim mismatch");
  if (out.empty() && out.dim() != n) out = DenseSolution(n);

  const double dir = (t_end >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t_end - t0);
  OdeResult res;
  res.last_t = t0;
  if (span == 0.0) {
    std::vector<double> f(n);
    rhs(t0, y0, f);
    out.push_knot(t0, y0, f);
    return res;
  }

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> ytmp(n), ynew(n), err(n);

  rhs(t0, y, k1);
  out.push_knot(t0, y, k1);

  auto err_norm = [&](const std::vector<double>& ycur, const std::vector<double>& ynext) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc =
          opts.abs_tol + opts.rel_tol * std::max(std::abs(ycur[i]), std::abs(ynext[i]));
      m = std::max(m, std::abs(err[i]) / sc);
    }
    return m;
  };

  double dt;
  if (opts.initial_step > 0.0) {
    dt = std::min(opts.initial_step, span);
  } else {
    double ny = 0.0, nf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ny = std::max(ny, std::abs(y[i]));
      nf = std::max(nf, std::abs(k1[i]));
    }
    dt = (nf > 0.0) ? 0.01 * (ny + opts.abs_tol) / nf : 1e-3 * span;
    dt = std::clamp(dt, 1e-8 * span, 1e-2 * span);
  }
  if (opts.max_step > 0.0) dt = std::min(dt, opts.max_step);

  double t = t0;
  while (true) {
    if (res.accepted + res.rejected >= opts.max_steps) {
      res.status = OdeStatus::max_steps_exceeded;
      return res;
    }
    const double remaining = std::abs(t_end - t);
    if (remaining <= 1e-14 * (std::abs(t) + 1.0)) break;
    bool last = false;
    // Stretch the final step up to 10% past the working size rather than
    // leaving a sliver segment whose interpolated derivative is all rounding.
    if (1.1 * dt >= remaining) {
      dt = remaining;
      last = true;
    }
    const double h = dir * dt;

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * A21 * k1[i];
    rhs(t + C2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
    rhs(t + C3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    rhs(t + C4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    rhs(t + C5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] =
          y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] =
          y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    rhs(t + h, ynew, k7);
    for (std::size_t i = 0; i < n; ++i)
      err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                    E7 * k7[i]);

    const double en = err_norm(y, ynew);
    const bool accept = std::isfinite(en) && en <= 1.0;
    double factor = std::isfinite(en) && en > 0.0
                        ? 0.9 * std::pow(en, -0.2)
                        : (std::isfinite(en) ? 5.0 : 0.2);
    factor = std::clamp(factor, 0.2, 5.0);

    if (accept) {
      t = last ? t_end : t + h;
      y.swap(ynew);
      k1.swap(k7);
      if (mutator && mutator(t, y)) rhs(t, y, k1);
      out.push_knot(t, y, k1);
      res.last_t = t;
      ++res.accepted;
      if (observer && !observer(t, y, k1)) {
        res.status = OdeStatus::halted;
        return res;
      }
      if (last) break;
    } else {
      ++res.rejected;
      factor = std::min(factor, 1.0);
    }

    dt *= factor;
    if (opts.max_step > 0.0) dt = std::min(dt, opts.max_step);
    if (dt < 1e-14 * (std::abs(t) + 1.0)) {
      res.status = OdeStatus::step_underflow;
      return res;
    }
  }
  res.status = OdeStatus::done;
  return res;
}

}  // namespace curvlab
