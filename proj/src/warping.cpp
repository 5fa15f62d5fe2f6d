#include "curvlab/warping.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "curvlab/ode45.hpp"
#include "curvlab/rootfind.hpp"

namespace curvlab::warping {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

SolveStatus map_status(OdeStatus s) {
  switch (s) {
    case OdeStatus::done:
      return SolveStatus::complete;
    case OdeStatus::halted:
      return SolveStatus::halted_amplitude;
    default:
      return SolveStatus::step_underflow;
  }
}
}  // namespace

double WarpingFunction::ratio(double t) const {
  // A positivity endpoint is a pole of h'/h only when it is an actual zero of
  // h; an endpoint inherited from the solved horizon still has h > 0 and the
  // log-derivative is evaluated there inclusively.
  const bool above_lo = zero_below_ ? t > positivity_.lo : t >= positivity_.lo;
  const bool below_hi = zero_above_ ? t < positivity_.hi : t <= positivity_.hi;
  if (!(above_lo && below_hi))
    throw std::domain_error("log-derivative requested outside the positivity interval");
  return dh(t) / h(t);
}

std::optional<double> WarpingFunction::focal_radius() const {
  if (zero_above_ && !zero_above_->degenerate) return zero_above_->t;
  return std::nullopt;
}

WarpingFunction solve_jacobi(const CurvatureProfile& profile, double t0, double h0,
                             double dh0, Interval horizon, const JacobiOptions& opts) {
  if (h0 == 0.0 && dh0 == 0.0)
    throw std::invalid_argument("solve_jacobi: (h0, dh0) must not both vanish");
  if (h0 < 0.0)
    throw std::invalid_argument("solve_jacobi: h0 must be nonnegative");
  if (!(horizon.lo <= t0 && t0 <= horizon.hi))
    throw std::invalid_argument("solve_jacobi: basepoint outside horizon");

  const Interval dom = profile.domain();
  const double lo = std::max(horizon.lo, dom.lo);
  const double hi = std::min(horizon.hi, dom.hi);
  if (!(lo <= t0 && t0 <= hi))
    throw std::invalid_argument("solve_jacobi: basepoint outside the profile domain");

  OdeRhs rhs = [&profile](double t, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = profile(t) * y[0];
  };
  OdeObserver guard = [&opts](double, std::span<const double> y,
                              std::span<const double>) {
    return std::abs(y[0]) <= opts.amplitude_limit && std::abs(y[1]) <= opts.amplitude_limit;
  };
  OdeOptions oopts;
  oopts.rel_tol = opts.rel_tol;
  oopts.abs_tol = opts.abs_tol;
  oopts.max_step = opts.max_step;

  const double y0[2] = {h0, dh0};
  WarpingFunction w;
  w.profile_ = profile;
  w.t0_ = t0;
  w.h0_ = h0;
  w.dh0_ = dh0;

  DenseSolution fwd(2), bwd(2);
  if (hi > t0) {
    const OdeResult r = integrate_ode45(rhs, t0, y0, hi, fwd, oopts, guard);
    w.status_above_ = map_status(r.status);
  } else {
    std::vector<double> f(2);
    rhs(t0, y0, f);
    fwd.push_knot(t0, y0, f);
  }
  if (lo < t0) {
    const OdeResult r = integrate_ode45(rhs, t0, y0, lo, bwd, oopts, guard);
    w.status_below_ = map_status(r.status);
    w.sol_ = DenseSolution::join(bwd.reversed(), fwd);
  } else {
    w.sol_ = fwd;
  }

  // Locate the knot at the basepoint and the positivity boundary on each
  // side: first sign change of h, refined on the interpolant.
  const DenseSolution& s = w.sol_;
  std::size_t k0 = 0;
  for (std::size_t k = 0; k < s.knots(); ++k)
    if (s.knot_t(k) == t0) {
      k0 = k;
      break;
    }

  auto refine_zero = [&](std::size_t k) {
    return bisect([&](double t) { return s.eval_comp(t, 0); }, s.knot_t(k),
                  s.knot_t(k + 1), 1e-13);
  };
  auto flag_zero = [&](double z, double side_scale) {
    return ZeroInfo{z, std::abs(s.eval_comp(z, 1)) <=
                           opts.degenerate_slope_tol * (1.0 + side_scale)};
  };

  const bool seed_positive_above = h0 > 0.0 || dh0 > 0.0;
  if (seed_positive_above) {
    double scale = std::abs(h0);
    if (h0 == 0.0) w.zero_below_ = ZeroInfo{t0, false};
    for (std::size_t k = k0; k + 1 < s.knots(); ++k) {
      scale = std::max(scale, std::abs(s.knot_y(k, 0)));
      const double h1 = s.knot_y(k + 1, 0);
      if (h1 < 0.0 || (h1 == 0.0)) {
        const double z = h1 == 0.0 ? s.knot_t(k + 1) : refine_zero(k);
        w.zero_above_ = flag_zero(z, scale);
        break;
      }
    }
    if (h0 > 0.0) {
      double scb = std::abs(h0);
      for (std::size_t k = k0; k > 0; --k) {
        scb = std::max(scb, std::abs(s.knot_y(k, 0)));
        const double h1 = s.knot_y(k - 1, 0);
        if (h1 < 0.0 || h1 == 0.0) {
          const double z = h1 == 0.0
                               ? s.knot_t(k - 1)
                               : bisect([&](double t) { return s.eval_comp(t, 0); },
                                        s.knot_t(k - 1), s.knot_t(k), 1e-13);
          w.zero_below_ = flag_zero(z, scb);
          break;
        }
      }
    }
  } else {
    // positive side lies below the basepoint
    w.zero_above_ = ZeroInfo{t0, false};
    double scale = 0.0;
    for (std::size_t k = k0; k > 0; --k) {
      scale = std::max(scale, std::abs(s.knot_y(k, 0)));
      const double h1 = s.knot_y(k - 1, 0);
      if (h1 < 0.0 || h1 == 0.0) {
        const double z = h1 == 0.0 ? s.knot_t(k - 1)
                                   : bisect([&](double t) { return s.eval_comp(t, 0); },
                                            s.knot_t(k - 1), s.knot_t(k), 1e-13);
        w.zero_below_ = flag_zero(z, scale);
        break;
      }
    }
  }

  w.positivity_.lo = w.zero_below_ ? w.zero_below_->t : s.t_front();
  w.positivity_.hi = w.zero_above_ ? w.zero_above_->t : s.t_back();

  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < s.knots(); ++k) {
    const double tm = 0.5 * (s.knot_t(k) + s.knot_t(k + 1));
    const double hm = s.eval_comp(tm, 0);
    const double res = s.eval_deriv(tm, 1) - profile(tm) * hm;
    worst = std::max(worst, std::abs(res) / (1.0 + std::abs(hm)));
  }
  w.max_residual_ = worst;
  return w;
}

InfResult inf_log_derivative(const WarpingFunction& w, Interval range, int grid) {
  if (!(range.lo <= range.hi))
    throw std::invalid_argument("inf_log_derivative: empty range");
  const Interval solved = w.solved_range();
  if (range.lo < solved.lo || range.hi > solved.hi)
    throw std::invalid_argument("inf_log_derivative: range outside the solved horizon");
  const Interval pos = w.positivity_interval();
  auto inside = [&](double t) {
    const bool above_lo = w.zero_below() ? t > pos.lo : t >= pos.lo;
    const bool below_hi = w.zero_above() ? t < pos.hi : t <= pos.hi;
    return above_lo && below_hi;
  };
  if (!inside(range.lo) || !inside(range.hi))
    throw std::invalid_argument(
        "inf_log_derivative: range touches or crosses a zero of h");

  if (range.lo == range.hi) return {w.ratio(range.lo), range.lo};

  if (w.profile().kind() == CurvatureProfile::Kind::constant) {
    const double va = w.ratio(range.lo), vb = w.ratio(range.hi);
    return va <= vb ? InfResult{va, range.lo} : InfResult{vb, range.hi};
  }

  double best = kInf, arg = range.lo;
  const int n = std::max(grid, 8);
  for (int i = 0; i <= n; ++i) {
    const double t = range.lo + (range.hi - range.lo) * i / n;
    const double v = w.ratio(t);
    if (v < best) {
      best = v;
      arg = t;
    }
  }
  const double step = (range.hi - range.lo) / n;
  const double a = std::max(range.lo, arg - step);
  const double b = std::min(range.hi, arg + step);
  const double xr = golden_minimize([&](double t) { return w.ratio(t); }, a, b, 1e-12);
  const double vr = w.ratio(xr);
  if (vr < best) {
    best = vr;
    arg = xr;
  }
  return {best, arg};
}

nlohmann::json ComparisonReport::to_json() const {
  return nlohmann::json{{"preconditions_ok", preconditions_ok},
                        {"precondition_note", precondition_note},
                        {"restricted_to_nonnegative", restricted_to_nonnegative},
                        {"max_violation", max_violation},
                        {"t_argmax", t_argmax},
                        {"tol", tol},
                        {"pass", pass}};
}

ComparisonReport sturm_compare(const WarpingFunction& w1, const WarpingFunction& w2,
                               double tol, int grid) {
  ComparisonReport rep;
  rep.tol = tol;
  rep.preconditions_ok = true;

  if (w1.t0() != w2.t0()) {
    rep.preconditions_ok = false;
    rep.precondition_note = "basepoints differ";
  } else if (w1.h0() == 0.0 || w2.h0() == 0.0) {
    if (!(w1.h0() == 0.0 && w2.h0() == 0.0 && w1.dh0() > 0.0 && w2.dh0() > 0.0)) {
      rep.preconditions_ok = false;
      rep.precondition_note = "initial data not matched (zero seed on one side only)";
    }
  } else {
    const double r1 = w1.dh0() / w1.h0(), r2 = w2.dh0() / w2.h0();
    if (std::abs(r1 - r2) > 1e-9 * (1.0 + std::abs(r1))) {
      rep.preconditions_ok = false;
      rep.precondition_note = "initial log-derivatives differ";
    }
  }

  rep.restricted_to_nonnegative =
      !(w1.profile().looks_even() && w2.profile().looks_even());

  const Interval p1 = w1.positivity_interval(), p2 = w2.positivity_interval();
  const Interval s1 = w1.solved_range(), s2 = w2.solved_range();
  double lo = std::max({p1.lo, p2.lo, s1.lo, s2.lo});
  double hi = std::min({p1.hi, p2.hi, s1.hi, s2.hi});
  if (rep.restricted_to_nonnegative) lo = std::max(lo, w1.t0());
  // keep away from zeros of h, where the log-derivative blows up
  const double margin = 1e-6 * (hi - lo + 1.0);
  auto is_zero_of = [&](const WarpingFunction& w, double t) {
    const auto zb = w.zero_below(), za = w.zero_above();
    return (zb && zb->t == t) || (za && za->t == t);
  };
  if (is_zero_of(w1, lo) || is_zero_of(w2, lo)) lo += margin;
  if (is_zero_of(w1, hi) || is_zero_of(w2, hi)) hi -= margin;

  if (!(hi > lo)) {
    rep.preconditions_ok = false;
    rep.precondition_note += (rep.precondition_note.empty() ? "" : "; ");
    rep.precondition_note += "no common positivity interval";
    return rep;
  }

  if (rep.preconditions_ok) {
    for (int i = 0; i <= 512; ++i) {
      const double t = lo + (hi - lo) * i / 512;
      const double g1 = w1.profile()(t), g2 = w2.profile()(t);
      if (g1 > g2 + 1e-12 * (1.0 + std::abs(g2))) {
        rep.preconditions_ok = false;
        rep.precondition_note = "profiles not ordered (G1 > G2 at t=" +
                                std::to_string(t) + ")";
        break;
      }
    }
  }

  double worst = -kInf, targ = lo;
  for (int i = 0; i <= grid; ++i) {
    const double t = lo + (hi - lo) * i / grid;
    const double d = w1.ratio(t) - w2.ratio(t);
    if (d > worst) {
      worst = d;
      targ = t;
    }
  }
  rep.max_violation = std::max(0.0, worst);
  rep.t_argmax = targ;
  rep.pass = rep.preconditions_ok && rep.max_violation <= tol;
  return rep;
}

double BarrierFunction::clamp_arg(double rho) const {
  double x = rho;
  if (trunc_.lo) x = std::max(x, *trunc_.lo);
  if (trunc_.hi) x = std::min(x, *trunc_.hi);
  return x;
}

double BarrierFunction::h(double rho) const {
  if (base_) return base_->h(rho);
  return wedge_c_ == 0.0 ? rho : std::sinh(wedge_c_ * rho);
}

double BarrierFunction::ratio(double rho) const {
  if (base_) return base_->ratio(rho);
  if (wedge_c_ == 0.0) {
    if (rho == 0.0) throw std::domain_error("wedge barrier log-derivative at 0");
    return 1.0 / rho;
  }
  if (rho == 0.0) throw std::domain_error("wedge barrier log-derivative at 0");
  return wedge_c_ / std::tanh(wedge_c_ * rho);
}

double BarrierFunction::g(double rho) const {
  const double x = clamp_arg(rho);
  if (!base_) {
    if (wedge_c_ == 0.0) return 0.5 * x * x;
    return std::cosh(wedge_c_ * x) / wedge_c_;
  }
  const auto& s = base_->dense();
  auto prefix_at = [&](double t) {
    auto it = std::upper_bound(knot_t_.begin(), knot_t_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - knot_t_.begin());
    if (k == 0) k = 1;
    if (k >= knot_t_.size()) k = knot_t_.size() - 1;
    return prefix_[k - 1] + s.integrate_comp(0, knot_t_[k - 1], t);
  };
  return prefix_at(x) - prefix_at(rho0_);
}

double BarrierFunction::dg(double rho) const {
  if (trunc_.lo && rho < *trunc_.lo) return 0.0;
  if (trunc_.hi && rho > *trunc_.hi) return 0.0;
  return h(rho);
}

BarrierFunction build_barrier(const WarpingFunction& w, double rho0,
                              const TruncationSpec& trunc) {
  const Interval solved = w.solved_range();
  if (!solved.contains(rho0))
    throw std::invalid_argument("build_barrier: rho0 outside the solved horizon");
  if (trunc.lo && trunc.hi && *trunc.lo > *trunc.hi)
    throw std::invalid_argument("build_barrier: empty truncation window");
  BarrierFunction b;
  b.base_ = std::make_shared<WarpingFunction>(w);
  b.rho0_ = rho0;
  b.trunc_ = trunc;
  const auto& s = b.base_->dense();
  b.knot_t_.resize(s.knots());
  b.prefix_.resize(s.knots());
  double acc = 0.0;
  b.knot_t_[0] = s.knot_t(0);
  b.prefix_[0] = 0.0;
  for (std::size_t k = 1; k < s.knots(); ++k) {
    acc += s.integrate_comp(0, s.knot_t(k - 1), s.knot_t(k));
    b.knot_t_[k] = s.knot_t(k);
    b.prefix_[k] = acc;
  }
  return b;
}

BarrierFunction wedge_barrier(double c, const TruncationSpec& trunc) {
  if (c < 0.0) throw std::invalid_argument("wedge_barrier: c must be >= 0");
  BarrierFunction b;
  b.wedge_c_ = c;
  b.rho0_ = 0.0;
  b.trunc_ = trunc;
  return b;
}

void write_warping_csv(const WarpingFunction& w, std::ostream& os, int samples) {
  const Interval r = w.solved_range();
  const Interval pos = w.positivity_interval();
  os << "t,h,dh,ratio\n";
  char buf[128];
  for (int i = 0; i < samples; ++i) {
    const double t =
        samples == 1 ? r.lo : r.lo + (r.hi - r.lo) * i / (samples - 1);
    const double hv = w.h(t), dhv = w.dh(t);
    if (t > pos.lo && t < pos.hi && hv > 0.0) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", t, hv, dhv,
                    dhv / hv);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,\n", t, hv, dhv);
    }
    os << buf;
  }
}

}  // namespace curvlab::warping
