#include "curvlab/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "curvlab/ode45.hpp"
#include "curvlab/rng.hpp"

namespace curvlab::riccati {

namespace {

SymMat unpack(std::span<const double> y, int dim) {
  SymMat a(dim);
  std::copy(y.begin(), y.end(), a.data().begin());
  return a;
}

}  // namespace

SymMat RiccatiState::A_at(double t) const {
  std::vector<double> buf(static_cast<std::size_t>(dim) * dim);
  A_path.eval(t, buf);
  return unpack(buf, dim);
}

RiccatiState integrate_riccati(const CurvatureOperatorPath& path, const SymMat& A0,
                               warping::Interval horizon, const RiccatiOptions& opts) {
  if (A0.dim() != path.dim)
    throw std::invalid_argument("integrate_riccati: A0 dim mismatch");
  if (!(horizon.hi > horizon.lo))
    throw std::invalid_argument("integrate_riccati: empty horizon");
  const int n = path.dim;
  const std::size_t nn = static_cast<std::size_t>(n) * n;

  RiccatiState st;
  st.dim = n;
  st.A0 = A0;
  st.A0.symmetrize();
  st.path = path;
  st.opts = opts;
  st.t_begin = horizon.lo;
  st.A_path = DenseSolution(nn);

  OdeRhs rhs = [&path, n, nn](double t, std::span<const double> y, std::span<double> dy) {
    const SymMat a = unpack(y, n);
    const SymMat a2 = a * a;
    const SymMat r = path.R(t);
    for (std::size_t k = 0; k < nn; ++k) dy[k] = -a2.data()[k] - r.data()[k];
  };

  double max_asym = 0.0;
  OdeMutator project = [n, &max_asym](double, std::span<double> y) {
    SymMat a = unpack(y, n);
    max_asym = std::max(max_asym, a.max_asymmetry());
    a.symmetrize();
    std::copy(a.data().begin(), a.data().end(), y.begin());
    return true;
  };

  double last_extreme = 0.0;
  OdeObserver watch = [n, &opts, &last_extreme](double, std::span<const double> y,
                                                std::span<const double>) {
    const SymMat a = unpack(y, n);
    const auto ev = a.eigenvalues_desc();
    const double m = std::max(std::abs(ev.front()), std::abs(ev.back()));
    last_extreme = m;
    return m <= opts.blowup_threshold;
  };

  OdeOptions oo;
  oo.rel_tol = opts.rel_tol;
  oo.abs_tol = opts.abs_tol;
  oo.max_step = opts.max_step;

  const OdeResult r = integrate_ode45(rhs, horizon.lo, st.A0.data(), horizon.hi,
                                      st.A_path, oo, watch, project);
  st.t_end = r.last_t;
  st.max_asymmetry = max_asym;
  if (r.status == OdeStatus::halted)
    st.blowup_time = r.last_t + 1.0 / last_extreme;
  else if (r.status != OdeStatus::done)
    throw std::runtime_error("integrate_riccati: step size underflow before horizon");
  return st;
}

nlohmann::json HessianComparisonReport::to_json() const {
  nlohmann::json j{{"direction", direction == Direction::lower ? "lower" : "upper"},
                   {"hypothesis_ok", hypothesis_ok},
                   {"hypothesis_note", hypothesis_note},
                   {"lambda0", lambda0},
                   {"margin_min", margin_min},
                   {"t_argmin", t_argmin},
                   {"compared_up_to", compared_up_to},
                   {"tol", tol},
                   {"pass", pass},
                   {"max_asymmetry", max_asymmetry}};
  if (blowup_time)
    j["blowup_time"] = *blowup_time;
  else
    j["blowup_time"] = nullptr;
  return j;
}

HessianComparisonReport verify_hessian_comparison(const RiccatiState& st, Direction dir,
                                                  double tol) {
  HessianComparisonReport rep;
  rep.direction = dir;
  rep.tol = tol;
  rep.blowup_time = st.blowup_time;
  rep.max_asymmetry = st.max_asymmetry;

  const auto ev0 = st.A0.eigenvalues_desc();
  const double lam0 = st.opts.comparison_lambda0
                          ? *st.opts.comparison_lambda0
                          : (dir == Direction::lower ? ev0.back() : ev0.front());
  rep.lambda0 = lam0;

  rep.hypothesis_ok = true;
  if (dir == Direction::lower && ev0.back() < lam0 - 1e-12) {
    rep.hypothesis_ok = false;
    rep.hypothesis_note = "A0 has an eigenvalue below the comparison seed";
  }
  if (dir == Direction::upper && ev0.front() > lam0 + 1e-12) {
    rep.hypothesis_ok = false;
    rep.hypothesis_note = "A0 has an eigenvalue above the comparison seed";
  }

  const warping::WarpingFunction w = warping::solve_jacobi(
      st.path.bound, st.t_begin, 1.0, lam0, {st.t_begin, st.t_end});
  const warping::Interval pos = w.positivity_interval();
  const double standoff = 1e-6 * (st.t_end - st.t_begin + 1.0);
  const double t_hi = std::min(st.t_end, pos.hi - standoff);
  rep.compared_up_to = t_hi;

  // operator-vs-profile ordering along the path
  for (int i = 0; i <= 64 && rep.hypothesis_ok; ++i) {
    const double t = st.t_begin + (t_hi - st.t_begin) * i / 64;
    SymMat r = st.path.R(t);
    r.add_scaled_identity(st.path.bound(t));  // R + G Id
    const auto ev = r.eigenvalues_desc();
    const double scale = 1.0 + r.max_abs();
    if (dir == Direction::lower && ev.front() > 1e-9 * scale) {
      rep.hypothesis_ok = false;
      rep.hypothesis_note = "curvature operator exceeds -G at t=" + std::to_string(t);
    }
    if (dir == Direction::upper && ev.back() < -1e-9 * scale) {
      rep.hypothesis_ok = false;
      rep.hypothesis_note = "curvature operator falls below -G at t=" + std::to_string(t);
    }
  }

  // sample at knots and midpoints up to the comparison end
  double margin_min = std::numeric_limits<double>::infinity();
  double t_argmin = st.t_begin;
  const auto& ap = st.A_path;
  auto consider = [&](double t) {
    if (t > t_hi || t < st.t_begin) return;
    const SymMat a = st.A_at(t);
    const auto ev = a.eigenvalues_desc();
    const double phi = w.ratio(t);
    const double m = dir == Direction::lower ? ev.back() - phi : phi - ev.front();
    if (m < margin_min) {
      margin_min = m;
      t_argmin = t;
    }
  };
  for (std::size_t k = 0; k < ap.knots(); ++k) {
    consider(ap.knot_t(k));
    if (k + 1 < ap.knots()) consider(0.5 * (ap.knot_t(k) + ap.knot_t(k + 1)));
  }

  rep.margin_min = margin_min;
  rep.t_argmin = t_argmin;
  rep.pass = rep.hypothesis_ok && margin_min >= -tol;
  return rep;
}

CurvatureOperatorPath isotropic_path(int dim, double r_value, double bound_value) {
  CurvatureOperatorPath p;
  p.dim = dim;
  p.R = [dim, r_value](double) { return SymMat(dim, r_value); };
  p.bound = warping::CurvatureProfile::constant(bound_value);
  p.note = "isotropic constant operator";
  return p;
}

CurvatureOperatorPath perturbed_path(int dim, const warping::CurvatureProfile& bound,
                                     Direction dir, std::uint64_t seed) {
  // Fixed random rotation Q and smooth positive eigenvalue curves d_i(t);
  // P(t) = Q diag(d_i(t)) Q^T stays positive semidefinite for all t.
  const std::uint64_t key = rng_path_key(seed, 0x9e37);
  std::uint64_t ctr = 0;
  auto draw = [&] { return rng_u01(rng_draw_bits(key, ctr++)); };

  std::vector<std::vector<double>> q(dim, std::vector<double>(dim));
  for (auto& row : q)
    for (auto& v : row) v = normal_icdf(draw());
  // modified Gram-Schmidt
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < i; ++j) {
      double dot = 0.0;
      for (int k = 0; k < dim; ++k) dot += q[i][k] * q[j][k];
      for (int k = 0; k < dim; ++k) q[i][k] -= dot * q[j][k];
    }
    double nrm = 0.0;
    for (int k = 0; k < dim; ++k) nrm += q[i][k] * q[i][k];
    nrm = std::sqrt(nrm);
    if (nrm < 1e-6) {  // astronomically unlikely; fall back to a basis vector
      for (int k = 0; k < dim; ++k) q[i][k] = (k == i) ? 1.0 : 0.0;
    } else {
      for (int k = 0; k < dim; ++k) q[i][k] /= nrm;
    }
  }

  std::vector<double> base(dim), amp(dim), freq(dim), phase(dim);
  for (int i = 0; i < dim; ++i) {
    base[i] = 0.05 + 0.2 * draw();
    amp[i] = 1.5 * draw();
    freq[i] = 0.5 + 1.5 * draw();
    phase[i] = 6.283185307179586 * draw();
  }

  const double sign = (dir == Direction::lower) ? -1.0 : 1.0;
  CurvatureOperatorPath p;
  p.dim = dim;
  p.bound = bound;
  auto g = bound;
  p.R = [dim, q, base, amp, freq, phase, sign, g](double t) {
    SymMat r(dim);
    std::vector<double> d(dim);
    for (int i = 0; i < dim; ++i)
      d[i] = base[i] + amp[i] * 0.5 * (1.0 + std::sin(freq[i] * t + phase[i]));
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double acc = 0.0;
        for (int k = 0; k < dim; ++k) acc += q[k][i] * d[k] * q[k][j];
        r.at(i, j) = sign * acc;
      }
    r.add_scaled_identity(-g(t));
    return r;
  };
  p.note = dir == Direction::lower ? "random operator below -G" : "random operator above -G";
  return p;
}

}  // namespace curvlab::riccati
