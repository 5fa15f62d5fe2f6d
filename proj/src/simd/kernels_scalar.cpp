#include <cmath>

#include "curvlab/rng.hpp"
#include "curvlab/simd/kernels.hpp"

// Reference kernels. The arithmetic here is the contract: the AVX2 versions
// replay these exact operation sequences lane-wise, so any edit to an
// expression below must be mirrored there or the bit-equality tests fail.

namespace curvlab::simd {

double RatioTable::eval(double r) const {
  const double x = r < clamp_lo ? clamp_lo : r;
  const bool seg_a = x < b_lo;
  const double u = seg_a ? (x - a_lo) * a_inv_dr : (x - b_lo) * b_inv_dr;
  int i = static_cast<int>(u);  // u >= 0 here, truncation == floor
  const int n = seg_a ? a_n : b_n;
  if (i > n - 2) i = n - 2;
  if (i < 0) i = 0;
  const double th = u - static_cast<double>(i);
  const int base = seg_a ? 0 : a_n;
  const double v0 = val[base + i], v1 = val[base + i + 1];
  const double s0 = sdr[base + i], s1 = sdr[base + i + 1];
  const double om = 1.0 - th;
  const double h00 = (1.0 + 2.0 * th) * (om * om);
  const double h10 = th * (om * om);
  const double h01 = (th * th) * (3.0 - 2.0 * th);
  const double h11 = (th * th) * (th - 1.0);
  return ((v0 * h00 + s0 * h10) + v1 * h01) + s1 * h11;
}

namespace detail {

void em_paths_scalar(const EmParams& p, std::uint64_t first_path, std::int64_t count,
                     PathResult* out) {
  for (std::int64_t n = 0; n < count; ++n) {
    const std::uint64_t key = rng_path_key(p.seed, first_path + static_cast<std::uint64_t>(n));
    double r = p.r0;
    PathResult res;
    res.status = PathStatus::alive;
    for (std::int64_t k = 0; k < p.n_steps; ++k) {
      const double z = normal_icdf(rng_u01(rng_draw_bits(key, static_cast<std::uint64_t>(k))));
      const double drift = p.drift_scale * p.table->eval(r);
      r = (r + drift * p.dt) + p.sqrt_dt * z;
      if (p.reflect_at_zero && r < 0.0) r = std::fabs(r);
      const double t_now = static_cast<double>(k + 1) * p.dt;
      if (p.absorb_radius >= 0.0 && r <= p.absorb_radius) {
        res = {PathStatus::absorbed, t_now, r};
        break;
      }
      if (r >= p.explosion_radius) {
        res = {PathStatus::exploded, t_now, r};
        break;
      }
      if (r > p.domain_max) {
        res = {PathStatus::domain_exit, t_now, r};
        break;
      }
    }
    if (res.status == PathStatus::alive) {
      res.exit_time = static_cast<double>(p.n_steps) * p.dt;
      res.final_r = r;
    }
    out[n] = res;
  }
}

void lb_apply_scalar(const LbGrid& g) {
  const double inv2du = 1.0 / (2.0 * g.du);
  const double inv2dv = 1.0 / (2.0 * g.dv);
  const int nu = g.nu, nv = g.nv;
  auto id = [nv](int i, int j) { return static_cast<std::size_t>(i) * nv + j; };
  for (int i = 1; i + 1 < nu; ++i)
    for (int j = 1; j + 1 < nv; ++j) {
      const double fx = (g.f[id(i + 1, j)] - g.f[id(i - 1, j)]) * inv2du;
      const double fy = (g.f[id(i, j + 1)] - g.f[id(i, j - 1)]) * inv2dv;
      g.pu[id(i, j)] = g.w11[id(i, j)] * fx + g.w12[id(i, j)] * fy;
      g.pv[id(i, j)] = g.w12[id(i, j)] * fx + g.w22[id(i, j)] * fy;
    }
  for (int i = 2; i + 2 < nu; ++i)
    for (int j = 2; j + 2 < nv; ++j) {
      const double div = (g.pu[id(i + 1, j)] - g.pu[id(i - 1, j)]) * inv2du +
                         (g.pv[id(i, j + 1)] - g.pv[id(i, j - 1)]) * inv2dv;
      g.out[id(i, j)] = div / g.sqrtg[id(i, j)];
    }
}

}  // namespace detail

}  // namespace curvlab::simd
