#pragma once

#include <cstdint>
#include <vector>

namespace curvlab::simd {

// Uniform-grid cubic Hermite table of the radial drift factor, split into a
// fine segment near the inner clamp and a coarse segment out to the far
// boundary. Values and dr-scaled slopes of both segments are concatenated so
// a kernel can address them with one base offset per lane.
struct RatioTable {
  double a_lo = 0.0, a_dr = 0.0, a_inv_dr = 0.0;
  double b_lo = 0.0, b_dr = 0.0, b_inv_dr = 0.0;
  int a_n = 0, b_n = 0;
  std::vector<double> val;  // a_n values then b_n values
  std::vector<double> sdr;  // matching slopes premultiplied by the segment dr
  double clamp_lo = 0.0;    // queries below here evaluate at clamp_lo
  double r_max = 0.0;       // upper edge of the table

  // Reference evaluation; the vector kernels reproduce this arithmetic
  // bit for bit.
  double eval(double r) const;
};

enum class PathStatus : std::uint8_t { alive = 0, exploded = 1, absorbed = 2, domain_exit = 3 };

struct PathResult {
  PathStatus status = PathStatus::alive;
  double exit_time = 0.0;
  double final_r = 0.0;
};

struct EmParams {
  double r0 = 1.0;
  double dt = 1e-3;
  double sqrt_dt = 0.0;  // caller supplies sqrt(dt) so all kernels share one value
  std::int64_t n_steps = 0;
  double drift_scale = 0.5;  // fiber_dim / 2
  double explosion_radius = 1e3;
  double absorb_radius = -1.0;  // negative disables absorption
  bool reflect_at_zero = true;
  double domain_max = 0.0;  // exceeding this (below explosion) marks domain_exit
  std::uint64_t seed = 42;
  const RatioTable* table = nullptr;
};

// Advances `count` paths starting at index `first_path`, writing one result
// per path. Every random increment is a pure function of
// (seed, path index, step), so block width and path order never change the
// trajectory.
using EmKernel = void (*)(const EmParams&, std::uint64_t first_path, std::int64_t count,
                          PathResult* out);

// Divergence-form metric Laplacian stencil on a structured grid, row-major
// with the second index fastest: idx = i*nv + j. Pass 1 fills the weighted
// gradient fluxes pu, pv on the simply-interior nodes; pass 2 writes the
// Laplacian on the doubly-interior nodes. Border entries of `out` are left
// untouched.
struct LbGrid {
  int nu = 0, nv = 0;
  double du = 0.0, dv = 0.0;
  const double* sqrtg = nullptr;
  const double* w11 = nullptr;  // sqrtg * g^{11}
  const double* w12 = nullptr;
  const double* w22 = nullptr;
  const double* f = nullptr;
  double* pu = nullptr;  // scratch, nu*nv
  double* pv = nullptr;  // scratch, nu*nv
  double* out = nullptr;
};
using LbKernel = void (*)(const LbGrid&);

struct KernelTable {
  const char* name;
  EmKernel em_paths;
  LbKernel lb_apply;
};

const KernelTable& scalar_kernels();
// Null when the running CPU cannot execute AVX2.
const KernelTable* avx2_kernels();
// Best available table, overridable with CURVLAB_SIMD=scalar or =avx2 (an
// unsupported request falls back to scalar).
const KernelTable& active_kernels();

namespace detail {
void em_paths_scalar(const EmParams&, std::uint64_t, std::int64_t, PathResult*);
void lb_apply_scalar(const LbGrid&);
void em_paths_avx2(const EmParams&, std::uint64_t, std::int64_t, PathResult*);
void lb_apply_avx2(const LbGrid&);
bool cpu_has_avx2();
}  // namespace detail

}  // namespace curvlab::simd
