#include "curvlab/ineq.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "curvlab/simd/kernels.hpp"

namespace curvlab::ineq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Mat3 zero_mat() { return {{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}}; }

Christoffel zero_christoffel() { return {zero_mat(), zero_mat(), zero_mat()}; }

double det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 inv3(const Mat3& m) {
  const double d = det3(m);
  if (!(std::fabs(d) > 1e-300)) throw std::domain_error("singular ambient metric");
  const double id = 1.0 / d;
  Mat3 r;
  r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * id;
  r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * id;
  r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * id;
  r[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * id;
  r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * id;
  r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * id;
  r[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * id;
  r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * id;
  r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * id;
  return r;
}

double inner(const Mat3& g, const Vec3& u, const Vec3& v) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += g[i][j] * u[i] * v[j];
  return s;
}

// The registry. Certificates, written against the conventions of the
// comparison machinery (curvature profile G, initial Hessian bound
// lambda0 on the reference hypersurface):
//
// h3-horospheres: hyperbolic 3-space in horospherical coordinates (t,u,v),
//   metric diag(1, e^{2t}, e^{2t}), rho = t measures distance from the
//   horosphere t=0. All sectional curvatures equal -1, so both K >= -G and
//   K <= -G hold with G = 1. The shape operator of every horosphere is the
//   identity, so lambda0 = 1 certifies the Hessian bound in both
//   directions, and every level has mean curvature 1.
//
// h2xr-horocylinder: upper-half-plane model of H^2 times a vertical line,
//   coordinates (x,y,t), metric diag(1/y^2, 1/y^2, 1). rho = -log y is the
//   signed distance from the cylinder over the horocycle y=1, positive on
//   the y<1 side. Sectional curvatures lie in [-1, 0]: the direct
//   certificate needs K >= -G, hence G = 1, and the Hessian of rho on the
//   cylinder is diag(1, 0) <= 1 in the orthonormal frame, so lambda0 = 1.
//   The reverse certificate needs K <= -G, hence G = 0, with
//   diag(1, 0) >= 0 giving lambda0 = 0. Levels have mean curvature 1/2
//   (horocycle curvature 1 averaged with the flat vertical direction).
//
// euclidean: flat space, rho = z to the plane z=0. Curvature is identically
//   zero and the planes are totally geodesic, so both directions carry
//   G = 0, lambda0 = 0, and the levels have mean curvature 0.
AmbientChart make_h3() {
  AmbientChart c;
  c.name = "h3-horospheres";
  c.metric = [](const Vec3& p) {
    const double e2t = std::exp(2.0 * p[0]);
    Mat3 g = zero_mat();
    g[0][0] = 1.0;
    g[1][1] = e2t;
    g[2][2] = e2t;
    return g;
  };
  c.christoffel = [](const Vec3& p) {
    const double e2t = std::exp(2.0 * p[0]);
    Christoffel G = zero_christoffel();
    G[0][1][1] = -e2t;
    G[0][2][2] = -e2t;
    G[1][0][1] = G[1][1][0] = 1.0;
    G[2][0][2] = G[2][2][0] = 1.0;
    return G;
  };
  c.rho = [](const Vec3& p) { return p[0]; };
  c.drho = [](const Vec3&) { return Vec3{1.0, 0.0, 0.0}; };
  c.equidistant_mean_curvature = 1.0;
  c.direct_G = warping::CurvatureProfile::constant(1.0);
  c.direct_lambda0 = 1.0;
  c.reverse_G = warping::CurvatureProfile::constant(1.0);
  c.reverse_lambda0 = 1.0;
  c.sample_box = {warping::Interval{-0.5, 0.5}, warping::Interval{-1.0, 1.0},
                  warping::Interval{-1.0, 1.0}};
  return c;
}

AmbientChart make_h2xr() {
  AmbientChart c;
  c.name = "h2xr-horocylinder";
  c.metric = [](const Vec3& p) {
    const double iy2 = 1.0 / (p[1] * p[1]);
    Mat3 g = zero_mat();
    g[0][0] = iy2;
    g[1][1] = iy2;
    g[2][2] = 1.0;
    return g;
  };
  c.christoffel = [](const Vec3& p) {
    const double iy = 1.0 / p[1];
    Christoffel G = zero_christoffel();
    G[0][0][1] = G[0][1][0] = -iy;
    G[1][0][0] = iy;
    G[1][1][1] = -iy;
    return G;
  };
  c.rho = [](const Vec3& p) { return -std::log(p[1]); };
  c.drho = [](const Vec3& p) { return Vec3{0.0, -1.0 / p[1], 0.0}; };
  c.equidistant_mean_curvature = 0.5;
  c.direct_G = warping::CurvatureProfile::constant(1.0);
  c.direct_lambda0 = 1.0;
  c.reverse_G = warping::CurvatureProfile::constant(0.0);
  c.reverse_lambda0 = 0.0;
  c.sample_box = {warping::Interval{-1.0, 1.0}, warping::Interval{0.2, 2.0},
                  warping::Interval{-1.0, 1.0}};
  return c;
}

AmbientChart make_euclidean() {
  AmbientChart c;
  c.name = "euclidean";
  c.metric = [](const Vec3&) {
    Mat3 g = zero_mat();
    g[0][0] = g[1][1] = g[2][2] = 1.0;
    return g;
  };
  c.christoffel = [](const Vec3&) { return zero_christoffel(); };
  c.rho = [](const Vec3& p) { return p[2]; };
  c.drho = [](const Vec3&) { return Vec3{0.0, 0.0, 1.0}; };
  c.equidistant_mean_curvature = 0.0;
  c.direct_G = warping::CurvatureProfile::constant(0.0);
  c.direct_lambda0 = 0.0;
  c.reverse_G = warping::CurvatureProfile::constant(0.0);
  c.reverse_lambda0 = 0.0;
  c.sample_box = {warping::Interval{-1.0, 1.0}, warping::Interval{-1.0, 1.0},
                  warping::Interval{-1.0, 1.0}};
  return c;
}

}  // namespace

const AmbientChart& chart_by_name(const std::string& name) {
  static const AmbientChart h3 = make_h3();
  static const AmbientChart h2xr = make_h2xr();
  static const AmbientChart eu = make_euclidean();
  if (name == "h3-horospheres") return h3;
  if (name == "h2xr-horocylinder") return h2xr;
  if (name == "euclidean") return eu;
  throw std::invalid_argument(
      "unknown chart: " + name +
      " (available: h3-horospheres, h2xr-horocylinder, euclidean)");
}

std::vector<std::string> chart_names() {
  return {"h3-horospheres", "h2xr-horocylinder", "euclidean"};
}

nlohmann::json EikonalReport::to_json() const {
  return {{"max_abs_deviation", max_abs_deviation},
          {"samples", samples},
          {"tol", tol},
          {"pass", pass}};
}

EikonalReport check_eikonal(const AmbientChart& chart, int samples_per_axis,
                            double tol) {
  if (samples_per_axis < 2) throw std::invalid_argument("need at least 2 samples per axis");
  EikonalReport rep;
  rep.tol = tol;
  for (int i = 0; i < samples_per_axis; ++i)
    for (int j = 0; j < samples_per_axis; ++j)
      for (int k = 0; k < samples_per_axis; ++k) {
        auto coord = [&](int idx, int step) {
          const auto& box = chart.sample_box[idx];
          return box.lo + (box.hi - box.lo) * step / (samples_per_axis - 1);
        };
        const Vec3 p{coord(0, i), coord(1, j), coord(2, k)};
        const Mat3 ginv = inv3(chart.metric(p));
        const Vec3 dp = chart.drho(p);
        const double norm = std::sqrt(inner(ginv, dp, dp));
        rep.max_abs_deviation = std::max(rep.max_abs_deviation, std::fabs(norm - 1.0));
        ++rep.samples;
      }
  rep.pass = rep.max_abs_deviation <= tol;
  return rep;
}

ImmersionPatch patch_by_name(const std::string& chart_name, const std::string& patch_name,
                             double alpha) {
  ImmersionPatch p;
  p.name = patch_name;
  if (chart_name == "h3-horospheres") {
    if (patch_name == "equidistant") {
      p.phi = [](double u, double v) { return Vec3{0.3, u, v}; };
      p.a_range = {-1.0, 1.0};
      p.b_range = {-1.0, 1.0};
      return p;
    }
  } else if (chart_name == "h2xr-horocylinder") {
    if (patch_name == "tilted") {
      p.phi = [alpha](double x, double w) { return Vec3{x, std::exp(w), alpha * w}; };
      p.a_range = {-1.0, 1.0};
      p.b_range = {-1.0, -0.05};
      return p;
    }
    if (patch_name == "equidistant") {
      const double y = std::exp(-0.3);
      p.phi = [y](double x, double t) { return Vec3{x, y, t}; };
      p.a_range = {-1.0, 1.0};
      p.b_range = {-1.0, 1.0};
      return p;
    }
  } else if (chart_name == "euclidean") {
    if (patch_name == "plane") {
      p.phi = [](double a, double b) { return Vec3{a, b, 0.25}; };
      p.a_range = {-1.0, 1.0};
      p.b_range = {-1.0, 1.0};
      return p;
    }
    if (patch_name == "sphere-cap") {
      p.phi = [](double th, double ps) {
        return Vec3{std::sin(th) * std::cos(ps), std::sin(th) * std::sin(ps),
                    std::cos(th)};
      };
      p.a_range = {std::acos(0.9), std::acos(0.6)};
      p.b_range = {0.2, 1.2};
      return p;
    }
  } else {
    throw std::invalid_argument("unknown chart: " + chart_name);
  }
  throw std::invalid_argument("unknown patch '" + patch_name + "' for chart " +
                              chart_name);
}

std::vector<std::string> patch_names(const std::string& chart_name) {
  if (chart_name == "h3-horospheres") return {"equidistant"};
  if (chart_name == "h2xr-horocylinder") return {"tilted", "equidistant"};
  if (chart_name == "euclidean") return {"plane", "sphere-cap"};
  throw std::invalid_argument("unknown chart: " + chart_name);
}

PatchGeometry build_geometry(const AmbientChart& chart, const ImmersionPatch& patch,
                             int na, int nb) {
  if (na < 5 || nb < 5) throw std::invalid_argument("grid needs at least 5 nodes per axis");
  PatchGeometry g;
  g.na = na;
  g.nb = nb;
  g.da = patch.a_range.length() / (na - 1);
  g.db = patch.b_range.length() / (nb - 1);
  const std::size_t total = static_cast<std::size_t>(na) * nb;

  std::vector<Vec3> pos(total);
  g.rho.resize(total);
  g.mean_h.assign(total, kNaN);
  g.sqrtg.assign(total, 1.0);
  g.w11.assign(total, 1.0);
  g.w12.assign(total, 0.0);
  g.w22.assign(total, 1.0);

  auto id = [nb](int i, int j) { return static_cast<std::size_t>(i) * nb + j; };
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      const double a = patch.a_range.lo + g.da * i;
      const double b = patch.b_range.lo + g.db * j;
      pos[id(i, j)] = patch.phi(a, b);
      g.rho[id(i, j)] = chart.rho(pos[id(i, j)]);
    }

  const double i2da = 1.0 / (2.0 * g.da), i2db = 1.0 / (2.0 * g.db);
  for (int i = 1; i + 1 < na; ++i)
    for (int j = 1; j + 1 < nb; ++j) {
      const Vec3& c = pos[id(i, j)];
      const Vec3 &xp = pos[id(i + 1, j)], &xm = pos[id(i - 1, j)];
      const Vec3 &yp = pos[id(i, j + 1)], &ym = pos[id(i, j - 1)];
      const Vec3 &pp = pos[id(i + 1, j + 1)], &pm = pos[id(i + 1, j - 1)];
      const Vec3 &mp = pos[id(i - 1, j + 1)], &mm = pos[id(i - 1, j - 1)];

      Vec3 ta, tb, saa, sbb, sab;
      for (int k = 0; k < 3; ++k) {
        ta[k] = (xp[k] - xm[k]) * i2da;
        tb[k] = (yp[k] - ym[k]) * i2db;
        saa[k] = (xp[k] - 2.0 * c[k] + xm[k]) / (g.da * g.da);
        sbb[k] = (yp[k] - 2.0 * c[k] + ym[k]) / (g.db * g.db);
        sab[k] = ((pp[k] - pm[k]) - (mp[k] - mm[k])) * i2da * i2db;
      }

      const Mat3 amb = chart.metric(c);
      const Christoffel chr = chart.christoffel(c);

      const double e = inner(amb, ta, ta);
      const double fcross = inner(amb, ta, tb);
      const double gg = inner(amb, tb, tb);
      const double det = e * gg - fcross * fcross;
      if (!(e > 0.0 && det > 0.0))
        throw std::domain_error("degenerate induced metric on the patch");
      const double gi11 = gg / det, gi12 = -fcross / det, gi22 = e / det;

      // Covariant second derivatives of the immersion in ambient
      // coordinates, then the normal projection.
      const std::array<const Vec3*, 2> tan{&ta, &tb};
      std::array<std::array<Vec3, 2>, 2> pi;
      const std::array<const Vec3*, 2> sec_aa_ab{&saa, &sab};
      const std::array<const Vec3*, 2> sec_ab_bb{&sab, &sbb};
      for (int ii = 0; ii < 2; ++ii)
        for (int jj = 0; jj < 2; ++jj) {
          const Vec3& sec = *(ii == 0 ? sec_aa_ab : sec_ab_bb)[jj];
          Vec3 v;
          for (int k = 0; k < 3; ++k) {
            double corr = 0.0;
            for (int p2 = 0; p2 < 3; ++p2)
              for (int q = 0; q < 3; ++q)
                corr += chr[k][p2][q] * (*tan[ii])[p2] * (*tan[jj])[q];
            v[k] = sec[k] + corr;
          }
          pi[ii][jj] = v;
        }
      const std::array<std::array<double, 2>, 2> ginv{{{gi11, gi12}, {gi12, gi22}}};
      for (int ii = 0; ii < 2; ++ii)
        for (int jj = 0; jj < 2; ++jj) {
          const double c1 = inner(amb, pi[ii][jj], ta);
          const double c2 = inner(amb, pi[ii][jj], tb);
          for (int k = 0; k < 3; ++k)
            pi[ii][jj][k] -= (ginv[0][0] * c1 + ginv[0][1] * c2) * ta[k] +
                             (ginv[1][0] * c1 + ginv[1][1] * c2) * tb[k];
        }
      Vec3 hvec{0.0, 0.0, 0.0};
      for (int ii = 0; ii < 2; ++ii)
        for (int jj = 0; jj < 2; ++jj)
          for (int k = 0; k < 3; ++k) hvec[k] += ginv[ii][jj] * pi[ii][jj][k] / 2.0;
      g.mean_h[id(i, j)] = std::sqrt(std::max(0.0, inner(amb, hvec, hvec)));

      const double sq = std::sqrt(det);
      g.sqrtg[id(i, j)] = sq;
      g.w11[id(i, j)] = sq * gi11;
      g.w12[id(i, j)] = sq * gi12;
      g.w22[id(i, j)] = sq * gi22;
    }
  return g;
}

namespace {

std::vector<double> apply_lb(const PatchGeometry& geo, const std::vector<double>& f) {
  const std::size_t total = static_cast<std::size_t>(geo.na) * geo.nb;
  if (f.size() != total) throw std::invalid_argument("f has the wrong grid size");
  std::vector<double> pu(total, 0.0), pv(total, 0.0), out(total, kNaN);
  simd::LbGrid grid;
  grid.nu = geo.na;
  grid.nv = geo.nb;
  grid.du = geo.da;
  grid.dv = geo.db;
  grid.sqrtg = geo.sqrtg.data();
  grid.w11 = geo.w11.data();
  grid.w12 = geo.w12.data();
  grid.w22 = geo.w22.data();
  grid.f = f.data();
  grid.pu = pu.data();
  grid.pv = pv.data();
  grid.out = out.data();
  simd::active_kernels().lb_apply(grid);
  return out;
}

VerificationReport verify_impl(const AmbientChart& chart, const ImmersionPatch& patch,
                               Direction dir, const VerifyOptions& options) {
  const int n = options.grid;
  const PatchGeometry geo = build_geometry(chart, patch, n, n);
  const std::size_t total = static_cast<std::size_t>(n) * n;

  double rho_min = geo.rho[0], rho_max = geo.rho[0];
  for (double r : geo.rho) {
    rho_min = std::min(rho_min, r);
    rho_max = std::max(rho_max, r);
  }
  const bool direct = dir == Direction::direct;
  const auto& G = direct ? chart.direct_G : chart.reverse_G;
  const double lam0 = direct ? chart.direct_lambda0 : chart.reverse_lambda0;
  const warping::Interval horizon{std::min(0.0, rho_min - 0.5),
                                  std::max(0.0, rho_max + 0.5)};
  const warping::WarpingFunction w = warping::solve_jacobi(G, 0.0, 1.0, lam0, horizon);
  const warping::BarrierFunction barrier = warping::build_barrier(w, 0.0);

  std::vector<double> f(total);
  for (std::size_t k = 0; k < total; ++k) f[k] = barrier.g(geo.rho[k]);
  const std::vector<double> lap = apply_lb(geo, f);

  VerificationReport rep;
  rep.chart = chart.name;
  rep.patch = patch.name;
  rep.direction = direction_name(dir);
  rep.grid = n;
  rep.margin_min = std::numeric_limits<double>::infinity();
  rep.refined_margin_min = kNaN;

  const double hd = chart.equidistant_mean_curvature;
  auto id = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };
  for (int i = 2; i + 2 < n; ++i)
    for (int j = 2; j + 2 < n; ++j) {
      const std::size_t k = id(i, j);
      const double rho = geo.rho[k];
      const double ratio = barrier.ratio(rho);
      const double habs = geo.mean_h[k] * options.mean_curvature_scale;
      const double lhs = lap[k] / barrier.h(rho);
      const double rhs = direct ? 2.0 * hd - 2.0 * ratio - 2.0 * habs + 2.0 * ratio
                                : 2.0 * (ratio - habs);
      const double margin = lhs - rhs;
      ++rep.checked;
      rep.max_abs_laplacian = std::max(rep.max_abs_laplacian, std::fabs(lap[k]));
      if (margin < rep.margin_min) {
        rep.margin_min = margin;
        rep.argmin_a = patch.a_range.lo + geo.da * i;
        rep.argmin_b = patch.b_range.lo + geo.db * j;
      }
    }
  rep.tol = options.tol_coefficient * std::max(geo.da, geo.db);
  rep.pass = rep.margin_min >= -rep.tol;

  if (options.refine) {
    VerifyOptions fine = options;
    fine.refine = false;
    fine.grid = 2 * n;
    rep.refined_margin_min = verify_impl(chart, patch, dir, fine).margin_min;
  }
  return rep;
}

}  // namespace

std::vector<double> discrete_laplace_beltrami(const AmbientChart& chart,
                                              const ImmersionPatch& patch, int na,
                                              int nb, const std::vector<double>& f) {
  return apply_lb(build_geometry(chart, patch, na, nb), f);
}

const char* direction_name(Direction d) {
  return d == Direction::direct ? "direct" : "reverse";
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j{{"chart", chart},
                   {"patch", patch},
                   {"direction", direction},
                   {"grid", grid},
                   {"margin_min", margin_min},
                   {"argmin", {argmin_a, argmin_b}},
                   {"max_abs_laplacian", max_abs_laplacian},
                   {"checked", checked},
                   {"tol", tol},
                   {"pass", pass}};
  j["refined_margin_min"] =
      std::isnan(refined_margin_min) ? nlohmann::json() : nlohmann::json(refined_margin_min);
  return j;
}

VerificationReport verify_inequality_direct(const AmbientChart& chart,
                                            const ImmersionPatch& patch,
                                            const VerifyOptions& options) {
  return verify_impl(chart, patch, Direction::direct, options);
}

VerificationReport verify_inequality_reverse(const AmbientChart& chart,
                                             const ImmersionPatch& patch,
                                             const VerifyOptions& options) {
  return verify_impl(chart, patch, Direction::reverse, options);
}

}  // namespace curvlab::ineq
