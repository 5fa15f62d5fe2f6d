#include "curvlab/cmc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "curvlab/quadrature.hpp"
#include "curvlab/rootfind.hpp"

namespace curvlab::cmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sinh_pow(double r, int k) { return std::pow(std::sinh(r), k); }

}  // namespace

SinhIntegral::SinhIntegral(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("hyperbolic factor dimension must be >= 2");
}

double SinhIntegral::In(double r) const {
  if (r < 0.0) throw std::invalid_argument("In needs r >= 0");
  if (n_ == 2) return std::cosh(r) - 1.0;
  const int k = n_ - 1;
  // adaptive_simpson's tolerance is absolute; the integrand peaks at
  // sinh(r)^k, which overflows any fixed tolerance for large r.
  const double tol = 1e-13 * std::max(1.0, sinh_pow(r, k));
  return adaptive_simpson([k](double t) { return sinh_pow(t, k); }, 0.0, r, tol);
}

double SinhIntegral::F(double r) const {
  if (r < 0.0) throw std::invalid_argument("F needs r >= 0");
  // The 0/0 at the origin is removable; the two leading series terms carry
  // the value across the switchover radius to well below double precision.
  if (r <= 1e-3)
    return r / n_ - (n_ - 1.0) * r * r * r / (3.0 * n_ * (n_ + 2.0));
  if (n_ == 2) return std::tanh(0.5 * r);
  return In(r) / sinh_pow(r, n_ - 1);
}

double SinhIntegral::dF(double r) const {
  if (r <= 1e-3) {
    // Derivative of the series used in F.
    return 1.0 / n_ - (n_ - 1.0) * r * r / (n_ * (n_ + 2.0));
  }
  return 1.0 - (n_ - 1.0) * (std::cosh(r) / std::sinh(r)) * F(r);
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::subcritical: return "subcritical";
    case Regime::entire_graph: return "entire_graph";
    case Regime::supercritical: return "supercritical";
  }
  throw std::logic_error("unreachable regime");
}

double ProfileCurve::max_flux_drift() const {
  if (samples.empty()) return 0.0;
  const double base = samples.front().flux;
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, std::fabs(s.flux - base));
  return worst;
}

nlohmann::json ProfileCurve::to_json() const {
  nlohmann::json j{{"n", params.n},
                   {"H", params.H},
                   {"I", params.I},
                   {"regime", regime_name(regime)},
                   {"samples", samples.size()},
                   {"closed", closed},
                   {"max_flux_drift", max_flux_drift()}};
  j["critical_radius"] = critical_radius ? nlohmann::json(*critical_radius) : nullptr;
  j["max_height"] = max_height ? nlohmann::json(*max_height) : nullptr;
  if (!samples.empty()) {
    j["r_last"] = samples.back().r;
    j["u_last"] = samples.back().u;
  }
  return j;
}

double flux(double r, double u_prime, const CmcParams& params) {
  if (r < 0.0) throw std::invalid_argument("flux needs r >= 0");
  const SinhIntegral si(params.n);
  double slope_term;
  if (std::isinf(u_prime))
    slope_term = u_prime > 0.0 ? 1.0 : -1.0;
  else
    slope_term = u_prime / std::sqrt(1.0 + u_prime * u_prime);
  return sinh_pow(r, params.n - 1) * slope_term - params.n * params.H * si.In(r);
}

std::optional<double> critical_radius(const CmcParams& params) {
  const int n = params.n;
  const double H = params.H;
  if (!(H > 0.0)) return std::nullopt;
  // nH F(r) climbs to nH/(n-1); it crosses 1 exactly when H > (n-1)/n.
  if (!(n * H > n - 1.0)) return std::nullopt;
  const SinhIntegral si(n);
  auto g = [&](double r) { return n * H * si.F(r) - 1.0; };
  double hi = 1.0;
  while (g(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("critical radius bracket failed");
  }
  return bisect(g, 1e-12, hi, 1e-14);
}

ProfileCurve integrate_profile(const CmcParams& params, double r_max, double dr) {
  if (params.I != 0.0)
    throw std::invalid_argument("integrator covers axis-orthogonal graphs (I = 0) only");
  if (!(params.H >= 0.0)) throw std::invalid_argument("mean curvature must be nonnegative");
  if (!(r_max > 0.0 && dr > 0.0)) throw std::invalid_argument("need r_max > 0 and dr > 0");

  const SinhIntegral si(params.n);
  const double edge = (params.n - 1.0) / params.n;
  ProfileCurve curve;
  curve.params = params;
  if (params.H > edge * (1.0 + 1e-12))
    curve.regime = Regime::supercritical;
  else if (params.H >= edge * (1.0 - 1e-12))
    curve.regime = Regime::entire_graph;
  else
    curve.regime = Regime::subcritical;
  if (curve.regime == Regime::supercritical) curve.critical_radius = critical_radius(params);

  auto slope = [&](double r) -> double {
    const double c = params.n * params.H * si.F(r);
    if (c >= 1.0) return kInf;
    return c / std::sqrt((1.0 - c) * (1.0 + c));
  };

  // Stop the uniform march two steps short of the blow-up radius: the
  // inverse-square-root growth of u' past that point would poison the
  // stepwise quadrature, and the sphere builder covers the remainder with a
  // regularizing substitution anyway.
  const double r_stop =
      curve.critical_radius ? *curve.critical_radius - 2.0 * dr : kInf;

  const long n_steps = std::lround(std::ceil(r_max / dr - 1e-9));
  curve.samples.push_back({0.0, 0.0, 0.0, flux(0.0, 0.0, params)});
  double u = 0.0;
  double r_prev = 0.0, du_prev = 0.0;
  for (long k = 1; k <= n_steps; ++k) {
    const double r = std::min(k * dr, r_max);
    if (r > r_stop) break;
    const double du = slope(r);
    if (std::isinf(du)) break;  // reached the blow-up radius; curve ends here
    const double dum = slope(0.5 * (r_prev + r));
    u += (r - r_prev) / 6.0 * (du_prev + 4.0 * dum + du);
    curve.samples.push_back({r, u, du, flux(r, du, params)});
    r_prev = r;
    du_prev = du;
  }
  return curve;
}

ProfileCurve build_cmc_sphere(const CmcParams& params, double dr) {
  const std::optional<double> r0 = critical_radius(params);
  if (!r0)
    throw std::invalid_argument("no critical radius: sphere profiles need H > (n-1)/n");

  const SinhIntegral si(params.n);
  ProfileCurve curve = integrate_profile(params, *r0, dr);
  curve.critical_radius = r0;
  if (curve.samples.size() < 4) throw std::runtime_error("sphere profile under-resolved");

  // Height left between the last regular sample and the apex. With
  // r = r0 - s^2 the integrand u'(r0 - s^2) 2s extends continuously to
  // sqrt(2/c1) at s = 0, c1 being the slope of nH F at the apex radius.
  const double r_last = curve.samples.back().r;
  const double u_last = curve.samples.back().u;
  const double c1 = params.n * params.H * si.dF(*r0);
  if (!(c1 > 0.0)) throw std::runtime_error("degenerate apex in sphere construction");
  auto integrand = [&](double s) -> double {
    if (s == 0.0) return std::sqrt(2.0 / c1);
    const double r = *r0 - s * s;
    const double c = params.n * params.H * si.F(r);
    if (c >= 1.0) return std::sqrt(2.0 / c1);
    return 2.0 * s * c / std::sqrt((1.0 - c) * (1.0 + c));
  };
  const double s_hi = std::sqrt(*r0 - r_last);
  const double tail = adaptive_simpson(integrand, 0.0, s_hi, 1e-12);
  const double apex_u = u_last + tail;
  curve.max_height = apex_u;

  curve.samples.push_back({*r0, apex_u, kInf, flux(*r0, kInf, params)});

  // Reflected branch, descending in r. Its upward-orientation curvature
  // flips sign, so its flux entries are recorded against -H, where they
  // vanish like the ascending ones.
  const CmcParams mirrored{params.n, -params.H, params.I};
  const std::size_t ascend = curve.samples.size() - 1;
  for (std::size_t i = ascend; i-- > 0;) {
    const ProfileSample& s = curve.samples[i];
    const double du_m = -s.du;
    curve.samples.push_back({s.r, 2.0 * apex_u - s.u, du_m, flux(s.r, du_m, mirrored)});
  }
  curve.closed = true;
  return curve;
}

nlohmann::json MeanCurvatureReport::to_json() const {
  return {{"max_deviation", max_deviation},
          {"argmax_r", argmax_r},
          {"checked", checked},
          {"tol", tol},
          {"pass", pass}};
}

MeanCurvatureReport verify_profile_mean_curvature(const ProfileCurve& curve,
                                                  const CmcParams& params, double tol) {
  if (curve.samples.size() < 8)
    throw std::invalid_argument("curve too sparse to differentiate");

  MeanCurvatureReport rep;
  rep.tol = tol;
  const int n = params.n;
  const double r_skip_hi =
      curve.critical_radius ? *curve.critical_radius - 0.1 : kInf;

  auto slope_term = [&](const ProfileSample& s) -> double {
    double st;
    if (std::isinf(s.du))
      st = s.du > 0.0 ? 1.0 : -1.0;
    else
      st = s.du / std::sqrt(1.0 + s.du * s.du);
    return sinh_pow(s.r, n - 1) * st;
  };

  for (std::size_t i = 1; i + 1 < curve.samples.size(); ++i) {
    const auto& a = curve.samples[i - 1];
    const auto& b = curve.samples[i];
    const auto& c = curve.samples[i + 1];
    if (!(b.r > a.r && c.r > b.r)) continue;  // ascending branch only
    if (b.r <= 0.05 || b.r > r_skip_hi) continue;
    if (std::isinf(a.du) || std::isinf(b.du) || std::isinf(c.du)) continue;

    const double h1 = b.r - a.r, h2 = c.r - b.r;
    const double fa = slope_term(a), fb = slope_term(b), fc = slope_term(c);
    const double dphi =
        (h1 * h1 * fc - h2 * h2 * fa + (h2 * h2 - h1 * h1) * fb) /
        (h1 * h2 * (h1 + h2));
    const double h_rec = dphi / (n * sinh_pow(b.r, n - 1));
    const double dev = std::fabs(h_rec - params.H);
    ++rep.checked;
    if (dev > rep.max_deviation) {
      rep.max_deviation = dev;
      rep.argmax_r = b.r;
    }
  }
  if (rep.checked == 0) throw std::invalid_argument("no usable interior samples");
  rep.pass = rep.max_deviation < tol;
  return rep;
}

}  // namespace curvlab::cmc
