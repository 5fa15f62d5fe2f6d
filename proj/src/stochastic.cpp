#include "curvlab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace curvlab::stochastic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Least-squares slope of log G against log t on a geometric grid over
// [lo, hi]. Returns NaN when any sample is non-positive.
double fit_tail_exponent(const warping::CurvatureProfile& G, double lo, double hi,
                         int samples) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double step = std::log(hi / lo) / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    const double t = lo * std::exp(step * i);
    const double g = G(t);
    if (!(g > 0.0)) return kNaN;
    const double x = std::log(t), y = std::log(g);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = samples;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

const char* integral_class_name(IntegralClass c) {
  switch (c) {
    case IntegralClass::divergent: return "divergent";
    case IntegralClass::convergent: return "convergent";
    case IntegralClass::inconclusive: return "inconclusive";
  }
  throw std::logic_error("unreachable integral class");
}

const char* overall_name(CriterionVerdict::Overall o) {
  switch (o) {
    case CriterionVerdict::Overall::complete: return "complete";
    case CriterionVerdict::Overall::incomplete_suspected: return "incomplete_suspected";
    case CriterionVerdict::Overall::inconclusive: return "inconclusive";
  }
  throw std::logic_error("unreachable overall verdict");
}

nlohmann::json CriterionVerdict::to_json() const {
  nlohmann::json j{{"g0_positive", g0_positive},
                   {"nondecreasing", nondecreasing},
                   {"integral", integral_class_name(integral_divergent)},
                   {"borbely_flag", borbely_flag},
                   {"overall", overall_name(overall)},
                   {"note", note}};
  if (std::isnan(fitted_exponent))
    j["fitted_exponent"] = nullptr;
  else
    j["fitted_exponent"] = fitted_exponent;
  return j;
}

CriterionVerdict check_criterion(const warping::CurvatureProfile& G,
                                 double tail_horizon) {
  if (!(tail_horizon > 4.0)) throw std::invalid_argument("tail horizon must exceed 4");
  const warping::Interval dom = G.domain();
  if (dom.lo > 0.0 || dom.hi < tail_horizon)
    throw std::invalid_argument("profile not defined up to the tail horizon");

  CriterionVerdict v;
  v.fitted_exponent = kNaN;
  v.g0_positive = G(0.0) > 0.0;

  v.nondecreasing = true;
  const int n_mono = 10000;
  for (int i = 0; i < n_mono; ++i) {
    const double t = tail_horizon * i / (n_mono - 1);
    const double g = G(t);
    if (G.derivative(t) < -1e-12 * (1.0 + std::fabs(g))) {
      v.nondecreasing = false;
      break;
    }
  }

  const double tail_lo = tail_horizon / 4.0;
  bool tail_positive = true;
  for (int i = 0; i < 256; ++i) {
    const double t = tail_lo + (tail_horizon - tail_lo) * i / 255.0;
    if (!(G(t) > 0.0)) {
      tail_positive = false;
      break;
    }
  }

  if (!tail_positive) {
    v.integral_divergent = IntegralClass::inconclusive;
    v.note = "G is non-positive on the tail, so G^(-1/2) is undefined there";
  } else if (auto cls = G.analytic_tail()) {
    v.integral_divergent = *cls == warping::CurvatureProfile::TailIntegral::divergent
                               ? IntegralClass::divergent
                               : IntegralClass::convergent;
  } else {
    const double p = fit_tail_exponent(G, tail_lo, tail_horizon, 64);
    v.fitted_exponent = p;
    if (p <= 1.9)
      v.integral_divergent = IntegralClass::divergent;
    else if (p >= 2.1)
      v.integral_divergent = IntegralClass::convergent;
    else {
      v.integral_divergent = IntegralClass::inconclusive;
      v.note = "fitted tail exponent sits on the critical boundary";
    }
  }

  if (tail_positive) {
    v.borbely_flag = true;
    const double q_lo = 4.0, q_hi = tail_horizon;
    const double step = std::log(q_hi / q_lo) / 63.0;
    for (int i = 0; i < 64; ++i) {
      const double t = q_lo * std::exp(step * i);
      const double q = t * G(std::sqrt(t)) / G(t);
      if (!std::isfinite(q) || q > 1e6) {
        v.borbely_flag = false;
        break;
      }
    }
  }

  if (v.g0_positive && v.nondecreasing &&
      v.integral_divergent == IntegralClass::divergent)
    v.overall = CriterionVerdict::Overall::complete;
  else if (v.integral_divergent == IntegralClass::convergent)
    v.overall = CriterionVerdict::Overall::incomplete_suspected;
  else
    v.overall = CriterionVerdict::Overall::inconclusive;
  return v;
}

nlohmann::json GrowthReport::to_json() const {
  nlohmann::json j{{"holds", holds}, {"checked", checked}, {"B", bound_constant}};
  if (first_violation_rho)
    j["first_violation_rho"] = *first_violation_rho;
  else
    j["first_violation_rho"] = nullptr;
  return j;
}

GrowthReport check_mean_curvature_growth(const std::function<double(double)>& H_profile,
                                         const warping::CurvatureProfile& G, double B,
                                         warping::Interval range, int samples) {
  if (!(B > 0.0)) throw std::invalid_argument("bound constant must be positive");
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  GrowthReport rep;
  rep.bound_constant = B;
  for (int i = 0; i < samples; ++i) {
    const double rho = range.lo + (range.hi - range.lo) * i / (samples - 1);
    ++rep.checked;
    const double lhs = std::fabs(H_profile(rho));
    const double rhs = B * std::sqrt(G(rho));
    if (!(lhs <= rhs)) {
      rep.holds = false;
      if (!rep.first_violation_rho) rep.first_violation_rho = rho;
    }
  }
  return rep;
}

nlohmann::json ExplosionStats::to_json() const {
  nlohmann::json j{{"paths", paths},
                   {"T", T},
                   {"exploded", exploded},
                   {"absorbed", absorbed},
                   {"domain_exits", domain_exits},
                   {"survival_probability", survival_probability},
                   {"seed", seed}};
  if (std::isfinite(mean_exit_time_of_exploded))
    j["mean_exit_time_of_exploded"] = mean_exit_time_of_exploded;
  else
    j["mean_exit_time_of_exploded"] = nullptr;
  return j;
}

ExplosionStats run_radial_em(const simd::EmParams& em, int paths) {
  if (paths <= 0) throw std::invalid_argument("need a positive path count");
  if (!em.table) throw std::invalid_argument("drift table missing");
  if (!(em.dt > 0.0)) throw std::invalid_argument("dt must be positive");

  ExplosionStats st;
  st.paths = paths;
  st.T = static_cast<double>(em.n_steps) * em.dt;
  st.seed = em.seed;
  st.records.resize(static_cast<std::size_t>(paths));
  simd::active_kernels().em_paths(em, 0, paths, st.records.data());

  double exit_sum = 0.0;
  for (const auto& r : st.records) {
    switch (r.status) {
      case simd::PathStatus::exploded:
        ++st.exploded;
        exit_sum += r.exit_time;
        break;
      case simd::PathStatus::absorbed: ++st.absorbed; break;
      case simd::PathStatus::domain_exit: ++st.domain_exits; break;
      case simd::PathStatus::alive: break;
    }
  }
  st.survival_probability = 1.0 - static_cast<double>(st.exploded) / st.paths;
  st.mean_exit_time_of_exploded = st.exploded > 0 ? exit_sum / st.exploded : kNaN;
  return st;
}

simd::RatioTable make_ratio_table(const std::function<double(double)>& fn,
                                  const std::function<double(double)>& fn_deriv,
                                  double clamp_lo, double split, double r_max,
                                  int fine_nodes, int coarse_nodes) {
  if (!(clamp_lo < split && split < r_max))
    throw std::invalid_argument("table breakpoints must increase");
  if (fine_nodes < 2 || coarse_nodes < 2)
    throw std::invalid_argument("each table segment needs at least two nodes");

  simd::RatioTable t;
  t.clamp_lo = clamp_lo;
  t.r_max = r_max;
  t.a_lo = clamp_lo;
  t.a_n = fine_nodes;
  t.a_dr = (split - clamp_lo) / (fine_nodes - 1);
  t.a_inv_dr = 1.0 / t.a_dr;
  t.b_lo = split;
  t.b_n = coarse_nodes;
  t.b_dr = (r_max - split) / (coarse_nodes - 1);
  t.b_inv_dr = 1.0 / t.b_dr;
  t.val.resize(static_cast<std::size_t>(fine_nodes + coarse_nodes));
  t.sdr.resize(t.val.size());
  for (int i = 0; i < fine_nodes; ++i) {
    const double r = clamp_lo + t.a_dr * i;
    t.val[i] = fn(r);
    t.sdr[i] = fn_deriv(r) * t.a_dr;
  }
  for (int i = 0; i < coarse_nodes; ++i) {
    const double r = split + t.b_dr * i;
    t.val[fine_nodes + i] = fn(r);
    t.sdr[fine_nodes + i] = fn_deriv(r) * t.b_dr;
  }
  return t;
}

ExplosionStats simulate_radial_diffusion(const warping::WarpingFunction& w, int fiber_dim,
                                         double r0, double T, double dt, int paths,
                                         std::uint64_t seed, double explosion_radius) {
  const warping::Interval pos = w.positivity_interval();
  const warping::Interval solved = w.solved_range();
  if (!(r0 > pos.lo && r0 < pos.hi))
    throw std::invalid_argument("start radius outside the positivity interval");

  const bool pole_smooth = w.h0() == 0.0 && w.t0() == 0.0;
  const double hi_edge = std::min(pos.hi, solved.hi);
  const double r_max = std::min(hi_edge - 1e-9 * (1.0 + std::fabs(hi_edge)),
                                explosion_radius + 1.0);
  double clamp_lo;
  if (pole_smooth) {
    clamp_lo = std::min(1e-2, r0 / 2.0);
  } else {
    clamp_lo = pos.lo + 1e-6 * (1.0 + std::fabs(pos.lo));
  }
  if (!(clamp_lo < r_max))
    throw std::invalid_argument("positivity window too small to tabulate the drift");
  const double split = std::min(clamp_lo + 2.0, 0.5 * (clamp_lo + r_max));

  const auto& G = w.profile();
  auto ratio = [&w](double r) { return w.ratio(r); };
  // d/dr (h'/h) = G - (h'/h)^2, straight from the second order equation.
  auto ratio_deriv = [&](double r) {
    const double q = w.ratio(r);
    return G(r) - q * q;
  };
  const simd::RatioTable table =
      make_ratio_table(ratio, ratio_deriv, clamp_lo, split, r_max);

  simd::EmParams em;
  em.r0 = r0;
  em.dt = dt;
  em.sqrt_dt = std::sqrt(dt);
  em.n_steps = static_cast<std::int64_t>(std::llround(T / dt));
  em.drift_scale = fiber_dim / 2.0;
  em.explosion_radius = explosion_radius;
  em.reflect_at_zero = pole_smooth;
  em.absorb_radius = pole_smooth ? -1.0 : clamp_lo;
  em.domain_max = r_max;
  em.seed = seed;
  em.table = &table;
  return run_radial_em(em, paths);
}

std::vector<SurvivalPoint> survival_curve(const ExplosionStats& stats,
                                          const std::vector<double>& times) {
  std::vector<SurvivalPoint> curve;
  curve.reserve(times.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (double T : times) {
    if (T < prev) throw std::invalid_argument("times must be nondecreasing");
    if (T > stats.T * (1.0 + 1e-12))
      throw std::invalid_argument("requested time beyond the simulated horizon");
    prev = T;
    int blown = 0;
    for (const auto& r : stats.records)
      if (r.status == simd::PathStatus::exploded && r.exit_time <= T) ++blown;
    curve.push_back({T, 1.0 - static_cast<double>(blown) / stats.paths});
  }
  return curve;
}

const RadialModel& model_by_name(const std::string& name) {
  // Hyperbolic-plane drift factor coth(r) with its exact curvature profile.
  static const RadialModel sinh_model{
      "sinh",
      [](double r) { return std::cosh(r) / std::sinh(r); },
      [](double r) {
        const double s = std::sinh(r);
        return -1.0 / (s * s);
      },
      1e-2,
      2.0,
      60.0,
      true,
      warping::CurvatureProfile::constant(1.0)};
  // h = exp(r^4) gives the cubic drift factor 4r^3; the criterion profile is
  // a pointwise upper bound for |K| = 12r^2 + 16r^6 with a positive origin
  // value, which any valid curvature bound may add.
  static const RadialModel exp_r4_model{
      "exp_r4",
      [](double r) { return 4.0 * r * r * r; },
      [](double r) { return 12.0 * r * r; },
      0.0,
      2.0,
      1001.0,
      true,
      warping::CurvatureProfile::polynomial({1.0, 0.0, 12.0, 0.0, 0.0, 0.0, 16.0})};
  if (name == "sinh") return sinh_model;
  if (name == "exp_r4") return exp_r4_model;
  throw std::invalid_argument("unknown model: " + name +
                              " (available: sinh, exp_r4)");
}

std::vector<std::string> model_names() { return {"sinh", "exp_r4"}; }

simd::RatioTable make_model_table(const RadialModel& model) {
  return make_ratio_table(model.ratio, model.ratio_deriv, model.clamp_lo, model.split,
                          model.r_max);
}

ExplosionStats simulate_model(const RadialModel& model, const SimParams& p) {
  const simd::RatioTable table = make_model_table(model);
  simd::EmParams em;
  em.r0 = p.r0;
  em.dt = p.dt;
  em.sqrt_dt = std::sqrt(p.dt);
  em.n_steps = static_cast<std::int64_t>(std::llround(p.T / p.dt));
  em.drift_scale = p.fiber_dim / 2.0;
  em.explosion_radius = p.explosion_radius;
  em.reflect_at_zero = model.reflect_at_zero;
  em.absorb_radius = model.reflect_at_zero ? -1.0 : model.clamp_lo;
  em.domain_max = model.r_max;
  em.seed = p.seed;
  em.table = &table;
  return run_radial_em(em, p.paths);
}

}  // namespace curvlab::stochastic
