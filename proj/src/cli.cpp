#include "curvlab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvlab/cmc.hpp"
#include "curvlab/config.hpp"
#include "curvlab/estimates.hpp"
#include "curvlab/ineq.hpp"
#include "curvlab/io.hpp"
#include "curvlab/riccati.hpp"
#include "curvlab/stochastic.hpp"
#include "curvlab/suite.hpp"
#include "curvlab/warping.hpp"

namespace curvlab::cli {

namespace {

using nlohmann::json;

void print_json(const json& j) { std::printf("%s\n", j.dump(2).c_str()); }

std::string fd(double v) { return io::format_double(v); }

warping::CurvatureProfile load_profile(const std::string& file, double constant) {
  if (!file.empty())
    return warping::CurvatureProfile::from_json(json::parse(io::read_text_file(file)));
  return warping::CurvatureProfile::constant(constant);
}

struct JacobiArgs {
  std::string profile_file;
  double constant = 1.0;
  double t0 = 0.0, h0 = 1.0, dh0 = 0.0;
  double lo = 0.0, hi = 5.0;
  std::string out, svg;
  bool as_json = false;
};

int run_jacobi(const JacobiArgs& a) {
  const auto G = load_profile(a.profile_file, a.constant);
  const auto w = warping::solve_jacobi(G, a.t0, a.h0, a.dh0, {a.lo, a.hi});
  if (!a.out.empty()) {
    std::ofstream os(a.out, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open for writing: " + a.out);
    warping::write_warping_csv(w, os);
  }
  if (!a.svg.empty()) {
    io::Series s{"h", {}, {}};
    const auto range = w.solved_range();
    for (int i = 0; i <= 800; ++i) {
      const double t = range.lo + (range.hi - range.lo) * i / 800.0;
      s.x.push_back(t);
      s.y.push_back(w.h(t));
    }
    io::emit_svg_file(a.svg, {s}, "t", "h(t)", "comparison solution");
  }
  json j{{"t0", w.t0()},
         {"h0", w.h0()},
         {"dh0", w.dh0()},
         {"positivity", {w.positivity_interval().lo, w.positivity_interval().hi}},
         {"max_scaled_residual", w.max_scaled_residual()}};
  j["focal_radius"] = w.focal_radius() ? json(*w.focal_radius()) : json();
  if (a.as_json) {
    print_json(j);
  } else {
    std::printf("positivity: (%s, %s)\n", fd(w.positivity_interval().lo).c_str(),
                fd(w.positivity_interval().hi).c_str());
    std::printf("focal radius: %s\n",
                w.focal_radius() ? fd(*w.focal_radius()).c_str() : "none");
    std::printf("max scaled residual: %s\n", fd(w.max_scaled_residual()).c_str());
  }
  return 0;
}

struct RiccatiArgs {
  int dim = 3;
  std::string direction = "lower";
  std::string kind = "perturbed";
  double T = 2.0;
  double bound = 1.0;
  double r_value = -1.0;
  double lambda0 = 1.0;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  bool as_json = false;
};

int run_riccati(const RiccatiArgs& a) {
  const auto dir =
      a.direction == "lower" ? riccati::Direction::lower : riccati::Direction::upper;
  riccati::CurvatureOperatorPath path;
  if (a.kind == "isotropic")
    path = riccati::isotropic_path(a.dim, a.r_value, a.bound);
  else
    path = riccati::perturbed_path(a.dim, warping::CurvatureProfile::constant(a.bound),
                                   dir, a.seed);
  SymMat A0 = SymMat::identity(a.dim);
  A0 *= a.lambda0;
  const auto st = riccati::integrate_riccati(path, A0, {0.0, a.T});
  const auto rep = riccati::verify_hessian_comparison(st, dir, a.tol);
  if (a.as_json) {
    print_json(rep.to_json());
  } else {
    std::printf("hypotheses: %s\n", rep.hypothesis_ok ? "ok" : rep.hypothesis_note.c_str());
    std::printf("margin min: %s at t = %s\n", fd(rep.margin_min).c_str(),
                fd(rep.t_argmin).c_str());
    if (rep.blowup_time)
      std::printf("blow-up near t = %s\n", fd(*rep.blowup_time).c_str());
    std::printf("%s\n", rep.pass ? "PASS" : "FAIL");
  }
  return rep.pass ? 0 : 1;
}

struct BoundArgs {
  std::string scenario;
  bool as_json = false;
};

int run_bound(const BoundArgs& a) {
  const auto s = estimates::scenario_from_json(json::parse(io::read_text_file(a.scenario)));
  const auto rep = estimates::evaluate(s);
  if (a.as_json)
    print_json(rep.to_json());
  else
    std::printf("%s\n", fd(rep.bound).c_str());
  return 0;
}

struct CriterionArgs {
  std::string profile_file;
  std::string model;
  double constant = 1.0;
  double tail = 100.0;
  bool as_json = false;
};

int run_criterion(const CriterionArgs& a) {
  warping::CurvatureProfile G = warping::CurvatureProfile::constant(a.constant);
  if (!a.model.empty())
    G = stochastic::model_by_name(a.model).criterion_G;
  else if (!a.profile_file.empty())
    G = load_profile(a.profile_file, a.constant);
  const auto v = stochastic::check_criterion(G, a.tail);
  if (a.as_json) {
    print_json(v.to_json());
  } else {
    std::printf("G(0) > 0: %s\n", v.g0_positive ? "yes" : "no");
    std::printf("nondecreasing: %s\n", v.nondecreasing ? "yes" : "no");
    std::printf("tail integral: %s\n",
                stochastic::integral_class_name(v.integral_divergent));
    std::printf("overall: %s\n", stochastic::overall_name(v.overall));
  }
  return 0;
}

struct BmArgs {
  std::string model = "sinh";
  int n = 2;
  double r0 = 1.0, T = 5.0, dt = 1e-3;
  int paths = 10000;
  std::uint64_t seed = 42;
  double explosion_radius = 1e3;
  std::string out, survival_out, svg;
  bool as_json = false;
};

int run_bm(const BmArgs& a) {
  if (a.n < 2) throw std::invalid_argument("--n must be at least 2");
  const auto& model = stochastic::model_by_name(a.model);
  stochastic::SimParams p;
  p.fiber_dim = a.n - 1;
  p.r0 = a.r0;
  p.T = a.T;
  p.dt = a.dt;
  p.paths = a.paths;
  p.seed = a.seed;
  p.explosion_radius = a.explosion_radius;
  const auto stats = stochastic::simulate_model(model, p);

  if (!a.out.empty()) {
    std::vector<std::vector<double>> rows;
    rows.reserve(stats.records.size());
    for (std::size_t i = 0; i < stats.records.size(); ++i) {
      const auto& r = stats.records[i];
      rows.push_back({static_cast<double>(i),
                      r.status == simd::PathStatus::exploded ? 1.0 : 0.0,
                      r.exit_time});
    }
    io::write_csv_file(a.out, {"path_id", "exploded", "exit_time"}, rows);
  }
  if (!a.survival_out.empty() || !a.svg.empty()) {
    std::vector<double> times;
    for (int k = 0; k <= 20; ++k) times.push_back(a.T * k / 20.0);
    const auto curve = stochastic::survival_curve(stats, times);
    if (!a.survival_out.empty()) {
      std::vector<std::vector<double>> rows;
      for (const auto& pt : curve) rows.push_back({pt.T, pt.survival});
      io::write_csv_file(a.survival_out, {"T", "survival"}, rows);
    }
    if (!a.svg.empty()) {
      io::Series s{a.model, {}, {}};
      for (const auto& pt : curve) {
        s.x.push_back(pt.T);
        s.y.push_back(pt.survival);
      }
      io::emit_svg_file(a.svg, {s}, "T", "survival probability", "survival curve");
    }
  }
  if (a.as_json) {
    print_json(stats.to_json());
  } else {
    std::printf("paths: %d  exploded: %d  absorbed: %d  domain exits: %d\n",
                stats.paths, stats.exploded, stats.absorbed, stats.domain_exits);
    std::printf("survival probability: %s\n", fd(stats.survival_probability).c_str());
    if (stats.exploded > 0)
      std::printf("mean exit time of exploded: %s\n",
                  fd(stats.mean_exit_time_of_exploded).c_str());
  }
  return 0;
}

struct CmcArgs {
  int n = 2;
  double H = 0.5;
  double rmax = 5.0;
  double dr = 1e-3;
  bool sphere = false;
  double verify_tol = 1e-4;
  std::string out, svg;
  bool as_json = false;
};

int run_cmc(const CmcArgs& a) {
  const cmc::CmcParams params{a.n, a.H, 0.0};
  const auto curve = a.sphere ? cmc::build_cmc_sphere(params, a.dr)
                              : cmc::integrate_profile(params, a.rmax, a.dr);
  const auto rep = cmc::verify_profile_mean_curvature(curve, params, a.verify_tol);

  if (!a.out.empty()) {
    std::vector<std::vector<double>> rows;
    rows.reserve(curve.samples.size());
    for (const auto& s : curve.samples) rows.push_back({s.r, s.u, s.du, s.flux});
    io::write_csv_file(a.out, {"r", "u", "du", "flux"}, rows);
  }
  if (!a.svg.empty()) {
    io::Series s{"profile", {}, {}};
    for (const auto& sm : curve.samples) {
      s.x.push_back(sm.r);
      s.y.push_back(sm.u);
    }
    io::emit_svg_file(a.svg, {s}, "r", "u(r)", "rotational profile");
  }
  if (a.as_json) {
    json j{{"curve", curve.to_json()}, {"verification", rep.to_json()}};
    print_json(j);
  } else {
    std::printf("regime: %s\n", cmc::regime_name(curve.regime));
    if (curve.critical_radius)
      std::printf("critical radius: %s\n", fd(*curve.critical_radius).c_str());
    if (curve.max_height)
      std::printf("max height: %s\n", fd(*curve.max_height).c_str());
    std::printf("max flux drift: %s\n", fd(curve.max_flux_drift()).c_str());
    std::printf("mean curvature check: max deviation %s (%s)\n",
                fd(rep.max_deviation).c_str(), rep.pass ? "PASS" : "FAIL");
  }
  return rep.pass ? 0 : 1;
}

struct VerifyArgs {
  std::string chart;
  std::string patch;
  double alpha = 1.0;
  int grid = 128;
  std::string direction = "both";
  double scale = 1.0;
  double tol_coefficient = 10.0;
  bool refine = false;
  bool as_json = false;
};

int run_verify(const VerifyArgs& a) {
  const auto& chart = ineq::chart_by_name(a.chart);
  const auto patch = ineq::patch_by_name(a.chart, a.patch, a.alpha);
  const auto eik = ineq::check_eikonal(chart);

  ineq::VerifyOptions opts;
  opts.grid = a.grid;
  opts.mean_curvature_scale = a.scale;
  opts.tol_coefficient = a.tol_coefficient;
  opts.refine = a.refine;

  std::vector<ineq::VerificationReport> reps;
  if (a.direction == "direct" || a.direction == "both")
    reps.push_back(ineq::verify_inequality_direct(chart, patch, opts));
  if (a.direction == "reverse" || a.direction == "both")
    reps.push_back(ineq::verify_inequality_reverse(chart, patch, opts));

  bool all = eik.pass;
  for (const auto& r : reps) all = all && r.pass;

  if (a.as_json) {
    json j{{"eikonal", eik.to_json()}, {"reports", json::array()}, {"pass", all}};
    for (const auto& r : reps) j["reports"].push_back(r.to_json());
    print_json(j);
  } else {
    std::printf("eikonal max deviation: %s (%s)\n", fd(eik.max_abs_deviation).c_str(),
                eik.pass ? "ok" : "FAIL");
    for (const auto& r : reps) {
      std::printf("%s: margin min %s (tol %s) %s\n", r.direction.c_str(),
                  fd(r.margin_min).c_str(), fd(r.tol).c_str(),
                  r.pass ? "PASS" : "FAIL");
      if (!std::isnan(r.refined_margin_min))
        std::printf("  refined margin min: %s\n", fd(r.refined_margin_min).c_str());
    }
    std::printf("%s\n", all ? "PASS" : "FAIL");
  }
  return all ? 0 : 1;
}

struct SuiteArgs {
  std::string dir = "suite_out";
  std::uint64_t seed = 42;
  int paths = 10000;
  bool as_json = false;
};

int run_suite_cmd(const SuiteArgs& a) {
  suite::SuiteOptions opts;
  opts.out_dir = a.dir;
  opts.seed = a.seed;
  opts.paths = a.paths;
  const auto res = suite::run_suite(opts);
  if (a.as_json) {
    print_json(res.summary);
  } else {
    for (const auto& c : res.summary.at("checks")) {
      const bool pass = c.at("pass").get<bool>();
      const bool expected_fail = c.at("expected_fail").get<bool>();
      const bool ok = expected_fail ? !pass : pass;
      std::printf("%-32s %s%s\n", c.at("name").get<std::string>().c_str(),
                  ok ? "PASS" : "FAIL",
                  expected_fail ? " (expected failure)" : "");
    }
    std::printf("wrote %zu files under %s\n", res.files.size(), a.dir.c_str());
    std::printf("%s\n", res.all_pass ? "PASS" : "FAIL");
  }
  return res.all_pass ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv) {
  int rc = 0;
  CLI::App app{"numerical workbench for curvature comparison experiments"};
  app.require_subcommand(1);
  std::uint64_t seed0 = 42;
  try {
    seed0 = config::default_seed();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  JacobiArgs ja;
  auto* jac = app.add_subcommand("jacobi", "solve the scalar comparison equation");
  jac->add_option("--profile-file", ja.profile_file, "curvature profile JSON file");
  jac->add_option("--constant", ja.constant, "constant curvature profile value");
  jac->add_option("--t0", ja.t0, "basepoint");
  jac->add_option("--h0", ja.h0, "initial value");
  jac->add_option("--dh0", ja.dh0, "initial derivative");
  jac->add_option("--lo", ja.lo, "left end of the horizon");
  jac->add_option("--hi", ja.hi, "right end of the horizon");
  jac->add_option("--out", ja.out, "CSV output path");
  jac->add_option("--svg", ja.svg, "SVG chart path");
  jac->add_flag("--json", ja.as_json, "machine output");
  jac->callback([&]() { rc = run_jacobi(ja); });

  RiccatiArgs ra;
  ra.seed = seed0;
  auto* ric = app.add_subcommand("riccati", "matrix Riccati comparison run");
  ric->add_option("--dim", ra.dim, "matrix dimension")->check(CLI::Range(1, 16));
  ric->add_option("--direction", ra.direction, "lower or upper")
      ->check(CLI::IsMember({"lower", "upper"}));
  ric->add_option("--kind", ra.kind, "curvature path family")
      ->check(CLI::IsMember({"perturbed", "isotropic"}));
  ric->add_option("--T", ra.T, "horizon");
  ric->add_option("--bound", ra.bound, "scalar comparison profile value");
  ric->add_option("--r-value", ra.r_value, "isotropic curvature value");
  ric->add_option("--lambda0", ra.lambda0, "initial shape operator multiple");
  ric->add_option("--tol", ra.tol, "margin tolerance");
  ric->add_option("--seed", ra.seed, "perturbation seed");
  ric->add_flag("--json", ra.as_json, "machine output");
  ric->callback([&]() { rc = run_riccati(ra); });

  BoundArgs ba;
  auto* bnd = app.add_subcommand("bound", "evaluate a mean curvature bound scenario");
  bnd->add_option("--scenario", ba.scenario, "scenario JSON file")->required();
  bnd->add_flag("--json", ba.as_json, "machine output");
  bnd->callback([&]() { rc = run_bound(ba); });

  CriterionArgs ca;
  auto* cri = app.add_subcommand("criterion", "completeness criterion on a profile");
  cri->add_option("--profile-file", ca.profile_file, "curvature profile JSON file");
  cri->add_option("--model", ca.model, "named diffusion model supplying the profile");
  cri->add_option("--constant", ca.constant, "constant profile value");
  cri->add_option("--tail", ca.tail, "tail horizon");
  cri->add_flag("--json", ca.as_json, "machine output");
  cri->callback([&]() { rc = run_criterion(ca); });

  BmArgs bm;
  bm.seed = seed0;
  auto* bms = app.add_subcommand("bm", "radial diffusion Monte Carlo");
  bms->add_option("--model", bm.model, "drift model")
      ->check(CLI::IsMember(stochastic::model_names()));
  bms->add_option("--n", bm.n, "ambient dimension");
  bms->add_option("--r0", bm.r0, "start radius");
  bms->add_option("--T", bm.T, "horizon");
  bms->add_option("--dt", bm.dt, "step size");
  bms->add_option("--paths", bm.paths, "path count");
  bms->add_option("--seed", bm.seed, "RNG seed");
  bms->add_option("--explosion-radius", bm.explosion_radius, "explosion proxy radius");
  bms->add_option("--out", bm.out, "per-path CSV output path");
  bms->add_option("--survival-out", bm.survival_out, "survival curve CSV path");
  bms->add_option("--svg", bm.svg, "survival curve SVG path");
  bms->add_flag("--json", bm.as_json, "machine output");
  bms->callback([&]() { rc = run_bm(bm); });

  CmcArgs cm;
  auto* cmcs = app.add_subcommand("cmc", "rotational constant mean curvature profiles");
  cmcs->add_option("--n", cm.n, "hyperbolic factor dimension");
  cmcs->add_option("--H", cm.H, "target mean curvature");
  cmcs->add_option("--rmax", cm.rmax, "integration radius");
  cmcs->add_option("--dr", cm.dr, "sample spacing");
  cmcs->add_flag("--sphere", cm.sphere, "build the closed sphere profile");
  cmcs->add_option("--verify-tol", cm.verify_tol, "curvature re-check tolerance");
  cmcs->add_option("--out", cm.out, "CSV output path");
  cmcs->add_option("--svg", cm.svg, "SVG chart path");
  cmcs->add_flag("--json", cm.as_json, "machine output");
  cmcs->callback([&]() { rc = run_cmc(cm); });

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "discrete Laplacian inequality check");
  ver->add_option("--chart", va.chart, "ambient chart name")
      ->required()
      ->check(CLI::IsMember(ineq::chart_names()));
  ver->add_option("--patch", va.patch, "immersion patch name")->required();
  ver->add_option("--alpha", va.alpha, "patch tilt parameter");
  ver->add_option("--grid", va.grid, "nodes per parameter axis");
  ver->add_option("--direction", va.direction, "direct, reverse, or both")
      ->check(CLI::IsMember({"direct", "reverse", "both"}));
  ver->add_option("--scale", va.scale, "mean curvature scale (negative controls)");
  ver->add_option("--tol-coefficient", va.tol_coefficient, "tolerance per grid spacing");
  ver->add_flag("--refine", va.refine, "also evaluate at the doubled grid");
  ver->add_flag("--json", va.as_json, "machine output");
  ver->callback([&]() { rc = run_verify(va); });

  SuiteArgs sa;
  sa.seed = seed0;
  auto* sui = app.add_subcommand("suite", "run every module and write its artifacts");
  sui->add_option("--dir", sa.dir, "output directory");
  sui->add_option("--seed", sa.seed, "RNG seed");
  sui->add_option("--paths", sa.paths, "Monte Carlo path count");
  sui->add_flag("--json", sa.as_json, "machine output");
  sui->callback([&]() { rc = run_suite_cmd(sa); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return rc;
}

}  // namespace curvlab::cli
