#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "curvlab/dense_solution.hpp"

namespace curvlab {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

// Called after each accepted step with the new knot; returning false halts the
// integration (status OdeStatus::halted).
using OdeObserver =
    std::function<bool(double t, std::span<const double> y, std::span<const double> f)>;

// Optional state projection applied to each accepted state before it is
// recorded; returning true means the state was changed and the cached stage
// derivative must be refreshed.
using OdeMutator = std::function<bool(double t, std::span<double> y)>;

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0 picks one automatically
  double max_step = 0.0;      // 0 means no cap
  std::size_t max_steps = 10'000'000;
};

enum class OdeStatus { done, halted, step_underflow, max_steps_exceeded };

struct OdeResult {
  OdeStatus status = OdeStatus::done;
  double last_t = 0.0;  // time of the last accepted knot
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

// Adaptive embedded 5(4) Runge-Kutta pair with the first-same-as-last stage
// reused across steps. Integrates from t0 to t_end (either direction) and
// appends every accepted knot, including the initial one, to `out`.
OdeResult integrate_ode45(const OdeRhs& rhs, double t0, std::span<const double> y0,
                          double t_end, DenseSolution& out, const OdeOptions& opts = {},
                          const OdeObserver& observer = {},
                          const OdeMutator& mutator = {});

}  // namespace curvlab
