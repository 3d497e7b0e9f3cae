#pragma once

// Time loop shared by the CLI and the test suites: advances a Simulation from a
// RunConfig and records the invariant triple along the way.

#include "spencer/io.hpp"

#include <functional>

namespace spencer::run {

struct Options {
  euler::MarkerCoupling coupling = euler::MarkerCoupling::staged;
  /// Called after every recorded state (including t = 0 and the final state).
  std::function<void(const euler::Simulation&, const inv::InvariantRecord&)> on_record;
};

struct Result {
  inv::InvariantSeries series;
  inv::ConservationReport report;
  std::size_t steps = 0;
  double max_div = 0.0;
  euler::VorticityField initial;
  euler::VorticityField final_state;
  std::vector<euler::MarkerCurve> final_curves;
};

/// Auto dt is cfl_fraction * stable_dt, re-evaluated each step; the last step is
/// shortened to land on t_end. A fixed dt above the CFL limit throws CflViolation.
Result run(const io::RunConfig& cfg, const Options& opts = {});

}  // namespace spencer::run
