#include "spencer/runner.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

namespace spencer::run {

Result run(const io::RunConfig& cfg, const Options& opts) {
  Result res;
  res.initial = cfg.make_vorticity();
  euler::Simulation sim(res.initial, cfg.make_curves(), cfg.dealias, opts.coupling);
  for (const auto& c : sim.curves()) res.series.curve_labels.push_back(c.label);

  auto record = [&] {
    auto r = inv::phi_triple(sim.vorticity(), sim.curves(), sim.time());
    res.max_div = std::max(res.max_div, r.div_max);
    if (opts.on_record) opts.on_record(sim, r);
    res.series.records.push_back(std::move(r));
  };
  record();

  // Relative slack so that accumulated rounding never produces a sliver step.
  const double t_end = cfg.t_end;
  const double eps = 1e-12 * std::max(1.0, t_end);
  while (sim.time() < t_end - eps) {
    const double remaining = t_end - sim.time();
    double dt = cfg.dt ? *cfg.dt : cfg.cfl_fraction * sim.stable_dt();
    if (!std::isfinite(dt)) dt = remaining;
    const bool last = dt >= remaining - eps;
    if (last) dt = remaining;
    sim.step(dt);
    ++res.steps;
    if (last || res.steps % cfg.output_every == 0) record();
    if (last) break;
  }
  if (res.series.records.size() == 1) record();

  spdlog::debug("run finished: {} steps to t={}", res.steps, sim.time());
  res.report = inv::conservation_report(res.series.records);
  res.final_state = sim.vorticity();
  res.final_curves = sim.curves();
  return res;
}

}  // namespace spencer::run
