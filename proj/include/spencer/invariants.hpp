#pragma once

// Conserved quantities of 2D ideal flow tracked as a triple:
// I0 = total vorticity, I1 = Kelvin circulation per material curve, I2 = enstrophy.

#include "spencer/euler2d.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace spencer::inv {

using euler::MarkerCurve;
using euler::RefinedVelocity;
using euler::VelocityField;
using euler::VorticityField;

struct InvariantRecord {
  double t = 0.0;
  double I0 = 0.0;
  std::vector<double> I1;
  double I2 = 0.0;
  double div_max = 0.0;
};

/// A time series together with the labels of its curves (one per I1 entry).
struct InvariantSeries {
  std::vector<std::string> curve_labels;
  std::vector<InvariantRecord> records;
};

struct StrataGrid {
  std::size_t n = 0;
  std::vector<std::int32_t> labels;
};

/// sum zeta * (L/N)^2
double total_vorticity(const VorticityField& zeta);

/// sum zeta^2 * (L/N)^2
double enstrophy(const VorticityField& zeta);

/// Periodic trapezoid sum_m u(x_m) . (x_{m+1} - x_{m-1}) / 2 with minimal-image differences.
double circulation(const MarkerCurve& curve, const RefinedVelocity& u);
double circulation(const MarkerCurve& curve, const VelocityField& u);

/// max_k |k . u_k| / max_k |u_k| over all spectral modes; 0 for a zero field.
double divergence_residual(const VelocityField& u);

InvariantRecord phi_triple(const VorticityField& zeta, const std::vector<MarkerCurve>& curves, double t = 0.0);

/// label = #{tau in thresholds : |zeta| >= tau}; thresholds strictly ascending and non-negative.
StrataGrid strata_classify(const VorticityField& zeta, const std::vector<double>& thresholds);

inline constexpr double kRelativeFloor = 1e-30;

struct ConservationReport {
  double I0 = 0.0;
  double I2 = 0.0;
  std::vector<double> I1;
};

/// |last - first| / max(|first|, 1e-30) per invariant.
ConservationReport conservation_report(const std::vector<InvariantRecord>& series);

/// Plain-text table of a report; identical for in-run and post-hoc use.
std::string format_report(const ConservationReport& report, const std::vector<std::string>& curve_labels);

}  // namespace spencer::inv
