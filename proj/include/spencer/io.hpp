#pragma once

// File formats: binary field dumps with JSON sidecars, PGM heatmaps,
// invariant CSV series, and Euler run configs.

#include "spencer/invariants.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace spencer::io {

namespace fs = std::filesystem;

/// Shortest round-trip decimal form ("%.17g").
std::string format_number(double v);

// ---- binary dumps ----------------------------------------------------------

/// Writes <stem>.bin (little-endian float64, row-major) and <stem>.json {N, L, t, quantity}.
void write_field(const fs::path& stem, const spectral::GridSpec& g, const std::vector<double>& values, double t,
                 const std::string& quantity);

/// Same layout with an int32 payload; the sidecar records "dtype": "int32".
void write_strata(const fs::path& stem, const spectral::GridSpec& g, const inv::StrataGrid& strata, double t);

struct FieldDump {
  spectral::GridSpec grid;
  double t = 0.0;
  std::string quantity;
  std::vector<double> values;
};
FieldDump read_field(const fs::path& stem);

/// 8-bit greyscale heatmap; values are mapped linearly from [min, max] to [0, 255].
void write_pgm(const fs::path& path, std::size_t n, const std::vector<double>& values);

// ---- CSV series -------------------------------------------------------------

std::string series_header(const std::vector<std::string>& curve_labels);
std::string series_row(const inv::InvariantRecord& r);
void write_series_csv(const fs::path& path, const inv::InvariantSeries& series);
/// Throws IoError if unreadable, ConfigError if the header or a row is malformed.
inv::InvariantSeries read_series_csv(const fs::path& path);

// ---- Euler run config --------------------------------------------------------

struct CurveSpec {
  std::string label;
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
  std::size_t m = 256;
};

struct RunConfig {
  spectral::GridSpec grid;
  std::optional<double> dt;  // empty: automatic
  double t_end = 1.0;
  bool dealias = true;
  std::vector<euler::GaussianVortex> vortices;
  std::vector<CurveSpec> curves;
  std::size_t output_every = 10;
  double cfl_fraction = 0.9;

  std::vector<euler::MarkerCurve> make_curves() const;
  euler::VorticityField make_vorticity() const;
};

/// Parses {grid:{N,L}, dt: number|"auto", t_end, dealias, vortices:[{x,y,alpha,sigma}],
/// curves:[{cx,cy,radius,M,label}], output_every, cfl_fraction}. Unknown keys are rejected.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const fs::path& path);
/// data/presets/<name>.json
RunConfig load_preset(const std::string& name);

std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

}  // namespace spencer::io
