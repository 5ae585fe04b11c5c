/// Monte Carlo experiment harness: draws scenarios, runs the per-station
/// preprocessing once per trial, feeds the three estimation modes from the
/// shared reports, and aggregates RMSE rows for CSV output.
///
/// Per-station estimates come straight off the configured search grid, so
/// their accuracy is bounded by the grid step. The fusion lattices run
/// twice: the configured lattice, then a refined pass centered on the first
/// argmax. Per-trial random streams are derived from (master_seed, sweep
/// point, trial index), which makes results independent of worker count and
/// bit-identical across runs; scene draws ignore the SNR axis so curves
/// versus SNR share scenes and differ only through the noise.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coopsense/fusion_location.hpp"
#include "coopsense/single_bs.hpp"
#include "coopsense/types.hpp"

namespace coopsense {

enum class Mode { single, symbol, mle };

std::string mode_name(Mode m);
std::optional<Mode> mode_from_name(const std::string& name);

/// Square lattice sizing for the two fusion passes.
struct LatticeParams {
  double half_extent = 5.0;
  double spacing = 0.1;
  double refine_half_extent = 0.15;
  double refine_spacing = 0.002;
};

struct HarnessConfig {
  OfdmConfig ofdm;
  SearchGrid grid;  // per-station search; its step sets single-station accuracy

  LatticeParams location_lattice{5.0, 0.1, 0.15, 0.002};
  LatticeParams velocity_lattice{2.0, 0.05, 0.075, 0.001};

  // Scene: targets drawn uniformly in the zone with a uniform heading at
  // fixed speed; stations sit on an arc around the zone center.
  Vec2 zone_min{0.0, 0.0};
  Vec2 zone_max{10.0, 10.0};
  double target_speed_mps = 27.0;
  double bs_arc_radius_m = 100.0;
  SensingRegion region{{5.0, 5.0}, 60.0};
  std::vector<Vec2> explicit_bs;  // overrides the arc layout when non-empty
  std::vector<double> gain_magnitudes;  // per station; default all 1

  // Sweep axes.
  std::vector<double> snr_dbs{-5.0};
  std::vector<int> bs_counts{3};
  std::vector<double> theta_degs;  // geometry sweep (two-station spacing)
  std::vector<Mode> modes{Mode::single, Mode::symbol, Mode::mle};
  int trials = 1000;
  std::uint64_t master_seed = 1;
  bool noiseless = false;
  int workers = 0;  // 0 = hardware concurrency

  // Pinned scene for single-trial diagnostics (otherwise drawn from seed).
  std::optional<Vec2> fixed_target;
  std::optional<Vec2> fixed_velocity;

  void validate() const;
};

/// Stations on the arc. count == 2 places them at 90 +- theta/2 degrees
/// around the zone center; count >= 3 spaces them equally starting at 90
/// degrees (theta is ignored).
std::vector<Vec2> bs_layout(int count, double theta_deg, const Vec2& zone_center,
                            double radius);

/// Subtended spacing reported in the theta_deg CSV column for a layout.
double layout_theta_deg(int count, double theta_deg);

struct ResultRow {
  std::string mode;
  std::string metric;  // range | radial_velocity | location | velocity
  double snr_db = 0.0;
  int bs_count = 0;
  double theta_deg = 0.0;
  int nc = 0;
  int ns = 0;
  int trials = 0;
  int failures = 0;
  double rmse = 0.0;
};

/// Sweep over snr_dbs x bs_counts with the default arc layout.
std::vector<ResultRow> run_snr_bs_sweep(const HarnessConfig& cfg);

/// Two-station location study over theta_degs (velocity estimation is
/// skipped; the study measures location accuracy versus geometry).
std::vector<ResultRow> run_geometry_sweep(const HarnessConfig& cfg);

/// One fully instrumented trial for the CLI.
struct SingleTrialResult {
  Scenario scenario;
  double snr_db = 0.0;
  std::vector<double> true_ranges;
  std::vector<double> true_radials;
  std::vector<BsReport> reports;
  bool location_ok = false;
  bool velocity_ok = false;
  Vec2 rough_fix{0.0, 0.0};
  Vec2 symbol_location{0.0, 0.0};
  Vec2 symbol_velocity{0.0, 0.0};
  Vec2 mle_location{0.0, 0.0};
  Vec2 mle_velocity{0.0, 0.0};
};

SingleTrialResult run_single_trial(const HarnessConfig& cfg, double snr_db,
                                   int bs_count, double theta_deg,
                                   std::uint64_t trial_index);

/// Writes rows sorted by (mode, metric, snr_db, bs_count, theta_deg, nc, ns)
/// with %.6g numbers and LF line ends. Throws ValidationError on duplicate
/// axis tuples.
void write_csv(std::ostream& os, std::span<const ResultRow> rows);
std::string csv_string(std::span<const ResultRow> rows);

/// Human-readable aligned table of the same rows.
void write_summary(std::ostream& os, std::span<const ResultRow> rows);

/// Diagnostic dump of a weight map as CSV (x,y,weight per line).
void write_weight_grid_csv(std::ostream& os, const Lattice& lattice,
                           const Eigen::MatrixXd& grid);

}  // namespace coopsense
