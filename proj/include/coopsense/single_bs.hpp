/// Per-station preprocessing: coarse range/velocity search over a grid of
/// compensation phasors, then compression of the echo matrix into two short
/// feature vectors that are sufficient for the fusion stages.
#pragma once

#include <Eigen/Dense>

#include "coopsense/types.hpp"

namespace coopsense {

/// Uniform range x velocity search grid. Node k of the range axis sits at
/// range_min + k * step with step = (max - min) / (count - 1); a one-node
/// axis collapses onto its minimum.
struct SearchGrid {
  double range_min_m = 0.0;
  double range_max_m = 200.0;
  int range_count = 401;
  double velocity_min_mps = -40.0;
  double velocity_max_mps = 40.0;
  int velocity_count = 321;

  double range_step_m() const {
    return range_count > 1 ? (range_max_m - range_min_m) / (range_count - 1) : 0.0;
  }
  double velocity_step_mps() const {
    return velocity_count > 1
               ? (velocity_max_mps - velocity_min_mps) / (velocity_count - 1)
               : 0.0;
  }
  double range_at(int k) const { return range_min_m + k * range_step_m(); }
  double velocity_at(int p) const { return velocity_min_mps + p * velocity_step_mps(); }

  /// Symmetric grid around a previous estimate; the range axis is clamped to
  /// stay non-negative.
  static SearchGrid centered(double range_m, double range_half_m, int range_count,
                             double velocity_mps, double velocity_half_mps,
                             int velocity_count);

  void validate() const;  // throws ValidationError
};

/// Range compensation matrix, grid.range_count x cfg.subcarriers. Row k
/// cancels the fast-time phase of a target at range_at(k):
/// entry(k, m) = exp(+j 2 pi m df 2 R_k / c).
Eigen::MatrixXcd build_range_compensation(const SearchGrid& grid,
                                          const OfdmConfig& cfg);

/// Velocity compensation matrix, cfg.symbols x grid.velocity_count. Column p
/// cancels the slow-time phase of a target at velocity_at(p):
/// entry(n, p) = exp(-j 2 pi fc 2 v_p n T / c).
Eigen::MatrixXcd build_velocity_compensation(const SearchGrid& grid,
                                             const OfdmConfig& cfg);

struct CoarseEstimate {
  double range_m = 0.0;
  double radial_velocity_mps = 0.0;
  int range_index = 0;
  int velocity_index = 0;
  double peak_magnitude = 0.0;
  Eigen::MatrixXd magnitude;  // full |map| (range x velocity) if requested
};

/// Grid search for the strongest compensated sum. Ties resolve to the lowest
/// (range_index, velocity_index) pair in lexicographic order.
CoarseEstimate coarse_estimate(const EchoMatrix& echo, const SearchGrid& grid,
                               const OfdmConfig& cfg, bool keep_magnitude = false);

/// Compresses the echo matrix along slow time at a fixed velocity reference:
/// out(m) = sum_n echo(m, n) * exp(-j 2 pi fc 2 v_ref n T / c). Length =
/// subcarriers; carries the target's range phase ramp.
CVec range_feature_vector(const EchoMatrix& echo, double velocity_ref_mps,
                          const OfdmConfig& cfg);

/// Compresses along fast time at a fixed range reference:
/// out(n) = sum_m exp(+j 2 pi m df 2 r_ref / c) * echo(m, n). Length =
/// symbols; carries the target's Doppler phase ramp.
CVec velocity_feature_vector(const EchoMatrix& echo, double range_ref_m,
                             const OfdmConfig& cfg);

/// What one station sends to the fusion center.
struct BsReport {
  int bs_index = 0;
  double range_m = 0.0;
  double radial_velocity_mps = 0.0;
  CVec range_features;     // compressed at the reported velocity
  CVec velocity_features;  // compressed at the reported range
};

/// Runs the coarse search on `grid` and compresses at the resulting estimates.
BsReport make_report(const EchoMatrix& echo, const SearchGrid& grid,
                     const OfdmConfig& cfg, int bs_index);

}  // namespace coopsense
