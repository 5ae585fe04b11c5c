#include "coopsense/single_bs.hpp"

#include <algorithm>
#include <cmath>

namespace coopsense {

namespace {

void check_echo_shape(const EchoMatrix& echo, const OfdmConfig& cfg) {
  if (echo.rows() != cfg.subcarriers || echo.cols() != cfg.symbols)
    throw ValidationError("echo matrix shape does not match the waveform");
}

}  // namespace

SearchGrid SearchGrid::centered(double range_m, double range_half_m,
                                int range_count, double velocity_mps,
                                double velocity_half_mps, int velocity_count) {
  SearchGrid g;
  g.range_min_m = std::max(0.0, range_m - range_half_m);
  g.range_max_m = range_m + range_half_m;
  g.range_count = range_count;
  g.velocity_min_mps = velocity_mps - velocity_half_mps;
  g.velocity_max_mps = velocity_mps + velocity_half_mps;
  g.velocity_count = velocity_count;
  g.validate();
  return g;
}

void SearchGrid::validate() const {
  auto axis_ok = [](double lo, double hi, int count) {
    if (count < 1 || !std::isfinite(lo) || !std::isfinite(hi)) return false;
    if (count == 1) return hi >= lo;
    return hi > lo;
  };
  if (!axis_ok(range_min_m, range_max_m, range_count) || range_min_m < 0.0)
    throw ValidationError("bad range axis");
  if (!axis_ok(velocity_min_mps, velocity_max_mps, velocity_count))
    throw ValidationError("bad velocity axis");
}

Eigen::MatrixXcd build_range_compensation(const SearchGrid& grid,
                                          const OfdmConfig& cfg) {
  cfg.validate();
  grid.validate();
  Eigen::MatrixXcd a(grid.range_count, cfg.subcarriers);
  const double per_meter =
      kTwoPi * cfg.subcarrier_spacing_hz() * 2.0 / kLightSpeed;
  for (int k = 0; k < grid.range_count; ++k) {
    const double rate = per_meter * grid.range_at(k);
    for (int m = 0; m < cfg.subcarriers; ++m) a(k, m) = std::polar(1.0, rate * m);
  }
  return a;
}

Eigen::MatrixXcd build_velocity_compensation(const SearchGrid& grid,
                                             const OfdmConfig& cfg) {
  cfg.validate();
  grid.validate();
  Eigen::MatrixXcd c(cfg.symbols, grid.velocity_count);
  const double per_mps =
      -kTwoPi * cfg.carrier_hz * 2.0 * cfg.symbol_duration_s / kLightSpeed;
  for (int p = 0; p < grid.velocity_count; ++p) {
    const double rate = per_mps * grid.velocity_at(p);
    for (int n = 0; n < cfg.symbols; ++n) c(n, p) = std::polar(1.0, rate * n);
  }
  return c;
}

CoarseEstimate coarse_estimate(const EchoMatrix& echo, const SearchGrid& grid,
                               const OfdmConfig& cfg, bool keep_magnitude) {
  cfg.validate();
  grid.validate();
  check_echo_shape(echo, cfg);

  const Eigen::MatrixXcd a = build_range_compensation(grid, cfg);
  const Eigen::MatrixXcd c = build_velocity_compensation(grid, cfg);
  // Associate as (echo * c) first: that ordering is the cheaper product for
  // the usual grid shapes and halves the flop count of the search.
  const Eigen::MatrixXd mag = (a * (echo * c)).cwiseAbs();

  CoarseEstimate est;
  double best = -1.0;
  for (int k = 0; k < grid.range_count; ++k) {
    for (int p = 0; p < grid.velocity_count; ++p) {
      if (mag(k, p) > best) {  // strict: first peak wins, lowest (k, p)
        best = mag(k, p);
        est.range_index = k;
        est.velocity_index = p;
      }
    }
  }
  est.peak_magnitude = best;
  est.range_m = grid.range_at(est.range_index);
  est.radial_velocity_mps = grid.velocity_at(est.velocity_index);
  if (keep_magnitude) est.magnitude = mag;
  return est;
}

CVec range_feature_vector(const EchoMatrix& echo, double velocity_ref_mps,
                          const OfdmConfig& cfg) {
  cfg.validate();
  check_echo_shape(echo, cfg);
  if (!std::isfinite(velocity_ref_mps))
    throw ValidationError("velocity reference must be finite");
  CVec comp(cfg.symbols);
  const double rate = -kTwoPi * cfg.carrier_hz * 2.0 * velocity_ref_mps *
                      cfg.symbol_duration_s / kLightSpeed;
  for (int n = 0; n < cfg.symbols; ++n) comp(n) = std::polar(1.0, rate * n);
  return echo * comp;
}

CVec velocity_feature_vector(const EchoMatrix& echo, double range_ref_m,
                             const OfdmConfig& cfg) {
  cfg.validate();
  check_echo_shape(echo, cfg);
  if (!std::isfinite(range_ref_m))
    throw ValidationError("range reference must be finite");
  CVec comp(cfg.subcarriers);
  const double rate =
      kTwoPi * cfg.subcarrier_spacing_hz() * 2.0 * range_ref_m / kLightSpeed;
  for (int m = 0; m < cfg.subcarriers; ++m) comp(m) = std::polar(1.0, rate * m);
  return echo.transpose() * comp;
}

BsReport make_report(const EchoMatrix& echo, const SearchGrid& grid,
                     const OfdmConfig& cfg, int bs_index) {
  const CoarseEstimate est = coarse_estimate(echo, grid, cfg);
  BsReport report;
  report.bs_index = bs_index;
  report.range_m = est.range_m;
  report.radial_velocity_mps = est.radial_velocity_mps;
  report.range_features = range_feature_vector(echo, est.radial_velocity_mps, cfg);
  report.velocity_features = velocity_feature_vector(echo, est.range_m, cfg);
  return report;
}

}  // namespace coopsense
