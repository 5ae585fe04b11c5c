/// Fusion-center location estimation from station reports.
///
/// A rough fix from the reported ranges (circle intersection for two
/// stations, linearized least squares for more) centers a lattice of
/// candidate points. Each station's range feature vector is folded into
/// averaged conjugate lag products, whose phase ramp depends only on the
/// true range; rotating a lag product by a candidate's range phase and
/// taking the real part peaks when the candidate matches the true range for
/// that station. The per-station factors are multiplied before summing over
/// lags, so a candidate must agree with every station at once.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <optional>
#include <span>

#include "coopsense/single_bs.hpp"
#include "coopsense/types.hpp"

namespace coopsense {

/// Area the target is known to occupy; used to reject the mirror solution of
/// a two-circle fix.
struct SensingRegion {
  Vec2 center{5.0, 5.0};
  double radius = 60.0;
  bool contains(const Vec2& p) const { return (p - center).norm() <= radius; }
};

/// Intersection of the two range circles. Empty when the circles do not
/// intersect (after a small tolerance for tangency); the two points coincide
/// at exact tangency.
std::optional<std::array<Vec2, 2>> rough_location_pair(const Vec2& bs_q,
                                                       const Vec2& bs_s,
                                                       double range_q,
                                                       double range_s);

/// Fallback fix for non-intersecting circles: midpoint of the closest pair
/// of points on the two circles. Always defined for distinct centers.
Vec2 closest_approach_midpoint(const Vec2& bs_q, const Vec2& bs_s,
                               double range_q, double range_s);

/// Rough fix from reported ranges. Two stations: circle intersection with
/// region disambiguation, closest-approach fallback when the circles miss.
/// Three or more: linearized least squares on differenced squared ranges;
/// empty when the geometry is ill-conditioned (collinear stations).
std::optional<Vec2> rough_location(std::span<const Vec2> bs,
                                   std::span<const double> ranges,
                                   const SensingRegion& region);

/// Averaged conjugate lag products of a feature vector x (length L >= 2):
/// out(k-1) = 1/(L-k) * sum_a x(a) conj(x(a+k)), k = 1..L-1. The unknown
/// channel phase cancels; for range features the result is a pure phase ramp
/// in the true range scaled by the squared compressed gain.
CVec build_range_lags(const CVec& range_features);

/// Square lattice of candidate points, (2*round(half_extent/spacing)+1)^2
/// nodes centered on `center`. Nodes enumerate row-major: iy (low y to high)
/// outer, ix inner.
struct Lattice {
  Vec2 center{0.0, 0.0};
  double half_extent = 5.0;
  double spacing = 0.1;

  int per_axis() const {
    return 2 * static_cast<int>(std::llround(half_extent / spacing)) + 1;
  }
  Vec2 node(int ix, int iy) const {
    const int mid = per_axis() / 2;
    return center + spacing * Vec2(ix - mid, iy - mid);
  }
  void validate() const;  // throws ValidationError
};

/// Coherence weight of one candidate point: sum over lags of the product
/// over stations of Re(lag * exp(-j 2 pi k df 2 R_candidate / c)). Equals
/// (lag count) * prod |gain|^2 terms at the true location in noiseless data.
double location_weight(const Vec2& candidate, std::span<const CVec> range_lags,
                       std::span<const Vec2> bs, const OfdmConfig& cfg);

/// Full weight map over a lattice; entry (iy, ix) matches Lattice::node.
Eigen::MatrixXd location_weight_grid(const Lattice& lattice,
                                     std::span<const CVec> range_lags,
                                     std::span<const Vec2> bs,
                                     const OfdmConfig& cfg);

/// Argmax of location_weight over the lattice. Ties resolve to the node
/// nearest the lattice center, then to the lowest row-major index.
Vec2 estimate_location(std::span<const CVec> range_lags,
                       std::span<const Vec2> bs, const OfdmConfig& cfg,
                       const Lattice& lattice);

/// Convenience overload that builds the lag vectors from reports.
Vec2 estimate_location(std::span<const BsReport> reports,
                       std::span<const Vec2> bs, const OfdmConfig& cfg,
                       const Lattice& lattice);

}  // namespace coopsense
