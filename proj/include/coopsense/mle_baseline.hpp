/// Measurement-domain maximum likelihood baseline. Works only from the
/// per-station scalar estimates (range, radial velocity) plus calibrated
/// Gaussian error variances, searching the same lattices with the same tie
/// rules as the coherent fusion path so comparisons isolate the value of the
/// feature vectors.
#pragma once

#include <span>

#include "coopsense/fusion_location.hpp"
#include "coopsense/types.hpp"

namespace coopsense {

/// Log likelihood of a candidate point given measured ranges with
/// independent Gaussian errors (variance per station).
double location_log_likelihood(const Vec2& candidate, std::span<const Vec2> bs,
                               std::span<const double> measured_ranges,
                               std::span<const double> range_variances);

/// Log likelihood of a candidate velocity given measured radial speeds; the
/// projections are taken from est_location.
double velocity_log_likelihood(const Vec2& candidate, const Vec2& est_location,
                               std::span<const Vec2> bs,
                               std::span<const double> measured_radial,
                               std::span<const double> radial_variances);

/// Lattice argmax of location_log_likelihood.
Vec2 mle_locate(std::span<const Vec2> bs, std::span<const double> measured_ranges,
                std::span<const double> range_variances, const Lattice& lattice);

/// Lattice argmax of velocity_log_likelihood.
Vec2 mle_velocity(const Vec2& est_location, std::span<const Vec2> bs,
                  std::span<const double> measured_radial,
                  std::span<const double> radial_variances,
                  const Lattice& lattice);

}  // namespace coopsense
