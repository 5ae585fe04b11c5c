/// Fusion-center velocity estimation, run after the location fix.
///
/// Each station's velocity feature vector is folded into averaged conjugate
/// lag products whose phase ramp depends only on the true radial speed
/// toward that station. A lattice of candidate velocity vectors is scored by
/// rotating each station's lags with the candidate's radial projection
/// (taken from the estimated location) and multiplying the real parts across
/// stations before summing over lags.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>

#include "coopsense/fusion_location.hpp"
#include "coopsense/single_bs.hpp"
#include "coopsense/types.hpp"

namespace coopsense {

/// Bearing (radians) of the direction from `from` toward `to`.
double bearing(const Vec2& from, const Vec2& to);

/// Radial speed of `velocity` toward station `bs` as seen from `position`
/// (positive = closing).
double radial_velocity_toward(const Vec2& velocity, const Vec2& position,
                              const Vec2& bs);

/// Two-station velocity fix: invert the radial projections along bearings
/// theta_q and theta_s. Empty when |sin(theta_s - theta_q)| < 1e-3 (nearly
/// parallel lines of sight).
std::optional<Vec2> rough_velocity_pair(double theta_q, double theta_s,
                                        double radial_q, double radial_s);

/// Least-squares velocity fix from any number (>= 2) of radial speeds and
/// bearings; empty when the normal equations are ill-conditioned.
std::optional<Vec2> rough_velocity(std::span<const double> radial_speeds,
                                   std::span<const double> bearings);

/// Averaged conjugate lag products of the velocity feature vector; same
/// kernel as build_range_lags, kept separate because the phase ramp runs in
/// the opposite direction (lag phase = -2 pi fc 2 v k T / c).
CVec build_velocity_lags(const CVec& velocity_features);

/// Coherence weight of one candidate velocity: sum over lags of the product
/// over stations of Re(lag * exp(+j 2 pi fc 2 v_radial k T / c)) where
/// v_radial projects the candidate toward each station from est_location.
double velocity_weight(const Vec2& candidate, std::span<const CVec> velocity_lags,
                       const Vec2& est_location, std::span<const Vec2> bs,
                       const OfdmConfig& cfg);

/// Full weight map over a velocity lattice; entry (iy, ix) matches
/// Lattice::node (axes are vx, vy in m/s).
Eigen::MatrixXd velocity_weight_grid(const Lattice& lattice,
                                     std::span<const CVec> velocity_lags,
                                     const Vec2& est_location,
                                     std::span<const Vec2> bs,
                                     const OfdmConfig& cfg);

/// Argmax of velocity_weight over the lattice; same tie rules as
/// estimate_location.
Vec2 estimate_velocity(std::span<const CVec> velocity_lags,
                       const Vec2& est_location, std::span<const Vec2> bs,
                       const OfdmConfig& cfg, const Lattice& lattice);

Vec2 estimate_velocity(std::span<const BsReport> reports,
                       const Vec2& est_location, std::span<const Vec2> bs,
                       const OfdmConfig& cfg, const Lattice& lattice);

}  // namespace coopsense
