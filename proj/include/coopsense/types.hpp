/// Core value types shared across the cooperative sensing library.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace coopsense {

using cplx = std::complex<double>;
using EchoMatrix = Eigen::MatrixXcd;  // subcarriers x symbols
using CVec = Eigen::VectorXcd;
using Vec2 = Eigen::Vector2d;

inline constexpr double kLightSpeed = 299792458.0;  // m/s
inline constexpr double kTwoPi = 6.283185307179586476925287;

/// Raised when a configuration value or input violates a contract.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised on serialization / file I/O failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// OFDM waveform description. Subcarrier spacing is bandwidth / subcarriers;
/// the symbol duration is the full (cyclic-prefixed) spacing between
/// consecutive symbols as seen by the slow-time phase progression.
struct OfdmConfig {
  double carrier_hz = 24e9;
  double bandwidth_hz = 93.1e6;
  int subcarriers = 128;
  int symbols = 256;
  double symbol_duration_s = 12.375e-6;

  double subcarrier_spacing_hz() const { return bandwidth_hz / subcarriers; }
  double elementary_duration_s() const { return 1.0 / subcarrier_spacing_hz(); }

  /// Range beyond which fast-time phases wrap onto an earlier range.
  double unambiguous_range_m() const {
    return kLightSpeed / (2.0 * subcarrier_spacing_hz());
  }
  /// Half-width of the radial-velocity window before slow-time phase wrap.
  double unambiguous_velocity_mps() const {
    return kLightSpeed / (4.0 * carrier_hz * symbol_duration_s);
  }
  double range_resolution_m() const { return kLightSpeed / (2.0 * bandwidth_hz); }
  double velocity_resolution_mps() const {
    return kLightSpeed / (2.0 * carrier_hz * symbols * symbol_duration_s);
  }

  void validate() const;  // throws ValidationError
};

/// One sensing scene: base stations, a point target, and per-station complex
/// channel gains. `noise_seed` pins the additive-noise stream so a scenario
/// replays bit-identically.
struct Scenario {
  std::vector<Vec2> bs_positions;
  Vec2 target_position{0.0, 0.0};
  Vec2 target_velocity{0.0, 0.0};
  std::vector<cplx> channel_gains;  // one per base station
  std::uint64_t noise_seed = 0;

  int bs_count() const { return static_cast<int>(bs_positions.size()); }
  void validate() const;  // throws ValidationError
};

}  // namespace coopsense
