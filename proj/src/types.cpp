#include "coopsense/types.hpp"

#include <cmath>

namespace coopsense {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw ValidationError(msg);
}

bool finite(const Vec2& v) { return std::isfinite(v.x()) && std::isfinite(v.y()); }

}  // namespace

void OfdmConfig::validate() const {
  require(std::isfinite(carrier_hz) && carrier_hz > 0.0,
          "carrier frequency must be positive");
  require(std::isfinite(bandwidth_hz) && bandwidth_hz > 0.0,
          "bandwidth must be positive");
  require(subcarriers >= 2, "need at least two subcarriers");
  require(symbols >= 2, "need at least two symbols");
  require(std::isfinite(symbol_duration_s) && symbol_duration_s > 0.0,
          "symbol duration must be positive");
}

void Scenario::validate() const {
  require(!bs_positions.empty(), "scenario needs at least one station");
  require(channel_gains.size() == bs_positions.size(),
          "one channel gain per station required");
  require(finite(target_position) && finite(target_velocity),
          "target state must be finite");
  for (const auto& p : bs_positions)
    require(finite(p), "station positions must be finite");
  for (const auto& g : channel_gains)
    require(std::isfinite(g.real()) && std::isfinite(g.imag()) &&
                std::abs(g) > 0.0,
            "channel gains must be finite and nonzero");
  for (const auto& p : bs_positions)
    require((target_position - p).norm() > 1e-9,
            "target coincides with a station");
}

}  // namespace coopsense
