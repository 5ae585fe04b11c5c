#include "coopsense/echo_model.hpp"

#include <cmath>

#include "coopsense/rng.hpp"

namespace coopsense {

namespace {

void check_index(const Scenario& scen, int bs_index) {
  if (bs_index < 0 || bs_index >= scen.bs_count())
    throw ValidationError("station index out of range");
}

}  // namespace

double true_range(const Scenario& scen, int bs_index) {
  check_index(scen, bs_index);
  return (scen.target_position - scen.bs_positions[bs_index]).norm();
}

double true_radial_velocity(const Scenario& scen, int bs_index) {
  check_index(scen, bs_index);
  const Vec2 d = scen.bs_positions[bs_index] - scen.target_position;
  const double r = d.norm();
  if (r <= 1e-9) throw ValidationError("target coincides with a station");
  return scen.target_velocity.dot(d) / r;
}

EchoMatrix synthesize_echo(const OfdmConfig& cfg, const Scenario& scen,
                           int bs_index, double snr_db, bool noiseless) {
  cfg.validate();
  scen.validate();
  check_index(scen, bs_index);
  if (!std::isfinite(snr_db)) throw ValidationError("snr_db must be finite");

  const double r = true_range(scen, bs_index);
  const double v = true_radial_velocity(scen, bs_index);
  const cplx gain = scen.channel_gains[bs_index];

  // Separable phase ramps: fast time carries range, slow time carries Doppler.
  CVec fast(cfg.subcarriers);
  const double range_rate =
      -kTwoPi * cfg.subcarrier_spacing_hz() * 2.0 * r / kLightSpeed;
  for (int m = 0; m < cfg.subcarriers; ++m) fast(m) = std::polar(1.0, range_rate * m);

  CVec slow(cfg.symbols);
  const double doppler_rate =
      kTwoPi * cfg.carrier_hz * 2.0 * v * cfg.symbol_duration_s / kLightSpeed;
  for (int n = 0; n < cfg.symbols; ++n) slow(n) = std::polar(1.0, doppler_rate * n);

  EchoMatrix echo = gain * (fast * slow.transpose());

  if (!noiseless) {
    const double variance = std::norm(gain) * std::pow(10.0, -snr_db / 10.0);
    RandomStream rng(mix_seed(scen.noise_seed, 0x6563686f6e6f6973ull,
                              static_cast<std::uint64_t>(bs_index)));
    for (int n = 0; n < cfg.symbols; ++n)
      for (int m = 0; m < cfg.subcarriers; ++m)
        echo(m, n) += rng.circular_normal(variance);
  }
  return echo;
}

}  // namespace coopsense
