/// Demodulation-symbol-domain echo synthesis for one base station.
///
/// After element-wise division by the known transmitted constellation
/// symbols, the echo contribution of a point target reduces to a complex
/// gain times a separable phase ramp: subcarrier index m carries the
/// round-trip range phase exp(-j 2 pi m df 2R/c) and symbol index n carries
/// the Doppler phase exp(+j 2 pi fc 2v n T / c), v > 0 for a closing target.
#pragma once

#include "coopsense/types.hpp"

namespace coopsense {

double true_range(const Scenario& scen, int bs_index);

/// Radial speed of the target toward the station (positive = closing).
double true_radial_velocity(const Scenario& scen, int bs_index);

/// Builds the post-division symbol matrix (subcarriers x symbols) for one
/// station. Unless `noiseless`, adds circular complex noise per entry with
/// variance |gain|^2 * 10^(-snr_db/10); the noise stream is derived from
/// (scenario.noise_seed, bs_index) so synthesis is reproducible.
EchoMatrix synthesize_echo(const OfdmConfig& cfg, const Scenario& scen,
                           int bs_index, double snr_db, bool noiseless);

}  // namespace coopsense
