#include "coopsense/snr_theory.hpp"

#include <cmath>

namespace coopsense {

namespace {

void check_dims(int subcarriers, int symbols, double noise_var) {
  if (subcarriers < 2) throw ValidationError("need at least two subcarriers");
  if (symbols < 2) throw ValidationError("need at least two symbols");
  if (!std::isfinite(noise_var) || noise_var <= 0.0)
    throw ValidationError("noise variance must be positive and finite");
}

}  // namespace

double matched_filter_peak_snr(int subcarriers, int symbols, double noise_var) {
  check_dims(subcarriers, symbols, noise_var);
  return static_cast<double>(subcarriers) * symbols / noise_var;
}

double harmonic_tail_sum(int n) {
  if (n < 2) throw ValidationError("need n >= 2");
  double sum = 0.0;
  for (int k = 1; k <= n - 1; ++k) sum += 1.0 / k;  // same terms, reordered
  return sum;
}

double harmonic_tail_bound(int n) {
  if (n < 2) throw ValidationError("need n >= 2");
  return 1.0 + std::log(static_cast<double>(n - 1));
}

double lag_sum_snr(int subcarriers, int symbols, double noise_var) {
  check_dims(subcarriers, symbols, noise_var);
  const double n1 = subcarriers - 1;
  const double s = symbols;
  return n1 * n1 * s * s /
         (noise_var * (s + noise_var / 2.0) * harmonic_tail_sum(subcarriers));
}

double lag_sum_snr_bound(int subcarriers, int symbols, double noise_var) {
  check_dims(subcarriers, symbols, noise_var);
  const double n1 = subcarriers - 1;
  const double s = symbols;
  return n1 * n1 * s * s /
         (noise_var * (s + noise_var / 2.0) * harmonic_tail_bound(subcarriers));
}

double snr_margin_constant(int subcarriers, int symbols, LogBase base) {
  if (subcarriers < 3) throw ValidationError("need at least three subcarriers");
  if (symbols < 2) throw ValidationError("need at least two symbols");
  const double logterm = base == LogBase::natural
                             ? std::log(static_cast<double>(subcarriers - 1))
                             : std::log10(static_cast<double>(subcarriers - 1));
  return (subcarriers - 2) * static_cast<double>(symbols) /
         ((symbols + 50.0) * (1.0 + logterm));
}

GaussianEstimate fuse_gaussian_product(std::span<const GaussianEstimate> inputs) {
  if (inputs.empty()) throw ValidationError("need at least one estimate");
  for (const auto& e : inputs)
    if (!std::isfinite(e.mean) || !std::isfinite(e.variance) || e.variance <= 0.0)
      throw ValidationError("estimates need positive finite variance");
  GaussianEstimate acc = inputs[0];
  for (size_t i = 1; i < inputs.size(); ++i) {
    const double v1 = acc.variance;
    const double v2 = inputs[i].variance;
    const double m1 = acc.mean;
    const double m2 = inputs[i].mean;
    acc.mean = (m2 * v1 + m1 * v2) / (v1 + v2);
    acc.variance = v1 * v2 / (v1 + v2);
  }
  return acc;
}

SnrPrediction predict_snr(const OfdmConfig& cfg, double noise_var) {
  cfg.validate();
  SnrPrediction p;
  p.matched_filter_snr =
      matched_filter_peak_snr(cfg.subcarriers, cfg.symbols, noise_var);
  p.lag_sum_snr = lag_sum_snr(cfg.subcarriers, cfg.symbols, noise_var);
  p.lag_sum_snr_bound = lag_sum_snr_bound(cfg.subcarriers, cfg.symbols, noise_var);
  p.margin_constant = snr_margin_constant(cfg.subcarriers, cfg.symbols);
  return p;
}

}  // namespace coopsense
