/// Closed-form SNR predictors for the two processing chains, plus the
/// Gaussian product-fusion moment rule. noise_var is the per-entry complex
/// noise variance of the symbol matrix at unit channel gain.
#pragma once

#include <span>

#include "coopsense/types.hpp"

namespace coopsense {

/// Peak SNR of the full coherent two-dimensional search:
/// subcarriers * symbols / noise_var.
double matched_filter_peak_snr(int subcarriers, int symbols, double noise_var);

/// sum_{k=1}^{n-1} 1/(n-k), the variance inflation from averaging fewer
/// products at deeper lags.
double harmonic_tail_sum(int n);

/// Integral upper bound 1 + ln(n-1) for harmonic_tail_sum(n).
double harmonic_tail_bound(int n);

/// SNR of the rotated-lag sum statistic with the exact harmonic factor.
double lag_sum_snr(int subcarriers, int symbols, double noise_var);

/// Lower bound on lag_sum_snr using harmonic_tail_bound:
/// (n-1)^2 s^2 / (noise_var (s + noise_var/2) (1 + ln(n-1))).
double lag_sum_snr_bound(int subcarriers, int symbols, double noise_var);

enum class LogBase { natural, base10 };

/// Ratio of the lag-sum SNR bound to the matched-filter SNR at noise
/// variance 100, in the printed approximate form
/// (n-2) s / ((s + 50) (1 + log(n-1))). The published value 18.04 for
/// n = 128, s = 256 requires the natural log; the base-10 variant is kept to
/// document the discrepancy.
double snr_margin_constant(int subcarriers, int symbols,
                           LogBase base = LogBase::natural);

struct GaussianEstimate {
  double mean = 0.0;
  double variance = 0.0;
};

/// Moments of the normalized product of Gaussian densities: two estimates
/// fuse to mean (m2 v1 + m1 v2) / (v1 + v2) and variance v1 v2 / (v1 + v2);
/// more fold left pairwise. Fused variance never exceeds the smallest input
/// variance; equal-variance inputs average their means.
GaussianEstimate fuse_gaussian_product(std::span<const GaussianEstimate> inputs);

struct SnrPrediction {
  double matched_filter_snr = 0.0;
  double lag_sum_snr = 0.0;
  double lag_sum_snr_bound = 0.0;
  double margin_constant = 0.0;
};

SnrPrediction predict_snr(const OfdmConfig& cfg, double noise_var);

}  // namespace coopsense
