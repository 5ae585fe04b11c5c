/// Independent scalar reference implementations used to cross-check the
/// library. Everything here is written directly from the defining formulas
/// with plain loops and no calls into the library, so a library bug cannot
/// hide behind a shared helper.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace oracles {

using cplx = std::complex<double>;
inline constexpr double kC = 299792458.0;
inline constexpr double kTwoPi = 6.283185307179586476925287;

/// Noiseless symbol-matrix entry for a target at range r, radial speed v
/// (positive closing), channel gain u.
inline cplx echo_entry(int m, int n, double subcarrier_spacing, double carrier,
                       double symbol_duration, double r, double v, cplx u) {
  const double range_phase = -kTwoPi * m * subcarrier_spacing * 2.0 * r / kC;
  const double doppler_phase = kTwoPi * carrier * 2.0 * v * n * symbol_duration / kC;
  return u * std::polar(1.0, range_phase + doppler_phase);
}

/// Range feature entry m: slow-time sum of the echo against a velocity
/// reference. Closed form: u * D * exp(-j 2 pi m df 2 r / c) with
/// D = sum_n exp(+j 2 pi fc 2 (v - v_ref) n T / c).
inline cplx range_feature_entry(int m, int symbols, double subcarrier_spacing,
                                double carrier, double symbol_duration, double r,
                                double v, double v_ref, cplx u) {
  cplx d(0.0, 0.0);
  for (int n = 0; n < symbols; ++n) {
    d += std::polar(1.0, kTwoPi * carrier * 2.0 * (v - v_ref) * n *
                             symbol_duration / kC);
  }
  return u * d * std::polar(1.0, -kTwoPi * m * subcarrier_spacing * 2.0 * r / kC);
}

/// Velocity feature entry n: fast-time sum against a range reference.
/// Closed form: u * D' * exp(+j 2 pi fc 2 v n T / c) with
/// D' = sum_m exp(+j 2 pi m df 2 (r_ref - r) / c).
inline cplx velocity_feature_entry(int n, int subcarriers,
                                   double subcarrier_spacing, double carrier,
                                   double symbol_duration, double r, double v,
                                   double r_ref, cplx u) {
  cplx d(0.0, 0.0);
  for (int m = 0; m < subcarriers; ++m) {
    d += std::polar(1.0, kTwoPi * m * subcarrier_spacing * 2.0 * (r_ref - r) / kC);
  }
  return u * d * std::polar(1.0, kTwoPi * carrier * 2.0 * v * n * symbol_duration / kC);
}

/// Averaged conjugate lag products, out[k-1] for k = 1..L-1.
inline std::vector<cplx> lag_products(const std::vector<cplx>& x) {
  const int L = static_cast<int>(x.size());
  std::vector<cplx> out;
  out.reserve(L - 1);
  for (int k = 1; k < L; ++k) {
    cplx s(0.0, 0.0);
    for (int a = 0; a + k < L; ++a) s += x[a] * std::conj(x[a + k]);
    out.push_back(s / static_cast<double>(L - k));
  }
  return out;
}

/// Compensated sum of a symbol matrix (row-major vector, subcarriers x
/// symbols) at one candidate (r, v); the coarse search maximizes its
/// magnitude over the grid.
inline cplx periodogram_cell(const std::vector<cplx>& echo, int subcarriers,
                             int symbols, double subcarrier_spacing,
                             double carrier, double symbol_duration, double r,
                             double v) {
  cplx s(0.0, 0.0);
  for (int m = 0; m < subcarriers; ++m) {
    for (int n = 0; n < symbols; ++n) {
      const double phase = kTwoPi * m * subcarrier_spacing * 2.0 * r / kC -
                           kTwoPi * carrier * 2.0 * v * n * symbol_duration / kC;
      s += echo[static_cast<size_t>(m) * symbols + n] * std::polar(1.0, phase);
    }
  }
  return s;
}

/// Sum of squared range residuals of a candidate point; the location fixes
/// should (approximately) minimize this.
inline double range_residual_sq(double px, double py,
                                const std::vector<double>& bx,
                                const std::vector<double>& by,
                                const std::vector<double>& ranges) {
  double s = 0.0;
  for (size_t w = 0; w < ranges.size(); ++w) {
    const double d = std::hypot(px - bx[w], py - by[w]) - ranges[w];
    s += d * d;
  }
  return s;
}

/// Independent Gaussian log likelihood of ranges given a candidate point.
inline double location_loglik(double px, double py,
                              const std::vector<double>& bx,
                              const std::vector<double>& by,
                              const std::vector<double>& ranges,
                              const std::vector<double>& variances) {
  double s = 0.0;
  for (size_t w = 0; w < ranges.size(); ++w) {
    const double d = std::hypot(px - bx[w], py - by[w]);
    const double e = ranges[w] - d;
    s += -0.5 * std::log(kTwoPi * variances[w]) - e * e / (2.0 * variances[w]);
  }
  return s;
}

}  // namespace oracles
