#include "coopsense/mle_baseline.hpp"

#include <cmath>

#include "internal.hpp"

namespace coopsense {

namespace {

void check_inputs(std::span<const Vec2> bs, std::span<const double> measured,
                  std::span<const double> variances) {
  if (bs.size() != measured.size() || bs.size() != variances.size())
    throw ValidationError("stations, measurements and variances must align");
  if (bs.size() < 2) throw ValidationError("need at least two stations");
  for (double v : variances)
    if (!std::isfinite(v) || v <= 0.0)
      throw ValidationError("variances must be positive and finite");
  for (double m : measured)
    if (!std::isfinite(m)) throw ValidationError("measurements must be finite");
}

double location_loglik_unchecked(const Vec2& candidate, std::span<const Vec2> bs,
                                 std::span<const double> measured_ranges,
                                 std::span<const double> range_variances) {
  double sum = 0.0;
  for (size_t w = 0; w < bs.size(); ++w) {
    const double err = measured_ranges[w] - (candidate - bs[w]).norm();
    sum += -0.5 * std::log(kTwoPi * range_variances[w]) -
           err * err / (2.0 * range_variances[w]);
  }
  return sum;
}

double velocity_loglik_unchecked(const Vec2& candidate, const Vec2& est_location,
                                 std::span<const Vec2> bs,
                                 std::span<const double> measured_radial,
                                 std::span<const double> radial_variances) {
  double sum = 0.0;
  for (size_t w = 0; w < bs.size(); ++w) {
    const Vec2 u = (bs[w] - est_location).normalized();
    const double err = measured_radial[w] - candidate.dot(u);
    sum += -0.5 * std::log(kTwoPi * radial_variances[w]) -
           err * err / (2.0 * radial_variances[w]);
  }
  return sum;
}

}  // namespace

double location_log_likelihood(const Vec2& candidate, std::span<const Vec2> bs,
                               std::span<const double> measured_ranges,
                               std::span<const double> range_variances) {
  check_inputs(bs, measured_ranges, range_variances);
  return location_loglik_unchecked(candidate, bs, measured_ranges, range_variances);
}

double velocity_log_likelihood(const Vec2& candidate, const Vec2& est_location,
                               std::span<const Vec2> bs,
                               std::span<const double> measured_radial,
                               std::span<const double> radial_variances) {
  check_inputs(bs, measured_radial, radial_variances);
  return velocity_loglik_unchecked(candidate, est_location, bs, measured_radial,
                                   radial_variances);
}

Vec2 mle_locate(std::span<const Vec2> bs, std::span<const double> measured_ranges,
                std::span<const double> range_variances, const Lattice& lattice) {
  check_inputs(bs, measured_ranges, range_variances);
  lattice.validate();
  return detail::lattice_argmax(lattice, [&](const Vec2& node) {
    return location_loglik_unchecked(node, bs, measured_ranges, range_variances);
  });
}

Vec2 mle_velocity(const Vec2& est_location, std::span<const Vec2> bs,
                  std::span<const double> measured_radial,
                  std::span<const double> radial_variances,
                  const Lattice& lattice) {
  check_inputs(bs, measured_radial, radial_variances);
  lattice.validate();
  return detail::lattice_argmax(lattice, [&](const Vec2& node) {
    return velocity_loglik_unchecked(node, est_location, bs, measured_radial,
                                     radial_variances);
  });
}

}  // namespace coopsense
